#include <qseries/rational.hpp>

#include <cctype>
#include <stdexcept>

namespace qseries
{

namespace
{

bool is_integer_literal(std::string_view s, bool allow_sign)
{
    if (s.empty())
        return false;
    std::size_t i = 0;
    if (allow_sign && (s[0] == '-' || s[0] == '+'))
        i = 1;
    if (i == s.size())
        return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            return false;
    return true;
}

std::string strip_plus(std::string_view s)
{
    if (!s.empty() && s[0] == '+')
        s.remove_prefix(1);
    return std::string(s);
}

} // namespace

Rational parse_rational(std::string_view text)
{
    const auto slash = text.find('/');
    const auto num = text.substr(0, slash);
    if (!is_integer_literal(num, true))
        throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
    Rational r;
    r.get_num() = Integer(strip_plus(num));
    if (slash == std::string_view::npos) {
        r.get_den() = 1;
        return r;
    }
    const auto den = text.substr(slash + 1);
    if (!is_integer_literal(den, false))
        throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
    r.get_den() = Integer(std::string(den));
    if (r.get_den() == 0)
        throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    r.canonicalize();
    return r;
}

std::string to_string(const Rational &r)
{
    if (r.get_den() == 1)
        return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

} // namespace qseries
