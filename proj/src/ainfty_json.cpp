#include <qseries/ainfty_json.hpp>

#include <algorithm>
#include <stdexcept>
#include <string>

#include <qseries/series_json.hpp>

namespace qseries
{

namespace
{

using nlohmann::json;

[[noreturn]] void malformed(const std::string &what)
{
    throw std::invalid_argument("algebra file: " + what);
}

int index_in(const json &j, int dim, const char *what)
{
    if (!j.is_number_integer())
        malformed(std::string(what) + " must be an integer basis index");
    const auto i = j.get<long long>();
    if (i < 0 || i >= dim)
        malformed(std::string(what) + " " + std::to_string(i) + " is not a basis index");
    return static_cast<int>(i);
}

Cochain read_entries(const json &list, const BasisPtr &basis, int degree, int arity_cap, int q_order, const char *what)
{
    if (!list.is_array())
        malformed(std::string(what) + " must be an array");
    Cochain c(basis, degree, arity_cap, q_order);
    for (const auto &e : list) {
        if (!e.is_object() || !e.contains("inputs") || !e.contains("output") || !e.contains("coeff_series"))
            malformed(std::string(what) + " entries need inputs, output and coeff_series");
        const json &in = e.at("inputs");
        if (!in.is_array())
            malformed("inputs must be an array");
        if (e.contains("arity") && (!e.at("arity").is_number_integer() || e.at("arity").get<long long>() != static_cast<long long>(in.size())))
            malformed("arity does not match the number of inputs");
        Tuple t;
        for (const auto &x : in)
            t.push_back(index_in(x, basis->dim(), "input"));
        const int out = index_in(e.at("output"), basis->dim(), "output");
        RSeries s = series_from_json(e.at("coeff_series"));
        if (s.order() < q_order)
            malformed("coeff_series known only through q^" + std::to_string(s.order() - 1) + ", below the requested q-order");
        c.add(t, out, s.truncated(q_order));
    }
    return c;
}

} // namespace

AlgebraFile algebra_from_json(const json &j, int arity_cap, int q_order)
{
    if (arity_cap < 0 || q_order < 1)
        throw std::invalid_argument("algebra file: arity cap must be >= 0 and q-order >= 1");
    try {
        if (!j.is_object() || !j.contains("basis") || !j.at("basis").is_array() || j.at("basis").empty())
            malformed("missing nonempty \"basis\" array");
        GradedBasis b;
        for (const auto &x : j.at("basis")) {
            if (!x.is_object() || !x.contains("degree") || !x.at("degree").is_number_integer())
                malformed("basis elements need an integer degree");
            b.names.push_back(x.contains("name") ? x.at("name").get<std::string>() : "e" + std::to_string(b.names.size()));
            b.degrees.push_back(x.at("degree").get<int>());
        }
        if (j.contains("unit"))
            b.unit = index_in(j.at("unit"), b.dim(), "unit");
        const BasisPtr basis = std::make_shared<const GradedBasis>(std::move(b));
        if (!j.contains("entries"))
            malformed("missing \"entries\"");
        AlgebraFile out{{read_entries(j.at("entries"), basis, 2, arity_cap, q_order, "entries")}, std::nullopt};
        if (j.contains("connection"))
            out.connection = read_entries(j.at("connection"), basis, 1, arity_cap, q_order, "connection");
        return out;
    } catch (const json::exception &e) {
        malformed(e.what());
    }
}

json cochain_to_json(const Cochain &c)
{
    std::vector<std::pair<const Tuple *, std::pair<int, const RSeries *>>> rows;
    for (const auto &[t, outs] : c.entries())
        for (const auto &[o, s] : outs)
            rows.push_back({&t, {o, &s}});
    std::stable_sort(rows.begin(), rows.end(), [](const auto &a, const auto &b) { return a.first->size() < b.first->size(); });
    json entries = json::array();
    for (const auto &[t, os] : rows)
        entries.push_back({{"arity", t->size()}, {"inputs", *t}, {"output", os.first}, {"coeff_series", series_to_json(*os.second)}});
    return {{"degree", c.degree()}, {"arity_cap", c.arity_cap()}, {"q_order", c.q_order()}, {"entries", entries}};
}

} // namespace qseries
