#include <qseries/cli.hpp>

#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include <qseries/ainfty.hpp>
#include <qseries/ainfty_json.hpp>
#include <qseries/golden.hpp>
#include <qseries/gw_pipeline.hpp>
#include <qseries/lefschetz.hpp>
#include <qseries/modular.hpp>
#include <qseries/schwarzian.hpp>
#include <qseries/series_json.hpp>

namespace qseries::cli
{

namespace
{

using nlohmann::json;

struct Check {
    std::string name;
    bool pass;
    std::string detail;
};

// Collects named outputs and checks, then prints them as text or JSON.
class Report
{
public:
    explicit Report(std::string command) : m_command(std::move(command)) {}

    void series(const std::string &name, const RSeries &s)
    {
        m_text.push_back(name + " = " + to_display(s));
        m_series.push_back({{"name", name}, {"series", series_to_json(s)}});
    }

    void laurent_series(const std::string &name, const BSeries &s)
    {
        m_text.push_back(name + " = " + to_display(s));
        json terms = json::array();
        for (const auto &[e, c] : s.terms())
            terms.push_back({{"exp", e}, {"coeff", c.to_string()}});
        m_series.push_back({{"name", name}, {"series", {{"var", s.var()}, {"order", s.order()}, {"terms", terms}}}});
    }

    void cochain(const std::string &name, const Cochain &c)
    {
        const GradedBasis &b = *c.basis();
        m_text.push_back(name + ": degree " + std::to_string(c.degree()) + ", arity <= " + std::to_string(c.arity_cap())
                         + ", mod q^" + std::to_string(c.q_order()) + ", " + std::to_string(count(c)) + " entries");
        for (const auto &[t, outs] : c.entries())
            for (const auto &[o, s] : outs) {
                std::string line = "  (";
                for (std::size_t i = 0; i < t.size(); ++i)
                    line += (i ? ", " : "") + b.names[static_cast<std::size_t>(t[i])];
                m_text.push_back(line + ") -> " + b.names[static_cast<std::size_t>(o)] + " : " + to_display(s));
            }
        m_cochains[name] = cochain_to_json(c);
    }

    void value(const std::string &name, const json &v)
    {
        m_text.push_back(name + ": " + (v.is_string() ? v.get<std::string>() : v.dump()));
        m_values[name] = v;
    }

    void check(const std::string &name, bool pass, const std::string &detail = "")
    {
        m_checks.push_back({name, pass, detail});
    }

    // First exponent where s leaves the golden table, as a check.
    void golden(const RSeries &s, const GoldenSeries &g)
    {
        const auto at = golden_mismatch(s, g);
        check(g.name + " matches reference table", !at,
              at ? "first mismatch at " + g.var + "^" + std::to_string(*at) : "");
    }

    int emit(bool as_json, std::ostream &out, std::ostream &err) const
    {
        if (as_json) {
            json checks = json::array();
            for (const auto &c : m_checks) {
                json j{{"name", c.name}, {"pass", c.pass}};
                if (!c.detail.empty())
                    j["detail"] = c.detail;
                checks.push_back(j);
            }
            json doc{{"command", m_command}, {"series", m_series}, {"checks", checks}};
            if (!m_cochains.empty())
                doc["cochains"] = m_cochains;
            if (!m_values.empty())
                doc["values"] = m_values;
            out << doc.dump(2) << "\n";
        } else {
            for (const auto &line : m_text)
                out << line << "\n";
            for (const auto &c : m_checks)
                out << (c.pass ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : " (" + c.detail + ")") << "\n";
        }
        for (const auto &c : m_checks)
            if (!c.pass) {
                err << m_command << ": " << c.name << " failed" << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
                return mismatch;
            }
        return ok;
    }

private:
    static std::size_t count(const Cochain &c)
    {
        std::size_t n = 0;
        for (const auto &[t, outs] : c.entries())
            n += outs.size();
        return n;
    }

    std::string m_command;
    std::vector<std::string> m_text;
    json m_series = json::array();
    json m_cochains = json::object();
    json m_values = json::object();
    std::vector<Check> m_checks;
};

std::string first_difference_text(const RSeries &a, const RSeries &b)
{
    const auto at = first_difference(a, b);
    return at ? "first difference at q^" + std::to_string(*at) : "";
}

std::string nonzero_text(const RSeries &r)
{
    return r.is_zero() ? "" : "first nonzero coefficient at q^" + std::to_string(r.valuation());
}

json read_json_file(const std::optional<std::string> &path, const std::string &command)
{
    if (!path)
        throw std::invalid_argument(command + " needs --input");
    std::ifstream in(*path);
    if (!in)
        throw std::invalid_argument("cannot open input file " + *path);
    try {
        return json::parse(in);
    } catch (const json::parse_error &e) {
        throw std::invalid_argument("input file " + *path + " is not valid JSON: " + e.what());
    }
}

void require_order(int order, int minimum, const std::string &command)
{
    if (order < minimum)
        throw std::invalid_argument(command + ": --order must be at least " + std::to_string(minimum));
}

int cubic_f(const CommandConfig &c, std::ostream &out, std::ostream &err)
{
    require_order(c.order, 1, "cubic-f");
    Report r("cubic-f");
    const RSeries f = eta_quotient_hauptmodul(c.order).series;
    r.series("f", f);
    if (c.verify)
        r.golden(f, golden_cubic_f());
    return r.emit(c.json, out, err);
}

int cubic_verify(const CommandConfig &c, std::ostream &out, std::ostream &err)
{
    require_order(c.order, 7, "cubic-verify");
    Report r("cubic-verify");
    const RSeries f_eta = eta_quotient_hauptmodul(c.order).series;
    const RSeries f_sch = solve_schwarzian(cubic_schwarzian_target(c.order), Rational(1), Rational(0)).truncated(c.order);
    r.series("f", f_eta);
    r.check("eta quotient and Schwarzian solution agree", f_eta == f_sch, first_difference_text(f_eta, f_sch));
    const E4Residuals e4 = verify_e4_equation(c.order);
    r.check("assembled E4 residual vanishes", e4.assembled.is_zero(), nonzero_text(e4.assembled));
    r.check("direct E4 residual vanishes", e4.direct.is_zero(), nonzero_text(e4.direct));
    const RSeries pf = verify_picard_fuchs(c.order);
    r.check("Picard-Fuchs residual vanishes", pf.is_zero(), nonzero_text(pf));
    r.golden(f_eta, golden_cubic_f());
    return r.emit(c.json, out, err);
}

int quintic(const CommandConfig &c, std::ostream &out, std::ostream &err)
{
    require_order(c.order, 1, "quintic");
    Report r("quintic");
    const int d2 = quintic_d2_for_order(c.order);
    const PencilSeriesData p = extract_pencil_data(d2);
    const QuinticSolution s = quintic_f(d2);
    const MirrorMap m = mirror_map(std::max(d2, 4));
    const auto cut = [&](const RSeries &x) { return x.truncated(std::min(x.order(), c.order)); };
    r.series("psi", cut(p.psi));
    r.series("eta", cut(p.eta));
    r.series("z2", cut(p.z2));
    r.series("f", cut(s.f));
    r.series("y1/q1", m.y1_over_q1);
    r.series("y2", m.y2);
    r.check("f agrees with y2(q^5)^(1/5)", equal_up_to_shared_order(s.f, s.f_mirror), first_difference_text(s.f, s.f_mirror));
    r.check("f agrees with the ODE ratio", equal_up_to_shared_order(s.f, s.f_ode), first_difference_text(s.f, s.f_ode));
    if (c.verify) {
        const auto pencil = golden_quintic_pencil();
        r.golden(cut(p.psi), pencil[0]);
        r.golden(cut(p.eta), pencil[1]);
        r.golden(cut(p.z2), pencil[2]);
        r.golden(cut(s.f), pencil[3]);
        for (const auto &[series, g] : {std::pair{m.y1_over_q1, golden_quintic_mirror()[0]}, std::pair{m.y2, golden_quintic_mirror()[1]}})
            r.golden(series, g);
    }
    return r.emit(c.json, out, err);
}

int mirror(const CommandConfig &c, std::ostream &out, std::ostream &err)
{
    require_order(c.order, 2, "mirror-map");
    Report r("mirror-map");
    const MirrorMap m = mirror_map(c.order - 1);
    const RSeries y1 = m.y1_over_q1.truncated(std::min(m.y1_over_q1.order(), c.order));
    const RSeries y2 = m.y2.truncated(std::min(m.y2.order(), c.order));
    r.series("y1/q1", y1);
    r.series("y2", y2);
    if (c.verify) {
        const auto g = golden_quintic_mirror();
        r.golden(y1, g[0]);
        r.golden(y2, g[1]);
    }
    return r.emit(c.json, out, err);
}

int schwarzian_solve(const CommandConfig &c, std::ostream &out, std::ostream &err)
{
    require_order(c.order, 4, "schwarzian-solve");
    const Rational a1 = parse_rational(c.a1);
    const Rational a2 = parse_rational(c.a2);
    RSeries g;
    if (c.g == "zero")
        g = RSeries::zero("q", c.order - 3);
    else if (c.g == "cubic")
        g = cubic_schwarzian_target(c.order - 3);
    else
        throw std::invalid_argument("schwarzian-solve: --g must be zero or cubic");
    Report r("schwarzian-solve");
    const RSeries f = solve_schwarzian(g, a1, a2).truncated(c.order);
    r.series("f", f);
    const RSeries residual = schwarzian(f) + g;
    r.check("S_q f + g vanishes", residual.truncated(std::min(residual.order(), c.order - 3)).is_zero(), nonzero_text(residual));
    if (c.verify && c.g == "cubic" && a1 == 1 && a2 == 0)
        r.golden(f, golden_cubic_f());
    return r.emit(c.json, out, err);
}

int novikov(const CommandConfig &c, std::ostream &out, std::ostream &err)
{
    const int cap = c.cap.value_or(6);
    if (cap < 0)
        throw std::invalid_argument("novikov: --cap must be nonnegative");
    const GwData data = gw_data_from_json(read_json_file(c.input, "novikov"));
    Report r("novikov");
    MainPipelineResult res;
    try {
        res = theorem_main_pipeline(data, cap);
    } catch (const SupportOverflow &e) {
        throw std::invalid_argument(std::string("novikov: ") + e.what() + "; enlarge the support box");
    }
    r.series("f", res.f);
    for (std::size_t k = 0; k < res.g.size(); ++k)
        r.series("g" + std::to_string(k + 1), res.g[k]);
    r.laurent_series("b", res.b_field.b.b);
    for (std::size_t k = 0; k < res.b_field.b.b_j.size(); ++k)
        r.laurent_series("b" + std::to_string(k + 1), res.b_field.b.b_j[k]);
    r.laurent_series("eta_B", res.b_field.eta);
    r.series("G_B(q)", res.substitution.g);
    for (std::size_t k = 0; k < res.substitution.g_j.size(); ++k)
        r.series("G_B(q" + std::to_string(k + 1) + ")", res.substitution.g_j[k]);
    r.value("span condition", res.span_condition);
    if (res.pencil) {
        r.series("psi", res.pencil->psi);
        r.series("eta", res.pencil->eta);
    }
    r.check("G_B(K_B f) equals K f", equal_up_to_shared_order(res.f, res.f_via_b), first_difference_text(res.f, res.f_via_b));
    return r.emit(c.json, out, err);
}

std::string residual_text(const Residual &res, const GradedBasis &b)
{
    std::string s = "(";
    for (std::size_t i = 0; i < res.inputs.size(); ++i)
        s += (i ? ", " : "") + b.names[static_cast<std::size_t>(res.inputs[i])];
    return "arity " + std::to_string(res.inputs.size()) + " entry " + s + ") -> " + b.names[static_cast<std::size_t>(res.output)]
           + " at q^" + std::to_string(res.value.valuation());
}

int ainfty(const CommandConfig &c, std::ostream &out, std::ostream &err)
{
    if (c.arity < 1 || c.q_order < 1)
        throw std::invalid_argument("ainfty: --arity and --qorder must be positive");
    const AlgebraFile file = algebra_from_json(read_json_file(c.input, "ainfty"), c.arity, c.q_order);
    const AInfinityStructure &a = file.structure;
    Report r("ainfty " + c.action);
    if (c.action == "check") {
        const int d_max = a.mu.has_arity(0) ? c.arity - 1 : c.arity;
        const auto residuals = check_a_infinity(a, d_max, c.q_order);
        r.value("relations checked through arity", d_max);
        r.value("residual entries", static_cast<int>(residuals.size()));
        r.check("A-infinity relations", residuals.empty(), residuals.empty() ? "" : residual_text(residuals.front(), *a.basis()));
        return r.emit(c.json, out, err);
    }
    if (!a.is_deformation())
        throw std::invalid_argument("ainfty: curvature has a q-constant term, so this is not a deformation");
    const Cochain kappa = kaledin_representative(a);
    if (c.action == "kaledin") {
        r.cochain("kaledin", kappa);
        const Cochain d = hochschild_differential(a, kappa);
        r.check("Kaledin representative is closed", d.is_zero());
        const CoboundaryReport rep = is_coboundary(a, kappa, kappa.q_order());
        r.value("exact", rep.beta.has_value());
        r.value("valid through arity", rep.valid_arity);
        if (rep.beta)
            r.cochain("beta", *rep.beta);
        else {
            r.value("obstructed at q-order", *rep.obstructed_order);
            r.cochain("obstruction", *rep.obstruction);
        }
        return r.emit(c.json, out, err);
    }
    if (c.action == "trivialize") {
        Cochain alpha = file.connection ? *file.connection : Cochain(a.basis(), 1, c.arity, c.q_order);
        if (!file.connection) {
            const CoboundaryReport rep = is_coboundary(a, kappa, kappa.q_order());
            if (!rep.beta) {
                r.check("Kaledin class vanishes", false,
                        "obstructed at q^" + std::to_string(*rep.obstructed_order));
                return r.emit(c.json, out, err);
            }
            alpha = *rep.beta * Rational(-1);
        }
        const GaugeResult g = gauge_trivialize(a, alpha);
        r.value("steps", g.steps);
        r.cochain("mu_const", g.mu_const.mu);
        r.cochain("pullback_map", g.pullback_map.f);
        r.check("pullback of mu is q-constant", morphism_residual(g.pullback_map, g.mu_const, a).is_zero());
        r.check("transported connection is d_q", g.alpha_final.is_zero());
        return r.emit(c.json, out, err);
    }
    throw std::invalid_argument("ainfty: action must be check, kaledin or trivialize");
}

} // namespace

int run(const CommandConfig &config, std::ostream &out, std::ostream &err)
{
    static const std::map<std::string, std::function<int(const CommandConfig &, std::ostream &, std::ostream &)>> commands{
        {"cubic-f", cubic_f},       {"cubic-verify", cubic_verify}, {"quintic", quintic},
        {"mirror-map", mirror},     {"schwarzian-solve", schwarzian_solve},
        {"novikov", novikov},       {"ainfty", ainfty},
    };
    auto it = commands.find(config.subcommand);
    if (it == commands.end()) {
        err << "unknown subcommand: " << config.subcommand << "\n";
        return malformed;
    }
    try {
        return it->second(config, out, err);
    } catch (const std::invalid_argument &e) {
        err << config.subcommand << ": " << e.what() << "\n";
        return malformed;
    } catch (const std::out_of_range &e) {
        err << config.subcommand << ": " << e.what() << "\n";
        return malformed;
    } catch (const std::domain_error &e) {
        err << config.subcommand << ": " << e.what() << "\n";
        return malformed;
    } catch (const nlohmann::json::exception &e) {
        err << config.subcommand << ": malformed input: " << e.what() << "\n";
        return malformed;
    } catch (const std::logic_error &e) {
        err << config.subcommand << ": " << e.what() << "\n";
        return mismatch;
    } catch (const std::runtime_error &e) {
        err << config.subcommand << ": " << e.what() << "\n";
        return malformed;
    }
}

} // namespace qseries::cli
