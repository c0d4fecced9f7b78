#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include <qseries/cli.hpp>
#include <qseries/golden.hpp>
#include <qseries/series_json.hpp>

using namespace qseries;
using nlohmann::json;

namespace
{

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_cli(const cli::CommandConfig &c)
{
    std::ostringstream out, err;
    const int code = cli::run(c, out, err);
    return {code, out.str(), err.str()};
}

cli::CommandConfig command(const std::string &sub, int order = 14)
{
    cli::CommandConfig c;
    c.subcommand = sub;
    c.order = order;
    return c;
}

std::string data_file(const std::string &name)
{
    return std::string(QSERIES_DATA_DIR) + "/" + name;
}

std::string write_temp(const std::string &name, const std::string &contents)
{
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << contents;
    return path.string();
}

const char *const non_associative = R"({
  "basis": [{"name": "1", "degree": 0}, {"name": "eps", "degree": 0}],
  "unit": 0,
  "entries": [
    {"inputs": [0, 0], "output": 0, "coeff_series": {"var": "q", "order": 8, "terms": [{"exp": 0, "coeff": "1"}]}},
    {"inputs": [0, 1], "output": 1, "coeff_series": {"var": "q", "order": 8, "terms": [{"exp": 0, "coeff": "2"}]}},
    {"inputs": [1, 0], "output": 1, "coeff_series": {"var": "q", "order": 8, "terms": [{"exp": 0, "coeff": "1"}]}}
  ]
})";

} // namespace

TEST_CASE("cli series commands reproduce the reference tables")
{
    SUBCASE("cubic-f")
    {
        cli::CommandConfig c = command("cubic-f");
        c.verify = true;
        const Outcome r = run_cli(c);
        CHECK(r.code == cli::ok);
        CHECK(r.out.find("f = q - 5*q^4 + 32*q^7 - 198*q^10 + 1214*q^13 + O(q^14)") != std::string::npos);
        CHECK(r.err.empty());
    }
    SUBCASE("cubic-verify")
    {
        cli::CommandConfig c = command("cubic-verify", 20);
        c.verify = true;
        const Outcome r = run_cli(c);
        CHECK(r.code == cli::ok);
        CHECK(r.out.find("FAIL") == std::string::npos);
    }
    SUBCASE("quintic")
    {
        cli::CommandConfig c = command("quintic", 17);
        c.verify = true;
        const Outcome r = run_cli(c);
        CHECK(r.code == cli::ok);
        CHECK(r.out.find("FAIL") == std::string::npos);
    }
    SUBCASE("mirror-map")
    {
        cli::CommandConfig c = command("mirror-map", 5);
        c.verify = true;
        CHECK(run_cli(c).code == cli::ok);
    }
    SUBCASE("schwarzian-solve with zero right-hand side")
    {
        const Outcome r = run_cli(command("schwarzian-solve", 10));
        CHECK(r.code == cli::ok);
        CHECK(r.out.find("f = q + O(q^10)") != std::string::npos);
    }
    SUBCASE("schwarzian-solve with the cubic right-hand side")
    {
        cli::CommandConfig c = command("schwarzian-solve");
        c.g = "cubic";
        c.verify = true;
        const Outcome r = run_cli(c);
        CHECK(r.code == cli::ok);
        CHECK(r.out.find("f = q - 5*q^4 + 32*q^7") != std::string::npos);
    }
}

TEST_CASE("cli json output parses and matches the text output")
{
    cli::CommandConfig c = command("cubic-f");
    c.json = true;
    const Outcome r = run_cli(c);
    REQUIRE(r.code == cli::ok);
    const json doc = json::parse(r.out);
    CHECK(doc.at("command") == "cubic-f");
    const RSeries f = series_from_json(doc.at("series").at(0).at("series"));
    CHECK(f.order() == 14);
    CHECK_FALSE(golden_mismatch(f, golden_cubic_f()).has_value());
}

TEST_CASE("cli output is deterministic")
{
    for (const std::string sub : {"quintic", "cubic-verify"}) {
        cli::CommandConfig c = command(sub, 12);
        c.json = true;
        const Outcome a = run_cli(c);
        const Outcome b = run_cli(c);
        CHECK(a.code == cli::ok);
        CHECK(a.out == b.out);
    }
    cli::CommandConfig c = command("ainfty");
    c.action = "trivialize";
    c.input = data_file("exterior_family.json");
    c.q_order = 6;
    c.json = true;
    const Outcome a = run_cli(c);
    CHECK(a.code == cli::ok);
    CHECK(a.out == run_cli(c).out);
}

TEST_CASE("cli file-driven commands")
{
    SUBCASE("novikov on the synthetic lattice")
    {
        cli::CommandConfig c = command("novikov", 6);
        c.input = data_file("synthetic_rank3.json");
        c.cap = 3;
        const Outcome r = run_cli(c);
        CHECK(r.code == cli::ok);
        CHECK(r.out.find("PASS") != std::string::npos);
    }
    SUBCASE("ainfty actions on the exterior family")
    {
        for (const std::string action : {"check", "kaledin", "trivialize"}) {
            cli::CommandConfig c = command("ainfty");
            c.action = action;
            c.input = data_file("exterior_family.json");
            const Outcome r = run_cli(c);
            CHECK_MESSAGE(r.code == cli::ok, action << ": " << r.err);
        }
    }
    SUBCASE("an obstructed deformation cannot be trivialized")
    {
        cli::CommandConfig c = command("ainfty");
        c.action = "trivialize";
        c.input = data_file("dual_numbers_deformed.json");
        const Outcome r = run_cli(c);
        CHECK(r.code == cli::mismatch);
        CHECK(r.err.find("obstructed at q^0") != std::string::npos);
    }
    SUBCASE("a failed A-infinity check names the offending entry")
    {
        cli::CommandConfig c = command("ainfty");
        c.action = "check";
        c.input = write_temp("qseries_non_associative.json", non_associative);
        const Outcome r = run_cli(c);
        CHECK(r.code == cli::mismatch);
        CHECK(r.err.find("arity 3 entry") != std::string::npos);
    }
}

TEST_CASE("cli rejects malformed input with exit code 2")
{
    CHECK(run_cli(command("no-such-command")).code == cli::malformed);
    CHECK(run_cli(command("cubic-verify", 3)).code == cli::malformed);

    cli::CommandConfig c = command("novikov");
    CHECK(run_cli(c).code == cli::malformed);
    c.input = data_file("missing.json");
    CHECK(run_cli(c).code == cli::malformed);
    c.input = write_temp("qseries_not_json.json", "{ not json");
    CHECK(run_cli(c).code == cli::malformed);
    c.input = write_temp("qseries_wrong_shape.json", R"({"basis": 3})");
    CHECK(run_cli(c).code == cli::malformed);

    cli::CommandConfig a = command("ainfty");
    a.action = "check";
    a.input = write_temp("qseries_bad_degree.json", R"({
      "basis": [{"name": "1", "degree": 0}, {"name": "x", "degree": 1}],
      "entries": [{"inputs": [1, 1], "output": 1, "coeff_series": {"var": "q", "order": 8, "terms": [{"exp": 0, "coeff": "1"}]}}]
    })");
    CHECK(run_cli(a).code == cli::malformed);

    cli::CommandConfig s = command("schwarzian-solve");
    s.a1 = "0";
    CHECK(run_cli(s).code == cli::malformed);
    s.a1 = "one";
    CHECK(run_cli(s).code == cli::malformed);
}
