#include <iostream>

#include <CLI11.hpp>

#include <qseries/cli.hpp>

int main(int argc, char **argv)
{
    using qseries::cli::CommandConfig;
    CLI::App app{"Exact q-series pipelines"};
    app.require_subcommand(1);
    CommandConfig config;

    const auto add_common = [&](CLI::App *sub, bool needs_input) {
        sub->add_option("--order", config.order, "Truncation order N (coefficients below q^N)")->check(CLI::PositiveNumber);
        sub->add_flag("--json", config.json, "Emit JSON");
        sub->add_flag("--verify", config.verify, "Compare against the embedded reference tables");
        if (needs_input)
            sub->add_option("--input", config.input, "Input JSON file")->required();
    };

    add_common(app.add_subcommand("cubic-f", "Hauptmodul series of the cubic pencil"), false);
    add_common(app.add_subcommand("cubic-verify", "Cross-check the cubic pencil by independent routes"), false);
    add_common(app.add_subcommand("quintic", "Quintic pencil data and its Schwarzian solution"), false);
    add_common(app.add_subcommand("mirror-map", "Mirror map y1, y2 of the quintic pencil"), false);

    CLI::App *solve = app.add_subcommand("schwarzian-solve", "Solve S_q f + g = 0");
    add_common(solve, false);
    solve->add_option("--g", config.g, "Right-hand side: zero or cubic")->check(CLI::IsMember({"zero", "cubic"}));
    solve->add_option("--a1", config.a1, "Coefficient of q in f");
    solve->add_option("--a2", config.a2, "Coefficient of q^2 in f");

    CLI::App *nov = app.add_subcommand("novikov", "Solve the lattice Schwarzian equation from GW data");
    add_common(nov, true);
    nov->add_option("--cap", config.cap, "Filtration cap")->check(CLI::NonNegativeNumber);

    CLI::App *ainf = app.add_subcommand("ainfty", "A-infinity deformation tools");
    add_common(ainf, true);
    ainf->add_option("action", config.action, "check, kaledin or trivialize")
        ->required()
        ->check(CLI::IsMember({"check", "kaledin", "trivialize"}));
    ainf->add_option("--arity", config.arity, "Arity cap D")->check(CLI::PositiveNumber);
    ainf->add_option("--qorder", config.q_order, "q-truncation order N")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : qseries::cli::malformed;
    }
    config.subcommand = app.get_subcommands().front()->get_name();
    return qseries::cli::run(config, std::cout, std::cerr);
}
