#ifndef QSERIES_CLI_HPP
#define QSERIES_CLI_HPP

#include <optional>
#include <ostream>
#include <string>

namespace qseries::cli
{

enum ExitCode { ok = 0, mismatch = 1, malformed = 2 };

struct CommandConfig {
    // cubic-f, cubic-verify, quintic, mirror-map, schwarzian-solve, novikov, ainfty
    std::string subcommand;
    // ainfty only: check, kaledin or trivialize.
    std::string action;
    int order = 14;
    std::optional<int> cap;
    std::optional<std::string> input;
    bool json = false;
    bool verify = false;
    // schwarzian-solve: right-hand side ("zero" or "cubic") and f'(0), f''(0)/2.
    std::string g = "zero";
    std::string a1 = "1";
    std::string a2 = "0";
    // ainfty: arity cap and q-order.
    int arity = 4;
    int q_order = 4;
};

// Runs one subcommand. Reports go to `out`, diagnostics to `err`. Returns 1
// when a verification or cross-check fails and 2 on malformed input.
int run(const CommandConfig &config, std::ostream &out, std::ostream &err);

} // namespace qseries::cli

#endif
