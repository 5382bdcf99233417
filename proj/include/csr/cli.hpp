#ifndef CSR_CLI_HPP
#define CSR_CLI_HPP

#include <optional>
#include <string>

namespace csr {

struct CliOverrides {
    std::optional<int> seed;
    std::optional<int> nx;
    std::optional<int> nt;
};

// Dispatches a scenario to the library and writes artifacts plus a
// machine-readable summary.json into out_dir.
// Exit codes: 0 success, 1 parse/config error, 2 numerical failure.
int run(const std::string& command, const std::string& scenario_path,
        const std::string& out_dir, const CliOverrides& overrides = {});

}  // namespace csr

#endif
