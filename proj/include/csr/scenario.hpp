#ifndef CSR_SCENARIO_HPP
#define CSR_SCENARIO_HPP

#include <map>
#include <optional>
#include <string>

#include "csr/graph.hpp"
#include "csr/solver.hpp"

// Scenario files are flat `key = value` text, one scenario per file.
// Expressions are quoted ("..."); `#` starts a comment. See the README for
// the key reference.

namespace csr {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class Scenario {
public:
    static Scenario load(const std::string& path);
    static Scenario from_text(const std::string& text);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::optional<double> get_optional(const std::string& key) const;
    ScalarField get_field(const std::string& key, const std::string& fallback) const;

    // Assembled pieces used by most commands.
    GraphDomain domain() const;
    ContactMetric metric() const;
    ScalarField f() const { return get_field("f", "0"); }
    ScalarField u0() const { return get_field("u0", "0"); }
    FunctionalSign sign() const;
    SolveConfig solve_config() const;
    unsigned seed() const { return static_cast<unsigned>(get_int("seed", 0)); }

    // CLI overrides.
    void set(const std::string& key, const std::string& value) { values_[key] = value; }

private:
    std::map<std::string, std::string> values_;
};

}  // namespace csr

#endif
