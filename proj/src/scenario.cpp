#include "csr/scenario.hpp"

#include <fstream>
#include <sstream>

namespace csr {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
        return s.substr(1, s.size() - 2);
    return s;
}

}  // namespace

Scenario Scenario::from_text(const std::string& text) {
    Scenario sc;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("scenario line " + std::to_string(lineno) +
                              ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = unquote(trim(line.substr(eq + 1)));
        if (key.empty())
            throw ConfigError("scenario line " + std::to_string(lineno) + ": empty key");
        sc.values_[key] = value;
    }
    return sc;
}

Scenario Scenario::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read scenario file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_text(buf.str());
}

std::string Scenario::get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double Scenario::get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t used = 0;
        const double v = std::stod(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("scenario key '" + key + "': not a number: " + it->second);
    }
}

int Scenario::get_int(const std::string& key, int fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t used = 0;
        const int v = std::stoi(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("scenario key '" + key + "': not an integer: " + it->second);
    }
}

std::optional<double> Scenario::get_optional(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return get_double(key, 0.0);
}

ScalarField Scenario::get_field(const std::string& key, const std::string& fallback) const {
    const std::string text = get_string(key, fallback);
    try {
        return ScalarField::parse(text);
    } catch (const ParseError& e) {
        throw ConfigError("scenario key '" + key + "': " + e.what() + " at offset " +
                          std::to_string(e.offset) + " in \"" + text + "\"");
    }
}

GraphDomain Scenario::domain() const {
    try {
        return GraphDomain(get_double("x0", 0.0), get_double("x1", 1.0),
                           get_double("t0", 0.0), get_double("t1", 1.0), get_int("nx", 33),
                           get_int("nt", 33));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("scenario domain: ") + e.what());
    }
}

ContactMetric Scenario::metric() const {
    return ContactMetric(get_field("g11", "1"), get_field("g12", "0"),
                         get_field("g22", "1"));
}

FunctionalSign Scenario::sign() const {
    const std::string s = get_string("functional_sign", "minus");
    if (s == "minus") return FunctionalSign::AreaMinusVolume;
    if (s == "plus") return FunctionalSign::AreaPlusVolume;
    throw ConfigError("functional_sign must be 'minus' or 'plus', got " + s);
}

SolveConfig Scenario::solve_config() const {
    SolveConfig c;
    c.tol = get_double("tol", c.tol);
    c.max_iter = get_int("max_iter", c.max_iter);
    c.damping = get_double("damping", c.damping);
    c.vol_tol = get_double("vol_tol", c.vol_tol);
    return c;
}

}  // namespace csr
