#include "cuspflow/config.hpp"

#include <fstream>
#include <stdexcept>

namespace cuspflow {

void ExperimentConfig::validate() const {
    if (model != "modular" && model != "gaussian")
        throw std::invalid_argument("config: model must be modular or gaussian");
    if (h_max < 1) throw std::invalid_argument("config: h_max must be positive");
    if (depth < 1) throw std::invalid_argument("config: depth must be positive");
    if (truncation < 1) throw std::invalid_argument("config: truncation must be positive");
    if (theta <= 0) throw std::invalid_argument("config: theta must be positive");
    if (delta <= 0) throw std::invalid_argument("config: delta must be positive");
    if (region_hi <= region_lo) throw std::invalid_argument("config: empty region");
}

static void apply_one(ExperimentConfig& c, const std::string& key, const std::string& value) {
    auto rat = [&](const char* what) {
        auto r = parse_rational(value);
        if (!r) throw std::invalid_argument(std::string("config: bad ") + what + ": " + value);
        return *r;
    };
    if (key == "model") c.model = value;
    else if (key == "region_lo") c.region_lo = rat("region_lo");
    else if (key == "region_hi") c.region_hi = rat("region_hi");
    else if (key == "theta") c.theta = rat("theta");
    else if (key == "delta") c.delta = rat("delta");
    else if (key == "h_max") c.h_max = BigInt(value);
    else if (key == "depth") c.depth = std::stoi(value);
    else if (key == "truncation") c.truncation = BigInt(value);
    else if (key == "workers") c.workers = std::stoi(value);
    else if (key == "seed") c.seed = std::stoull(value);
    else if (key == "format") {
        if (value == "csv") c.format = OutputFormat::Csv;
        else if (value == "json") c.format = OutputFormat::Json;
        else throw std::invalid_argument("config: format must be csv or json");
    } else {
        throw std::invalid_argument("config: unknown key " + key);
    }
}

ExperimentConfig apply_overrides(const ExperimentConfig& base,
                                 const std::map<std::string, std::string>& kv) {
    ExperimentConfig c = base;
    for (const auto& [k, v] : kv) apply_one(c, k, v);
    return c;
}

ExperimentConfig load_config_file(const std::string& path, const ExperimentConfig& base) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    ExperimentConfig c = base;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto first = line.find_first_not_of(" \t\r\n");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r\n");
        line = line.substr(first, last - first + 1);
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not key=value");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            auto a = s.find_first_not_of(" \t");
            auto b = s.find_last_not_of(" \t");
            s = (a == std::string::npos) ? "" : s.substr(a, b - a + 1);
        };
        trim(key);
        trim(value);
        apply_one(c, key, value);
    }
    return c;
}

}  // namespace cuspflow
