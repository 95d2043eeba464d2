#pragma once

#include "cuspflow/bigint.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace cuspflow {

enum class OutputFormat { Csv, Json };

/// Batch-experiment configuration shared by the CLI subcommands.
/// Precedence: command-line flags > config file > defaults.
struct ExperimentConfig {
    std::string model = "modular";  // modular | gaussian
    BigRat region_lo = BigRat(-2);
    BigRat region_hi = BigRat(2);
    BigRat theta = BigRat(1);
    BigRat delta = BigRat(1, 4);
    BigInt h_max = BigInt(1000000);
    int depth = 6;
    BigInt truncation = BigInt(10000);
    int workers = 0;  // 0 = auto
    uint64_t seed = 1;
    OutputFormat format = OutputFormat::Csv;

    void validate() const;  // throws std::invalid_argument on bad budgets
};

/// Flat key=value text; '#' starts a comment.  Unknown keys are rejected.
ExperimentConfig load_config_file(const std::string& path, const ExperimentConfig& base);
ExperimentConfig apply_overrides(const ExperimentConfig& base,
                                 const std::map<std::string, std::string>& kv);

}  // namespace cuspflow
