#pragma once

#include "effsum/generator.hpp"

#include <string>
#include <vector>

namespace effsum {

struct BenchRow {
    Family family = Family::Random;
    std::size_t instances = 0;
    // Instances the theorem rules settled without the oracle.
    std::size_t decided = 0;
    double naive_ms = 0;
    double shortcut_ms = 0;
    // Shortcut answer equals the naive oracle on every instance.
    bool agree = true;
};

struct BenchConfig {
    std::uint64_t seed = 1;
    std::size_t count = 50;
    GenSizes sizes;
    AuditConfig audit;
};

// Naive path: compute E(A+B) and E(A). Shortcut path: audits plus the rule
// table, falling back to the oracle only when no licensed rule fires.
std::vector<BenchRow> run_bench(const BenchConfig& config);

std::string bench_to_text(const std::vector<BenchRow>& rows);
Json bench_to_json(const std::vector<BenchRow>& rows);

} // namespace effsum
