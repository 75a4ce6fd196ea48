#include "effsum/bench.hpp"

#include "effsum/parallel.hpp"

#include <chrono>
#include <iomanip>
#include <sstream>

namespace effsum {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

} // namespace

std::vector<BenchRow> run_bench(const BenchConfig& config)
{
    std::vector<BenchRow> rows;
    for (Family family : all_families) {
        struct Sample {
            double naive = 0;
            double shortcut = 0;
            bool decided = false;
            bool agree = true;
        };
        std::vector<Sample> samples(config.count);
        parallel_for(config.count, [&](std::size_t i) {
            const Instance inst = generate_instance(config.seed + i, family, config.sizes);
            Sample& s = samples[i];

            auto t0 = Clock::now();
            const bool naive = oracle_verdict(inst.a, inst.b, inst.group, inst.relation).equality_holds;
            s.naive = ms_since(t0);

            t0 = Clock::now();
            const auto report = audit_all(inst.a, inst.b, inst.group, inst.relation, config.audit);
            const auto theorem = theorem_verdict(inst.a, inst.b, inst.group, inst.relation, report);
            bool answer = false;
            if (is_licensed(theorem)) {
                s.decided = true;
                answer = theorem.direction == Direction::Holds;
            } else {
                answer = oracle_verdict(inst.a, inst.b, inst.group, inst.relation).equality_holds;
            }
            s.shortcut = ms_since(t0);
            s.agree = answer == naive;
        });
        BenchRow row;
        row.family = family;
        row.instances = config.count;
        for (const auto& s : samples) {
            row.naive_ms += s.naive;
            row.shortcut_ms += s.shortcut;
            row.decided += s.decided ? 1 : 0;
            row.agree = row.agree && s.agree;
        }
        rows.push_back(row);
    }
    return rows;
}

std::string bench_to_text(const std::vector<BenchRow>& rows)
{
    std::ostringstream out;
    out << std::left << std::setw(24) << "family" << std::right << std::setw(6) << "n" << std::setw(9) << "decided"
        << std::setw(12) << "naive_ms" << std::setw(14) << "shortcut_ms" << std::setw(7) << "agree" << "\n";
    out << std::fixed << std::setprecision(3);
    for (const auto& r : rows) {
        out << std::left << std::setw(24) << to_string(r.family) << std::right << std::setw(6) << r.instances
            << std::setw(9) << r.decided << std::setw(12) << r.naive_ms << std::setw(14) << r.shortcut_ms
            << std::setw(7) << (r.agree ? "yes" : "NO") << "\n";
    }
    return out.str();
}

Json bench_to_json(const std::vector<BenchRow>& rows)
{
    Json out = Json::array();
    for (const auto& r : rows) {
        out.push_back({{"family", to_string(r.family)},
                       {"instances", r.instances},
                       {"decided", r.decided},
                       {"naive_ms", r.naive_ms},
                       {"shortcut_ms", r.shortcut_ms},
                       {"agree", r.agree}});
    }
    return out;
}

} // namespace effsum
