#pragma once

#include "effsum/group.hpp"
#include "effsum/relation.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace effsum {

// Total map {1..n} -> {1..n}; images are 1-based.
struct IndexMap {
    std::size_t n = 0;
    std::vector<std::size_t> images;
};

struct CycleWitness {
    std::vector<std::size_t> indices;
    std::size_t length = 0;
    // Per-b counts accumulated along the cycle (empty for a bare index map).
    std::vector<std::uint64_t> multiplicities;

    friend bool operator==(const CycleWitness&, const CycleWitness&) = default;
};

// Walks start, f(start), ... and returns the first repeated segment.
CycleWitness find_index_cycle(const IndexMap& map, std::size_t start);

enum class SystemKind { S0, S1, S2, S3, S4, S5, Mixed };
std::string to_string(SystemKind k);
SystemKind system_kind_from_string(const std::string& text);

enum class Rel { Equal, Strict, Weak };

// Row semantics (all indices 1-based):
//   equation   a^left = a^right + b^b
//   comparison (S1/S2) a^left P a^right
//   S4/S5/MIXED a^left X (a^right + b^b), X = P, or = for Equal rows in MIXED
struct SystemRow {
    Rel relation = Rel::Equal;
    std::size_t left = 1;
    std::size_t right = 1;
    std::size_t b = 1;

    friend bool operator==(const SystemRow&, const SystemRow&) = default;
};

struct SystemInstance {
    SystemKind kind = SystemKind::S0;
    std::vector<GroupElement> points;
    std::vector<GroupElement> bs;
    // Number of equations for S1/S2.
    std::size_t k = 0;
    std::vector<SystemRow> rows;
    // MIXED systems built from data record the pairs (j, l) whose shift leaves A.
    std::vector<std::pair<std::size_t, std::size_t>> outside_pairs;

    friend bool operator==(const SystemInstance&, const SystemInstance&) = default;
};

// Throws MalformedSystem on any shape violation.
void validate_system(const SystemInstance& sys);

// a^base + b^word[0] + b^word[1] + ...; base 0 is 0_G.
struct Term {
    std::size_t base = 0;
    std::vector<std::size_t> word;

    friend bool operator==(const Term&, const Term&) = default;
};

// lhs rel rhs. When `some_of` is nonempty the b-side term stands for
// "some b^l with l in some_of".
struct Fact {
    Term lhs;
    Rel rel = Rel::Equal;
    Term rhs;
    std::vector<std::size_t> some_of;

    friend bool operator==(const Fact&, const Fact&) = default;
};

enum class StepRule { Group, P1, P3, P4, P5 };
std::string to_string(StepRule r);

struct Step {
    StepRule rule = StepRule::Group;
    Fact fact;
    // Indices into hypotheses (negative, -1 - h) or earlier steps (>= 0).
    std::vector<long> premises;

    friend bool operator==(const Step&, const Step&) = default;
};

struct Hypothesis {
    Fact fact;
    // Whether the concrete points satisfy it; nullopt when no relation was supplied.
    std::optional<bool> concrete;

    friend bool operator==(const Hypothesis&, const Hypothesis&) = default;
};

struct DerivationTrace {
    SystemKind kind = SystemKind::S0;
    std::vector<GroupElement> points;
    std::vector<GroupElement> bs;
    std::vector<Hypothesis> hypotheses;
    std::vector<std::string> notes;
    std::vector<Step> steps;
    // The last fact, contradicting b I 0_G for every b it names.
    Fact conclusion;

    friend bool operator==(const DerivationTrace&, const DerivationTrace&) = default;
};

std::string render(const Term& t, std::size_t b_count);
std::string render(const Fact& f, std::size_t b_count);

// "# " preamble, then "RULE | statement" lines, then "CONTRADICTION | fact".
std::string serialize(const DerivationTrace& trace);

struct Representation {
    std::size_t index = 0;
    std::size_t target = 0;
    std::vector<std::size_t> word;
    std::vector<std::uint64_t> multiplicities;
    // a^index = a^target + word evaluates true on the concrete points.
    bool holds_concretely = false;

    friend bool operator==(const Representation&, const Representation&) = default;
};

using Elimination = std::variant<std::vector<Representation>, CycleWitness>;

Elimination eliminate_representations(const SystemInstance& sys, const GroupContext& g);

DerivationTrace derive_equation_cycle(const SystemInstance& sys, const GroupContext& g,
                                      const RelationOracle* rel = nullptr);
DerivationTrace derive_dominator_cycle(const SystemInstance& sys, const GroupContext& g,
                                       const RelationOracle* rel = nullptr);
DerivationTrace derive_dominated_cycle(const SystemInstance& sys, const GroupContext& g,
                                       const RelationOracle* rel = nullptr, std::size_t l = 1);
// Dispatches on the system kind.
DerivationTrace derive(const SystemInstance& sys, const GroupContext& g, const RelationOracle* rel = nullptr);

SystemInstance project_s5(const SystemInstance& sys, std::size_t l);

struct ReplayResult {
    bool ok = false;
    std::string error;
};

// Re-checks every step against its rule schema. When `rel` is given, steps
// whose premises hold on the concrete points must hold there too.
ReplayResult replay(const DerivationTrace& trace, const GroupContext& g, const RelationOracle* rel = nullptr);

// Integer bounds on b forced by the strict rows of an IntVec system under the
// product order: a^i P (a^j + b) gives b <= a^i - a^j componentwise.
struct ComponentBounds {
    std::vector<std::vector<Coord>> per_row;
    std::vector<Coord> joint;
    std::vector<std::string> statements;
};
ComponentBounds component_bounds(const SystemInstance& sys);

struct BridgeResult {
    SystemInstance system;
    DerivationTrace trace;
    bool replayed = false;
    // Some hypothesis is false on the concrete data, as the theorem demands.
    bool refuted = false;
};

// The inconsistent system behind a T7/T8 (rule_t9 = false) or T9/T10 verdict,
// built from the instance's own points.
BridgeResult build_bridge(const FiniteSet& a, const FiniteSet& b, const GroupContext& g, const RelationOracle& rel,
                          bool rule_t9);

} // namespace effsum
