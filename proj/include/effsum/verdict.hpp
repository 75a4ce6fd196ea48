#pragma once

#include "effsum/audit.hpp"

#include <optional>
#include <string>
#include <vector>

namespace effsum {

enum class Rule { TrivialEqual, T1, T2, T3, T4, T5, T7, T8, T9, T10, None };
enum class Direction { Holds, Fails, Inapplicable };

std::string to_string(Rule r);
std::string to_string(Direction d);
Rule rule_from_string(const std::string& text);
Direction direction_from_string(const std::string& text);

struct ConditionCheck {
    std::string condition;
    bool passed = false;
    std::string evidence;

    friend bool operator==(const ConditionCheck&, const ConditionCheck&) = default;
};

struct BlockedRule {
    Rule rule = Rule::None;
    std::string reason;

    friend bool operator==(const BlockedRule&, const BlockedRule&) = default;
};

struct TheoremVerdict {
    Rule rule = Rule::None;
    Direction direction = Direction::Inapplicable;
    // Some gating property was only NoViolationFound.
    bool conditional = false;
    std::vector<ConditionCheck> conditions;
    std::vector<PropertyStatus> property_basis;
    // Rules tried before the one that fired, with their first failed condition.
    std::vector<BlockedRule> blocked;

    friend bool operator==(const TheoremVerdict&, const TheoremVerdict&) = default;
};

struct OracleVerdict {
    FiniteSet efficient_A;
    FiniteSet efficient_sum;
    bool equality_holds = false;

    friend bool operator==(const OracleVerdict&, const OracleVerdict&) = default;
};

struct Verdict {
    TheoremVerdict theorem;
    OracleVerdict oracle;
    std::vector<PropertyStatus> properties;
    bool consistent = true;

    friend bool operator==(const Verdict&, const Verdict&) = default;
};

// B is the effective summand; with B_list it must equal the sum of the list.
FiniteSet effective_summand(const FiniteSet& b, const std::optional<std::vector<FiniteSet>>& b_list,
                            const GroupContext& g);

OracleVerdict oracle_verdict(const FiniteSet& a, const FiniteSet& b, const GroupContext& g,
                             const RelationOracle& rel);

TheoremVerdict theorem_verdict(const FiniteSet& a, const FiniteSet& b, const GroupContext& g,
                               const RelationOracle& rel, const std::vector<PropertyStatus>& report,
                               const std::optional<std::vector<FiniteSet>>& b_list = std::nullopt);

Verdict combined_verdict(const FiniteSet& a, const FiniteSet& b, const GroupContext& g, const RelationOracle& rel,
                         const AuditConfig& config = {},
                         const std::optional<std::vector<FiniteSet>>& b_list = std::nullopt);

// Holds or Fails, gated only on Declared/ProvenExhaustive properties.
inline bool is_licensed(const TheoremVerdict& t)
{
    return t.direction != Direction::Inapplicable && !t.conditional;
}

} // namespace effsum
