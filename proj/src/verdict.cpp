#include "effsum/verdict.hpp"

#include <algorithm>
#include <functional>

namespace effsum {

std::string to_string(Rule r)
{
    switch (r) {
    case Rule::TrivialEqual: return "TRIVIAL_EQUAL";
    case Rule::T1: return "T1";
    case Rule::T2: return "T2";
    case Rule::T3: return "T3";
    case Rule::T4: return "T4";
    case Rule::T5: return "T5";
    case Rule::T7: return "T7";
    case Rule::T8: return "T8";
    case Rule::T9: return "T9";
    case Rule::T10: return "T10";
    case Rule::None: return "NONE";
    }
    return "?";
}

std::string to_string(Direction d)
{
    switch (d) {
    case Direction::Holds: return "Holds";
    case Direction::Fails: return "Fails";
    case Direction::Inapplicable: return "Inapplicable";
    }
    return "?";
}

Rule rule_from_string(const std::string& text)
{
    for (Rule r : {Rule::TrivialEqual, Rule::T1, Rule::T2, Rule::T3, Rule::T4, Rule::T5, Rule::T7, Rule::T8, Rule::T9,
                   Rule::T10, Rule::None}) {
        if (to_string(r) == text) {
            return r;
        }
    }
    throw ParseError("unknown rule '" + text + "'");
}

Direction direction_from_string(const std::string& text)
{
    for (Direction d : {Direction::Holds, Direction::Fails, Direction::Inapplicable}) {
        if (to_string(d) == text) {
            return d;
        }
    }
    throw ParseError("unknown direction '" + text + "'");
}

FiniteSet effective_summand(const FiniteSet& b, const std::optional<std::vector<FiniteSet>>& b_list,
                            const GroupContext& g)
{
    if (!b_list) {
        if (b.empty()) {
            throw EmptyOperand("B is empty");
        }
        return b;
    }
    if (b_list->empty()) {
        throw EmptyOperand("B_list is empty");
    }
    FiniteSet sum = sum_of_sets(*b_list, g);
    if (!b.empty() && b != sum) {
        throw ValidationError("B must equal the sum of the B_list summands");
    }
    return sum;
}

OracleVerdict oracle_verdict(const FiniteSet& a, const FiniteSet& b, const GroupContext& g,
                             const RelationOracle& rel)
{
    OracleVerdict out;
    out.efficient_A = efficient_set(a, rel).efficient;
    out.efficient_sum = efficient_set(minkowski_sum(a, b, g), rel).efficient;
    out.equality_holds = out.efficient_A == out.efficient_sum;
    return out;
}

namespace {

std::string list(const FiniteSet& s)
{
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        out += (i ? "," : "") + s[i].to_string();
    }
    return out + "}";
}

class RuleEngine {
public:
    RuleEngine(const FiniteSet& a, const FiniteSet& b, const GroupContext& g, const RelationOracle& rel,
               const std::vector<PropertyStatus>& report, const std::optional<std::vector<FiniteSet>>& b_list)
        : a_(a), b_(b), g_(g), rel_(rel), report_(report), b_list_(b_list), zero_(g.identity()),
          sum_(minkowski_sum(a, b, g))
    {
    }

    TheoremVerdict run()
    {
        TheoremVerdict out;
        struct Candidate {
            Rule rule;
            Direction direction;
            std::function<void()> conditions;
        };
        const std::vector<Candidate> rules = {
            {Rule::TrivialEqual, Direction::Holds, [&] { sum_is_a(true); }},
            {Rule::T2, Direction::Holds,
             [&] {
                 zero_in_b_dominated();
                 props({PropertyId::P1, PropertyId::P2, PropertyId::P3});
             }},
            {Rule::T1, Direction::Holds,
             [&] {
                 check("E(A) is empty", efficient_a().empty(), "E(A) = " + list(efficient_a()));
                 props({PropertyId::P3});
             }},
            {Rule::T4, Direction::Fails,
             [&] {
                 check("E(A) is nonempty", !efficient_a().empty(), "|E(A)| = " + std::to_string(efficient_a().size()));
                 some_b_dominates_zero();
                 sum_is_a(false);
                 props({PropertyId::P3});
             }},
            {Rule::T3, Direction::Fails,
             [&] {
                 all_b([&](const GroupElement& x) { return rel_.strictly(zero_, x); }, "0_G P b for every b in B");
                 sum_nonempty_efficient();
                 sum_is_a(false);
                 props({PropertyId::P3});
             }},
            {Rule::T5, Direction::Fails,
             [&] {
                 check("B = {b}", b_.size() == 1, "|B| = " + std::to_string(b_.size()));
                 check("b != 0_G", !b_.contains(zero_), "B = " + list(b_));
                 a_stable();
                 props({PropertyId::P2, PropertyId::P3, PropertyId::P4, PropertyId::P5});
             }},
            {Rule::T7, Direction::Fails,
             [&] {
                 check("B = {b}", b_.size() == 1, "|B| = " + std::to_string(b_.size()));
                 all_b([&](const GroupElement& x) { return rel_.incomparable(x, zero_); }, "b I 0_G for every b in B");
                 sum_is_a(false);
                 props({PropertyId::P1, PropertyId::P3, PropertyId::P4});
             }},
            {Rule::T8, Direction::Fails,
             [&] {
                 check("|B| >= 2", b_.size() >= 2, "|B| = " + std::to_string(b_.size()));
                 all_b([&](const GroupElement& x) { return rel_.incomparable(x, zero_); }, "b I 0_G for every b in B");
                 sum_is_a(false);
                 props({PropertyId::P1, PropertyId::P3, PropertyId::P4});
             }},
            {Rule::T9, Direction::Fails,
             [&] {
                 check("0_G in B", b_.contains(zero_), "B = " + list(b_));
                 check("B = {0_G, b}", b_.size() == 2, "|B| = " + std::to_string(b_.size()));
                 others_incomparable();
                 a_stable();
                 sum_is_a(false);
                 props({PropertyId::P1, PropertyId::P3, PropertyId::P5});
             }},
            {Rule::T10, Direction::Fails,
             [&] {
                 check("0_G in B", b_.contains(zero_), "B = " + list(b_));
                 check("B = {0_G, b1, ..., bm} with m >= 2", b_.size() >= 3, "|B| = " + std::to_string(b_.size()));
                 others_incomparable();
                 a_stable();
                 sum_is_a(false);
                 props({PropertyId::P1, PropertyId::P3, PropertyId::P5});
             }},
        };

        for (const auto& candidate : rules) {
            checks_.clear();
            basis_.clear();
            conditional_ = false;
            failed_ = false;
            try {
                candidate.conditions();
            } catch (const Stop&) {
            }
            if (!failed_) {
                out.rule = candidate.rule;
                out.direction = candidate.direction;
                out.conditional = conditional_;
                out.conditions = checks_;
                out.property_basis = basis_;
                return out;
            }
            out.blocked.push_back({candidate.rule, checks_.back().condition + ": " + checks_.back().evidence});
        }
        out.rule = Rule::None;
        out.direction = Direction::Inapplicable;
        return out;
    }

private:
    struct Stop {};

    void check(std::string condition, bool passed, std::string evidence)
    {
        checks_.push_back({std::move(condition), passed, std::move(evidence)});
        if (!passed) {
            failed_ = true;
            throw Stop{};
        }
    }

    template <class F>
    bool guarded(F&& f, std::string& note)
    {
        try {
            return f();
        } catch (const CarrierMismatch& e) {
            note = e.what();
            return false;
        }
    }

    void props(std::initializer_list<PropertyId> ids)
    {
        for (PropertyId id : ids) {
            const PropertyStatus& s = find_status(report_, id);
            basis_.push_back(s);
            if (s.outcome == Outcome::NoViolationFound) {
                conditional_ = true;
            }
            check(to_string(id), s.outcome != Outcome::Violated, to_string(s.outcome));
        }
    }

    const FiniteSet& efficient_a()
    {
        if (!efficient_a_) {
            efficient_a_ = efficient_set(a_, rel_).efficient;
        }
        return *efficient_a_;
    }

    void sum_is_a(bool want_equal)
    {
        const bool equal = sum_ == a_;
        const std::string evidence = "|A+B| = " + std::to_string(sum_.size()) + ", |A| = " + std::to_string(a_.size());
        check(want_equal ? "A+B = A" : "A+B != A", equal == want_equal, evidence);
    }

    void a_stable()
    {
        const auto part = efficient_set(a_, rel_);
        check("A stable", part.dominated.empty(), "dominated in A: " + list(part.dominated));
    }

    void all_b(const std::function<bool(const GroupElement&)>& pred, const std::string& label)
    {
        for (const auto& x : b_) {
            std::string note;
            if (!guarded([&] { return pred(x); }, note)) {
                check(label, false, "fails for " + x.to_string() + (note.empty() ? "" : " (" + note + ")"));
            }
        }
        check(label, true, "checked " + std::to_string(b_.size()));
    }

    void others_incomparable()
    {
        for (const auto& x : b_) {
            if (x == zero_) {
                continue;
            }
            std::string note;
            if (!guarded([&] { return rel_.incomparable(x, zero_); }, note)) {
                check("b I 0_G for every b != 0_G in B", false, "fails for " + x.to_string());
            }
        }
        check("b I 0_G for every b != 0_G in B", true, "checked " + std::to_string(b_.size() - 1));
    }

    void some_b_dominates_zero()
    {
        for (const auto& x : b_) {
            std::string note;
            if (guarded([&] { return rel_.strictly(x, zero_); }, note)) {
                check("some b P 0_G", true, "b = " + x.to_string());
                return;
            }
        }
        check("some b P 0_G", false, "no b in B strictly dominates 0_G");
    }

    void sum_nonempty_efficient()
    {
        const auto& p1 = find_status(report_, PropertyId::P1);
        if (is_firm(p1.outcome)) {
            check("E(A+B) is nonempty", true, "A+B finite and P1 " + to_string(p1.outcome));
            return;
        }
        const auto e = efficient_set(sum_, rel_).efficient;
        check("E(A+B) is nonempty", !e.empty(), "|E(A+B)| = " + std::to_string(e.size()));
    }

    void zero_in_b_dominated()
    {
        if (!b_list_) {
            check("0_G in B", b_.contains(zero_), "B = " + list(b_));
            all_b([&](const GroupElement& x) { return rel_.related(zero_, x); }, "0_G R b for every b in B");
            return;
        }
        for (std::size_t i = 0; i < b_list_->size(); ++i) {
            const FiniteSet& bi = (*b_list_)[i];
            const std::string tag = "B_" + std::to_string(i + 1);
            check("0_G in " + tag, bi.contains(zero_), tag + " = " + list(bi));
            for (const auto& x : bi) {
                std::string note;
                if (!guarded([&] { return rel_.related(zero_, x); }, note)) {
                    check("0_G R b for every b in " + tag, false, "fails for " + x.to_string());
                }
            }
            check("0_G R b for every b in " + tag, true, "checked " + std::to_string(bi.size()));
        }
    }

    const FiniteSet& a_;
    const FiniteSet& b_;
    const GroupContext& g_;
    const RelationOracle& rel_;
    const std::vector<PropertyStatus>& report_;
    const std::optional<std::vector<FiniteSet>>& b_list_;
    GroupElement zero_;
    FiniteSet sum_;
    std::optional<FiniteSet> efficient_a_;

    std::vector<ConditionCheck> checks_;
    std::vector<PropertyStatus> basis_;
    bool conditional_ = false;
    bool failed_ = false;
};

} // namespace

TheoremVerdict theorem_verdict(const FiniteSet& a, const FiniteSet& b, const GroupContext& g,
                               const RelationOracle& rel, const std::vector<PropertyStatus>& report,
                               const std::optional<std::vector<FiniteSet>>& b_list)
{
    if (a.empty() || b.empty()) {
        throw EmptyOperand("theorem_verdict needs nonempty A and B");
    }
    return RuleEngine(a, b, g, rel, report, b_list).run();
}

Verdict combined_verdict(const FiniteSet& a, const FiniteSet& b, const GroupContext& g, const RelationOracle& rel,
                         const AuditConfig& config, const std::optional<std::vector<FiniteSet>>& b_list)
{
    const FiniteSet summand = effective_summand(b, b_list, g);
    Verdict v;
    v.properties = audit_all(a, summand, g, rel, config);
    v.theorem = theorem_verdict(a, summand, g, rel, v.properties, b_list);
    v.oracle = oracle_verdict(a, summand, g, rel);
    v.consistent = v.theorem.direction == Direction::Inapplicable ||
                   (v.theorem.direction == Direction::Holds) == v.oracle.equality_holds;
    return v;
}

} // namespace effsum
