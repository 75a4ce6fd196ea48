#include "effsum/audit.hpp"

#include "effsum/detail/cone.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <unordered_map>
#include <unordered_set>

namespace effsum {

std::string to_string(Outcome o)
{
    switch (o) {
    case Outcome::Violated: return "Violated";
    case Outcome::NoViolationFound: return "NoViolationFound";
    case Outcome::ProvenExhaustive: return "ProvenExhaustive";
    case Outcome::Declared: return "Declared";
    }
    return "?";
}

Outcome outcome_from_string(const std::string& text)
{
    for (Outcome o : {Outcome::Violated, Outcome::NoViolationFound, Outcome::ProvenExhaustive, Outcome::Declared}) {
        if (to_string(o) == text) {
            return o;
        }
    }
    throw ParseError("unknown audit outcome '" + text + "'");
}

std::uint64_t default_max_multiplicity(const FiniteSet& a, const FiniteSet& b)
{
    return std::max<std::uint64_t>(8, a.size() + b.size());
}

ProbeSet probe_closure(const FiniteSet& a, const FiniteSet& b, const GroupContext& g, int depth, std::size_t cap)
{
    if (depth < 1) {
        throw PreconditionError("probe depth must be at least 1");
    }
    if (cap < a.size() + b.size() + 1) {
        throw PreconditionError("probe cap must be at least |A| + |B| + 1");
    }
    ProbeSet probe;
    probe.depth = depth;
    std::unordered_set<GroupElement, GroupElementHash> seen;
    auto push = [&](const GroupElement& x) {
        if (probe.scan_order.size() >= cap) {
            probe.truncated = true;
            return false;
        }
        if (seen.insert(x).second) {
            probe.scan_order.push_back(x);
        }
        return true;
    };

    const FiniteSet seeds = a.united(b);
    for (const auto& x : seeds) {
        push(x);
    }
    push(g.identity());
    std::vector<GroupElement> inverses;
    for (const auto& x : seeds) {
        inverses.push_back(g.inverse(x));
    }
    for (const auto& x : FiniteSet(std::move(inverses))) {
        push(x);
    }

    for (int d = 1; d <= depth && !probe.truncated; ++d) {
        const std::size_t n = probe.scan_order.size();
        for (std::size_t i = 0; i < n && !probe.truncated; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (!push(g.combine(probe.scan_order[i], probe.scan_order[j]))) {
                    break;
                }
            }
        }
    }
    probe.elements = FiniteSet(probe.scan_order);
    return probe;
}

const PropertyStatus& find_status(const std::vector<PropertyStatus>& report, PropertyId id)
{
    auto it = std::find_if(report.begin(), report.end(), [&](const PropertyStatus& s) { return s.property == id; });
    if (it == report.end()) {
        throw PreconditionError("property report lacks " + to_string(id));
    }
    return *it;
}

namespace {

struct Domain {
    std::vector<GroupElement> elements;
    bool exhaustive = false;
    std::string label;
};

std::vector<GroupElement> with_rest(std::vector<GroupElement> head, const std::vector<GroupElement>& rest)
{
    std::unordered_set<GroupElement, GroupElementHash> seen(head.begin(), head.end());
    for (const auto& x : rest) {
        if (seen.insert(x).second) {
            head.push_back(x);
        }
    }
    return head;
}

bool finite_and_small(const GroupContext& g, const AuditConfig& config)
{
    auto order = g.order();
    return order && *order <= config.exhaustive_limit;
}

Domain domain_for(PropertyId prop, const RelationOracle& rel, const GroupContext& g, const ProbeSet& probe,
                  const AuditConfig& config)
{
    if (rel.kind() == RelationKind::ExplicitMatrix) {
        const FiniteSet& carrier = rel.carrier();
        std::vector<GroupElement> head;
        for (const auto& x : probe.scan_order) {
            if (carrier.contains(x)) {
                head.push_back(x);
            }
        }
        const bool full_group = finite_and_small(g, config) && carrier == FiniteSet(g.enumerate());
        if (prop != PropertyId::P3 || full_group) {
            return {with_rest(std::move(head), carrier.elements()), true,
                    "carrier of " + std::to_string(carrier.size())};
        }
        return {std::move(head), false, "probe within carrier"};
    }
    if (finite_and_small(g, config)) {
        return {with_rest(probe.scan_order, g.enumerate()), true, "all of " + g.describe()};
    }
    return {probe.scan_order, false, "probe"};
}

// Visits index tuples of the given arity over [0, n) in an order where every
// tuple inside a prefix [0, k) comes before any tuple touching index k.
// Stops early when `visit` returns true. Returns false when the budget ran out.
bool scan_prefix_tuples(std::size_t n, int arity, std::size_t budget,
                        const std::function<bool(const std::size_t*)>& visit, bool& stopped)
{
    std::size_t examined = 0;
    stopped = false;
    auto tick = [&]() { return budget == 0 || ++examined <= budget; };
    std::size_t t[3] = {0, 0, 0};
    for (std::size_t m = 0; m < n; ++m) {
        if (arity == 1) {
            if (!tick()) {
                return false;
            }
            t[0] = m;
            if (visit(t)) {
                stopped = true;
                return true;
            }
            continue;
        }
        for (std::size_t i = 0; i <= m; ++i) {
            if (arity == 2) {
                const std::size_t jlo = (i == m) ? 0 : m;
                for (std::size_t j = jlo; j <= m; ++j) {
                    if (!tick()) {
                        return false;
                    }
                    t[0] = i;
                    t[1] = j;
                    if (visit(t)) {
                        stopped = true;
                        return true;
                    }
                }
                continue;
            }
            for (std::size_t j = 0; j <= m; ++j) {
                const std::size_t klo = (i == m || j == m) ? 0 : m;
                for (std::size_t k = klo; k <= m; ++k) {
                    if (!tick()) {
                        return false;
                    }
                    t[0] = i;
                    t[1] = j;
                    t[2] = k;
                    if (visit(t)) {
                        stopped = true;
                        return true;
                    }
                }
            }
        }
    }
    return true;
}

class RelationCache {
public:
    RelationCache(const RelationOracle& rel, const std::vector<GroupElement>& d) : rel_(rel), d_(d)
    {
        if (d.size() <= dense_limit) {
            dense_.assign(d.size() * d.size(), -1);
        }
    }

    bool at(std::size_t i, std::size_t j)
    {
        if (!dense_.empty()) {
            auto& cell = dense_[i * d_.size() + j];
            if (cell < 0) {
                cell = rel_.related(d_[i], d_[j]) ? 1 : 0;
            }
            return cell == 1;
        }
        const auto [it, fresh] = sparse_.try_emplace(static_cast<std::uint64_t>(i) * d_.size() + j, false);
        if (fresh) {
            it->second = rel_.related(d_[i], d_[j]);
        }
        return it->second;
    }

private:
    static constexpr std::size_t dense_limit = 1024;

    const RelationOracle& rel_;
    const std::vector<GroupElement>& d_;
    std::vector<std::int8_t> dense_;
    std::unordered_map<std::uint64_t, bool> sparse_;
};

PropertyStatus structural_audit(PropertyId prop, const RelationOracle& rel, const GroupContext& g,
                                const ProbeSet& probe, const AuditConfig& config)
{
    Domain dom = domain_for(prop, rel, g, probe, config);
    const auto& d = dom.elements;
    RelationCache r(rel, d);
    std::optional<Witness> witness;
    bool skipped = false;

    std::function<bool(const std::size_t*)> visit;
    int arity = 1;
    switch (prop) {
    case PropertyId::Refl:
        visit = [&](const std::size_t* t) {
            if (!r.at(t[0], t[0])) {
                witness = Witness{{d[t[0]]}, {}, {}};
                return true;
            }
            return false;
        };
        break;
    case PropertyId::P1:
        arity = 3;
        visit = [&](const std::size_t* t) {
            if (r.at(t[0], t[1]) && r.at(t[1], t[2]) && !r.at(t[0], t[2])) {
                witness = Witness{{d[t[0]], d[t[1]], d[t[2]]}, {}, {}};
                return true;
            }
            return false;
        };
        break;
    case PropertyId::P2:
        arity = 2;
        visit = [&](const std::size_t* t) {
            if (t[0] != t[1] && r.at(t[0], t[1]) && r.at(t[1], t[0])) {
                witness = Witness{{d[t[0]], d[t[1]]}, {}, {}};
                return true;
            }
            return false;
        };
        break;
    case PropertyId::P3:
        arity = 3;
        visit = [&](const std::size_t* t) {
            if (!r.at(t[0], t[1])) {
                return false;
            }
            const auto& x = d[t[0]];
            const auto& y = d[t[1]];
            const auto& z = d[t[2]];
            try {
                if (!rel.related(g.combine(z, x), g.combine(z, y))) {
                    witness = Witness{{x, y, z}, {}, "left"};
                    return true;
                }
                if (!rel.related(g.combine(x, z), g.combine(y, z))) {
                    witness = Witness{{x, y, z}, {}, "right"};
                    return true;
                }
            } catch (const CarrierMismatch&) {
                skipped = true;
            }
            return false;
        };
        break;
    default: throw PreconditionError("not a structural property");
    }

    bool stopped = false;
    const bool complete = scan_prefix_tuples(d.size(), arity, dom.exhaustive ? 0 : config.budget, visit, stopped);

    PropertyStatus status;
    status.property = prop;
    status.probe_size = probe.elements.size();
    status.depth = probe.depth;
    if (witness) {
        status.outcome = Outcome::Violated;
        status.witness = witness;
        status.evidence = "counterexample in scan of " + dom.label;
    } else if (complete && dom.exhaustive && !skipped) {
        status.outcome = Outcome::ProvenExhaustive;
        status.evidence = "exhaustive over " + dom.label;
    } else if (rel.declares(prop)) {
        status.outcome = Outcome::Declared;
        status.evidence = "declared by " + rel.describe() + "; spot-checked on " + dom.label + " of " +
                          std::to_string(d.size());
    } else {
        status.outcome = Outcome::NoViolationFound;
        status.evidence = std::string(complete ? "full" : "budgeted") + " scan of " + dom.label + " of " +
                          std::to_string(d.size());
    }
    return status;
}

bool is_dominating_family(PropertyId prop)
{
    return prop == PropertyId::P4 || prop == PropertyId::P4p;
}

bool is_primed(PropertyId prop)
{
    return prop == PropertyId::P4p || prop == PropertyId::P5p;
}

// Holds of b alone: b R 0_G for P4, 0_G R b for P5. Such b satisfy the
// conclusion of the implication outright.
bool single_ok(PropertyId prop, const RelationOracle& rel, const GroupElement& zero, const GroupElement& b)
{
    return is_dominating_family(prop) ? rel.related(b, zero) : rel.related(zero, b);
}

bool premise(PropertyId prop, const RelationOracle& rel, const GroupElement& zero, const GroupElement& sum)
{
    return is_dominating_family(prop) ? rel.related(sum, zero) : rel.related(zero, sum);
}

GroupElement weighted_sum(const std::vector<GroupElement>& bs, const std::vector<std::uint64_t>& ps,
                          const GroupContext& g)
{
    GroupElement acc = g.identity();
    for (std::size_t i = 0; i < bs.size(); ++i) {
        acc = g.combine(acc, g.repeat(ps[i], bs[i]));
    }
    return acc;
}

// Combinations of distinct members of B (canonical order), multiplicities in
// [1, M]. Blocks of increasing maximum multiplicity, so a larger M only appends.
std::optional<Witness> bounded_repetition_scan(PropertyId prop, const RelationOracle& rel, const GroupContext& g,
                                               const FiniteSet& b, std::uint64_t max_mult, std::size_t bound,
                                               std::size_t budget, bool& complete)
{
    const GroupElement zero = g.identity();
    complete = true;
    std::size_t examined = 0;
    const std::size_t n = b.size();
    bound = std::min(bound, n);
    std::vector<bool> ok(n);
    for (std::size_t i = 0; i < n; ++i) {
        ok[i] = single_ok(prop, rel, zero, b[i]);
    }
    for (std::uint64_t top = 1; top <= max_mult; ++top) {
        for (std::size_t m = 1; m <= bound; ++m) {
            std::vector<std::size_t> idx(m);
            for (std::size_t i = 0; i < m; ++i) {
                idx[i] = i;
            }
            while (true) {
                const bool relevant = std::none_of(idx.begin(), idx.end(), [&](std::size_t i) { return ok[i]; });
                if (relevant) {
                    std::vector<std::uint64_t> p(m, 1);
                    std::vector<GroupElement> elems;
                    for (auto i : idx) {
                        elems.push_back(b[i]);
                    }
                    while (true) {
                        if (++examined > budget) {
                            complete = false;
                            return std::nullopt;
                        }
                        if (std::find(p.begin(), p.end(), top) != p.end()) {
                            try {
                                if (premise(prop, rel, zero, weighted_sum(elems, p, g))) {
                                    return Witness{elems, p, {}};
                                }
                            } catch (const CarrierMismatch&) {
                                complete = false;
                            }
                        }
                        std::size_t pos = m;
                        while (pos > 0 && p[pos - 1] == top) {
                            p[pos - 1] = 1;
                            --pos;
                        }
                        if (pos == 0) {
                            break;
                        }
                        ++p[pos - 1];
                    }
                }
                std::size_t pos = m;
                while (pos > 0 && idx[pos - 1] == n - m + pos - 1) {
                    --pos;
                }
                if (pos == 0) {
                    break;
                }
                ++idx[pos - 1];
                for (std::size_t i = pos; i < m; ++i) {
                    idx[i] = idx[i - 1] + 1;
                }
            }
        }
    }
    return std::nullopt;
}

struct ExactDecision {
    std::optional<Witness> witness;
    Outcome holds_outcome = Outcome::ProvenExhaustive;
    std::string evidence;
};

Witness word_to_witness(const std::vector<std::size_t>& word, const std::vector<GroupElement>& letters)
{
    Witness w;
    for (std::size_t letter : word) {
        if (!w.elements.empty() && w.elements.back() == letters[letter]) {
            ++w.multiplicities.back();
        } else {
            w.elements.push_back(letters[letter]);
            w.multiplicities.push_back(1);
        }
    }
    return w;
}

constexpr std::size_t closure_cap = 100000;

// Every value p_1 b^1 + ... + p_m b^m with b^l drawn from `letters` is a
// nonempty word over them, so scanning the generated subsemigroup decides the
// property. Breadth-first order yields a shortest witness word.
std::optional<ExactDecision> closure_decide(PropertyId prop, const RelationOracle& rel, const GroupContext& g,
                                            const std::vector<GroupElement>& letters)
{
    const GroupElement zero = g.identity();
    struct Node {
        GroupElement value;
        std::size_t parent;
        std::size_t letter;
    };
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    try {
        if (is_primed(prop)) {
            for (std::size_t l = 0; l < letters.size(); ++l) {
                GroupElement s = letters[l];
                for (std::uint64_t p = 1; p <= closure_cap; ++p) {
                    if (p > 1) {
                        s = g.combine(s, letters[l]);
                        if (s == letters[l]) {
                            break;
                        }
                    }
                    if (premise(prop, rel, zero, s)) {
                        return ExactDecision{Witness{{letters[l]}, {p}, {}}, Outcome::ProvenExhaustive,
                                             "cyclic closure of each b"};
                    }
                }
                if (s != letters[l]) {
                    return std::nullopt;
                }
            }
            return ExactDecision{std::nullopt, Outcome::ProvenExhaustive, "cyclic closure of each b"};
        }
        std::vector<Node> nodes;
        std::unordered_map<GroupElement, std::size_t, GroupElementHash> index;
        std::deque<std::size_t> queue;
        auto witness_of = [&](std::size_t id) {
            std::vector<std::size_t> word;
            for (std::size_t at = id; at != none; at = nodes[at].parent) {
                word.push_back(nodes[at].letter);
            }
            std::reverse(word.begin(), word.end());
            return word_to_witness(word, letters);
        };
        auto add = [&](GroupElement value, std::size_t parent, std::size_t letter) -> std::optional<std::size_t> {
            if (index.contains(value)) {
                return std::nullopt;
            }
            const std::size_t id = nodes.size();
            index.emplace(value, id);
            nodes.push_back({std::move(value), parent, letter});
            queue.push_back(id);
            return id;
        };
        for (std::size_t l = 0; l < letters.size(); ++l) {
            if (auto id = add(letters[l], none, l); id && premise(prop, rel, zero, nodes[*id].value)) {
                return ExactDecision{witness_of(*id), Outcome::ProvenExhaustive, "closure of B"};
            }
        }
        while (!queue.empty()) {
            const std::size_t at = queue.front();
            queue.pop_front();
            for (std::size_t l = 0; l < letters.size(); ++l) {
                auto id = add(g.combine(nodes[at].value, letters[l]), at, l);
                if (!id) {
                    continue;
                }
                if (premise(prop, rel, zero, nodes[*id].value)) {
                    return ExactDecision{witness_of(*id), Outcome::ProvenExhaustive, "closure of B"};
                }
                if (nodes.size() > closure_cap) {
                    return std::nullopt;
                }
            }
        }
        return ExactDecision{std::nullopt, Outcome::ProvenExhaustive,
                             "closure of B (" + std::to_string(nodes.size()) + " sums)"};
    } catch (const CarrierMismatch&) {
        return std::nullopt;
    }
}

std::optional<ExactDecision> cone_decide(PropertyId prop, const RelationOracle& rel,
                                         const std::vector<GroupElement>& letters)
{
    using detail::ConeSense;
    ConeSense sense = ConeSense::Zero;
    if (rel.kind() == RelationKind::ProductOrder) {
        sense = is_dominating_family(prop) ? ConeSense::NonNegative : ConeSense::NonPositive;
    }
    auto as_vector = [](const GroupElement& e) { return std::vector<Coord>(e.values().begin(), e.values().end()); };
    const std::string evidence = "exact rational cone test over B";
    if (is_primed(prop)) {
        for (const auto& b : letters) {
            auto r = detail::find_cone_combination({as_vector(b)}, sense);
            if (!r.decided) {
                return std::nullopt;
            }
            if (r.multiplicities) {
                return ExactDecision{Witness{{b}, {(*r.multiplicities)[0]}, {}}, Outcome::Declared, evidence};
            }
        }
        return ExactDecision{std::nullopt, Outcome::Declared, evidence};
    }
    std::vector<std::vector<Coord>> vectors;
    for (const auto& b : letters) {
        vectors.push_back(as_vector(b));
    }
    auto r = detail::find_cone_combination(vectors, sense);
    if (!r.decided) {
        return std::nullopt;
    }
    if (!r.multiplicities) {
        return ExactDecision{std::nullopt, Outcome::Declared, evidence};
    }
    Witness w;
    for (std::size_t l = 0; l < letters.size(); ++l) {
        if ((*r.multiplicities)[l] > 0) {
            w.elements.push_back(letters[l]);
            w.multiplicities.push_back((*r.multiplicities)[l]);
        }
    }
    return ExactDecision{std::move(w), Outcome::Declared, evidence};
}

PropertyStatus repetition_audit(PropertyId prop, const RelationOracle& rel, const GroupContext& g,
                                const ProbeSet& probe, const FiniteSet& b, std::uint64_t max_mult,
                                const AuditConfig& config)
{
    PropertyStatus status;
    status.property = prop;
    status.probe_size = probe.elements.size();
    status.depth = probe.depth;

    const std::size_t bound = is_primed(prop) ? 1 : config.combination_bound.value_or(b.size());
    const GroupElement zero = g.identity();
    bool complete = true;
    std::vector<GroupElement> letters;
    try {
        for (const auto& x : b) {
            if (!single_ok(prop, rel, zero, x)) {
                letters.push_back(x);
            }
        }
    } catch (const CarrierMismatch&) {
        letters.clear();
        complete = false;
    }

    // The cone test is exact, so the bounded scan only runs when it has a
    // violation to find; the scan still supplies the scan-order-first witness.
    const bool cone_exact = g.kind() == CarrierKind::IntVec &&
                            (rel.kind() == RelationKind::ProductOrder || rel.kind() == RelationKind::Equality);
    std::optional<ExactDecision> exact;
    if (letters.empty() && complete) {
        exact = ExactDecision{std::nullopt, g.order() ? Outcome::ProvenExhaustive : Outcome::Declared,
                              "every b in B already satisfies the conclusion"};
    } else if (cone_exact) {
        exact = cone_decide(prop, rel, letters);
    }
    const bool scan_needed = !exact || exact->witness;
    if (scan_needed) {
        bool scanned_all = true;
        if (auto w = bounded_repetition_scan(prop, rel, g, b, max_mult, bound, config.budget, scanned_all)) {
            status.outcome = Outcome::Violated;
            status.witness = std::move(w);
            status.evidence = "bounded scan, multiplicities up to " + std::to_string(max_mult);
            return status;
        }
    }
    if (!exact && (g.order() || g.kind() == CarrierKind::FinSet)) {
        exact = closure_decide(prop, rel, g, letters);
    }

    if (exact) {
        if (exact->witness) {
            status.outcome = Outcome::Violated;
            status.witness = std::move(exact->witness);
        } else {
            status.outcome = exact->holds_outcome;
        }
        status.evidence = exact->evidence;
        return status;
    }
    if (rel.declares(prop)) {
        status.outcome = Outcome::Declared;
        status.evidence = "declared by " + rel.describe();
    } else {
        status.outcome = Outcome::NoViolationFound;
        status.evidence = "bounded scan, multiplicities up to " + std::to_string(max_mult);
    }
    return status;
}

} // namespace

PropertyStatus audit_property(PropertyId prop, const RelationOracle& rel, const GroupContext& g,
                              const ProbeSet& probe, const FiniteSet& b, std::uint64_t max_multiplicity,
                              const AuditConfig& config)
{
    if (probe.elements.empty()) {
        throw PreconditionError("audit needs a nonempty probe");
    }
    if (max_multiplicity < 1) {
        throw PreconditionError("max_multiplicity must be at least 1");
    }
    switch (prop) {
    case PropertyId::Refl:
    case PropertyId::P1:
    case PropertyId::P2:
    case PropertyId::P3: return structural_audit(prop, rel, g, probe, config);
    default: return repetition_audit(prop, rel, g, probe, b, max_multiplicity, config);
    }
}

std::vector<PropertyStatus> audit_all(const FiniteSet& a, const FiniteSet& b, const GroupContext& g,
                                      const RelationOracle& rel, const AuditConfig& config)
{
    const ProbeSet probe = probe_closure(a, b, g, config.depth, std::max(config.cap, a.size() + b.size() + 1));
    const std::uint64_t mult = config.max_multiplicity.value_or(default_max_multiplicity(a, b));
    std::vector<PropertyStatus> out;
    for (PropertyId id : all_properties) {
        out.push_back(audit_property(id, rel, g, probe, b, mult, config));
    }
    return out;
}

bool replay_violation(const PropertyStatus& status, const RelationOracle& rel, const GroupContext& g)
{
    if (status.outcome != Outcome::Violated || !status.witness) {
        return false;
    }
    const Witness& w = *status.witness;
    const auto& e = w.elements;
    const GroupElement zero = g.identity();
    switch (status.property) {
    case PropertyId::Refl: return e.size() == 1 && !rel.related(e[0], e[0]);
    case PropertyId::P1:
        return e.size() == 3 && rel.related(e[0], e[1]) && rel.related(e[1], e[2]) && !rel.related(e[0], e[2]);
    case PropertyId::P2: return e.size() == 2 && e[0] != e[1] && rel.related(e[0], e[1]) && rel.related(e[1], e[0]);
    case PropertyId::P3: {
        if (e.size() != 3 || !rel.related(e[0], e[1])) {
            return false;
        }
        if (w.side == "left") {
            return !rel.related(g.combine(e[2], e[0]), g.combine(e[2], e[1]));
        }
        if (w.side == "right") {
            return !rel.related(g.combine(e[0], e[2]), g.combine(e[1], e[2]));
        }
        return false;
    }
    default: {
        if (e.empty() || e.size() != w.multiplicities.size()) {
            return false;
        }
        if (is_primed(status.property) && e.size() != 1) {
            return false;
        }
        if (std::any_of(w.multiplicities.begin(), w.multiplicities.end(), [](auto p) { return p == 0; })) {
            return false;
        }
        const PropertyId base = is_dominating_family(status.property) ? PropertyId::P4 : PropertyId::P5;
        if (!premise(base, rel, zero, weighted_sum(e, w.multiplicities, g))) {
            return false;
        }
        return std::none_of(e.begin(), e.end(), [&](const GroupElement& x) { return single_ok(base, rel, zero, x); });
    }
    }
}

} // namespace effsum
