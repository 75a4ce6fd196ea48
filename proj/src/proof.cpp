#include "effsum/proof.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace effsum {

CycleWitness find_index_cycle(const IndexMap& map, std::size_t start)
{
    if (map.images.size() != map.n || map.n == 0) {
        throw MalformedSystem("index map must list one image for each of 1.." + std::to_string(map.n));
    }
    for (std::size_t img : map.images) {
        if (img < 1 || img > map.n) {
            throw MalformedSystem("index map image " + std::to_string(img) + " out of range");
        }
    }
    if (start < 1 || start > map.n) {
        throw IndexOutOfRange("cycle start " + std::to_string(start) + " out of range");
    }
    std::vector<std::size_t> seen_at(map.n + 1, 0);
    std::vector<std::size_t> seq;
    std::size_t x = start;
    while (seen_at[x] == 0) {
        seq.push_back(x);
        seen_at[x] = seq.size();
        x = map.images[x - 1];
    }
    CycleWitness out;
    out.indices.assign(seq.begin() + static_cast<long>(seen_at[x] - 1), seq.end());
    out.length = out.indices.size();
    return out;
}

std::string to_string(SystemKind k)
{
    switch (k) {
    case SystemKind::S0: return "S0";
    case SystemKind::S1: return "S1";
    case SystemKind::S2: return "S2";
    case SystemKind::S3: return "S3";
    case SystemKind::S4: return "S4";
    case SystemKind::S5: return "S5";
    case SystemKind::Mixed: return "MIXED";
    }
    return "?";
}

SystemKind system_kind_from_string(const std::string& text)
{
    for (SystemKind k : {SystemKind::S0, SystemKind::S1, SystemKind::S2, SystemKind::S3, SystemKind::S4,
                         SystemKind::S5, SystemKind::Mixed}) {
        if (to_string(k) == text) {
            return k;
        }
    }
    throw ParseError("unknown system kind '" + text + "'");
}

std::string to_string(StepRule r)
{
    switch (r) {
    case StepRule::Group: return "GROUP";
    case StepRule::P1: return "P1";
    case StepRule::P3: return "P3";
    case StepRule::P4: return "P4";
    case StepRule::P5: return "P5";
    }
    return "?";
}

namespace {

[[noreturn]] void malformed(const std::string& what)
{
    throw MalformedSystem(what);
}

bool equation_kind(SystemKind k)
{
    return k == SystemKind::S0 || k == SystemKind::S3;
}

bool split_kind(SystemKind k)
{
    return k == SystemKind::S1 || k == SystemKind::S2;
}

bool single_b_kind(SystemKind k)
{
    return k == SystemKind::S0 || k == SystemKind::S1 || k == SystemKind::S4;
}

} // namespace

void validate_system(const SystemInstance& sys)
{
    const std::size_t n = sys.points.size();
    const std::size_t m = sys.bs.size();
    if (n == 0) {
        malformed("system has no points");
    }
    if (m == 0) {
        malformed("system has no b");
    }
    if (single_b_kind(sys.kind) && m != 1) {
        malformed(to_string(sys.kind) + " takes exactly one b");
    }
    auto in_range = [&](std::size_t x, std::size_t hi) { return x >= 1 && x <= hi; };
    auto check_row = [&](const SystemRow& r, std::size_t idx) {
        if (!in_range(r.left, n) || !in_range(r.right, n)) {
            malformed("row " + std::to_string(idx + 1) + " refers to a point outside a1..a" + std::to_string(n));
        }
        if (!in_range(r.b, m)) {
            malformed("row " + std::to_string(idx + 1) + " refers to a missing b");
        }
    };
    for (std::size_t i = 0; i < sys.rows.size(); ++i) {
        check_row(sys.rows[i], i);
    }

    if (equation_kind(sys.kind)) {
        if (sys.rows.size() != n) {
            malformed(to_string(sys.kind) + " needs one equation per point");
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (sys.rows[i].relation != Rel::Equal || sys.rows[i].left != i + 1) {
                malformed("equation " + std::to_string(i + 1) + " must read a" + std::to_string(i + 1) + " = ...");
            }
        }
        return;
    }
    if (split_kind(sys.kind)) {
        if (sys.k < 1 || sys.k + 1 > n) {
            malformed("split index k must satisfy 1 <= k <= n-1");
        }
        if (sys.rows.size() != n) {
            malformed(to_string(sys.kind) + " needs k equations and n-k comparisons");
        }
        for (std::size_t i = 0; i < n; ++i) {
            const SystemRow& r = sys.rows[i];
            if (i < sys.k) {
                if (r.relation != Rel::Equal || r.left != i + 1) {
                    malformed("equation " + std::to_string(i + 1) + " must read a" + std::to_string(i + 1) + " = ...");
                }
            } else if (r.relation != Rel::Strict || r.right != i + 1 || r.left > sys.k) {
                malformed("comparison " + std::to_string(i + 1) + " must read a^i P a" + std::to_string(i + 1) +
                          " with i <= k");
            }
        }
        return;
    }
    const std::size_t per_point = (sys.kind == SystemKind::S4) ? 1 : m;
    if (sys.rows.size() != n * per_point) {
        malformed(to_string(sys.kind) + " needs one row per point and b");
    }
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t l = 0; l < per_point; ++l) {
            const SystemRow& r = sys.rows[j * per_point + l];
            if (r.right != j + 1 || r.b != l + 1) {
                malformed("rows must be ordered by point, then by b");
            }
            if (sys.kind == SystemKind::Mixed) {
                if (r.relation == Rel::Weak) {
                    malformed("MIXED rows are P or =");
                }
            } else if (r.relation != Rel::Strict || r.left == r.right) {
                malformed(to_string(sys.kind) + " rows read a^i P (a^j + b) with i != j");
            }
        }
    }
}

SystemInstance project_s5(const SystemInstance& sys, std::size_t l)
{
    if (sys.kind != SystemKind::S5 && sys.kind != SystemKind::Mixed) {
        malformed("only S5 and MIXED systems project onto one b");
    }
    validate_system(sys);
    if (l < 1 || l > sys.bs.size()) {
        throw IndexOutOfRange("b index " + std::to_string(l) + " outside 1.." + std::to_string(sys.bs.size()));
    }
    SystemInstance out;
    out.kind = sys.kind == SystemKind::S5 ? SystemKind::S4 : SystemKind::Mixed;
    out.points = sys.points;
    out.bs = {sys.bs[l - 1]};
    for (const auto& r : sys.rows) {
        if (r.b == l) {
            out.rows.push_back({r.relation, r.left, r.right, 1});
        }
    }
    for (const auto& [j, ll] : sys.outside_pairs) {
        if (ll == l) {
            out.outside_pairs.emplace_back(j, 1);
        }
    }
    validate_system(out);
    return out;
}

namespace {

std::string b_name(std::size_t l, std::size_t b_count)
{
    return b_count == 1 ? "b" : "b" + std::to_string(l);
}

std::string render_word(const std::vector<std::size_t>& word, std::size_t b_count)
{
    std::string out;
    for (std::size_t i = 0; i < word.size();) {
        std::size_t run = 1;
        while (i + run < word.size() && word[i + run] == word[i]) {
            ++run;
        }
        if (!out.empty()) {
            out += "+";
        }
        if (run > 1) {
            out += std::to_string(run);
        }
        out += b_name(word[i], b_count);
        i += run;
    }
    return out;
}

std::string rel_symbol(Rel r)
{
    switch (r) {
    case Rel::Equal: return "=";
    case Rel::Strict: return "P";
    case Rel::Weak: return "R";
    }
    return "?";
}

} // namespace

std::string render(const Term& t, std::size_t b_count)
{
    if (t.base == 0) {
        if (t.word.empty()) {
            return "0_G";
        }
        if (t.word.size() == 1) {
            return b_name(t.word[0], b_count);
        }
        return "(" + render_word(t.word, b_count) + ")";
    }
    const std::string a = "a" + std::to_string(t.base);
    if (t.word.empty()) {
        return a;
    }
    return "(" + a + "+" + render_word(t.word, b_count) + ")";
}

std::string render(const Fact& f, std::size_t b_count)
{
    auto side = [&](const Term& t) {
        if (f.some_of.empty() || t.base != 0 || t.word.size() != 1) {
            return render(t, b_count);
        }
        std::string out = "anyof(";
        for (std::size_t i = 0; i < f.some_of.size(); ++i) {
            out += (i ? "," : "") + b_name(f.some_of[i], b_count);
        }
        return out + ")";
    };
    return side(f.lhs) + rel_symbol(f.rel) + side(f.rhs);
}

std::string serialize(const DerivationTrace& trace)
{
    const std::size_t m = trace.bs.size();
    std::ostringstream out;
    out << "# system " << to_string(trace.kind) << " n=" << trace.points.size() << " m=" << m << "\n";
    for (std::size_t i = 0; i < trace.points.size(); ++i) {
        out << "# a" << i + 1 << " = " << trace.points[i].to_string() << "\n";
    }
    for (std::size_t l = 0; l < m; ++l) {
        out << "# " << b_name(l + 1, m) << " = " << trace.bs[l].to_string() << "\n";
    }
    for (const auto& h : trace.hypotheses) {
        out << "# hypothesis " << render(h.fact, m);
        if (h.concrete) {
            out << (*h.concrete ? " [true]" : " [false]");
        }
        out << "\n";
    }
    for (const auto& note : trace.notes) {
        out << "# " << note << "\n";
    }
    for (const auto& s : trace.steps) {
        out << to_string(s.rule) << " | " << render(s.fact, m) << "\n";
    }
    out << "CONTRADICTION | " << render(trace.conclusion, m) << "\n";
    return out.str();
}

namespace {

GroupElement evaluate(const Term& t, const std::vector<GroupElement>& points, const std::vector<GroupElement>& bs,
                      const GroupContext& g)
{
    GroupElement acc = t.base == 0 ? g.identity() : points.at(t.base - 1);
    for (std::size_t l : t.word) {
        acc = g.combine(acc, bs.at(l - 1));
    }
    return acc;
}

std::optional<bool> concrete_truth(const Fact& f, const std::vector<GroupElement>& points,
                                   const std::vector<GroupElement>& bs, const GroupContext& g,
                                   const RelationOracle* rel)
{
    auto holds = [&](const Term& lhs, const Term& rhs) -> std::optional<bool> {
        const GroupElement x = evaluate(lhs, points, bs, g);
        const GroupElement y = evaluate(rhs, points, bs, g);
        if (f.rel == Rel::Equal) {
            return x == y;
        }
        if (!rel) {
            return std::nullopt;
        }
        try {
            return f.rel == Rel::Strict ? rel->strictly(x, y) : rel->related(x, y);
        } catch (const CarrierMismatch&) {
            return std::nullopt;
        }
    };
    if (f.some_of.empty()) {
        return holds(f.lhs, f.rhs);
    }
    const bool b_left = f.lhs.base == 0 && f.lhs.word.size() == 1;
    bool any = false;
    for (std::size_t l : f.some_of) {
        Term t{0, {l}};
        auto r = b_left ? holds(t, f.rhs) : holds(f.lhs, t);
        if (!r) {
            return std::nullopt;
        }
        any = any || *r;
    }
    return any;
}

std::vector<std::size_t> concat(const std::vector<std::size_t>& x, const std::vector<std::size_t>& y)
{
    std::vector<std::size_t> out = x;
    out.insert(out.end(), y.begin(), y.end());
    return out;
}

Rel chain(Rel x, Rel y)
{
    if (x == Rel::Equal && y == Rel::Equal) {
        return Rel::Equal;
    }
    if (x == Rel::Weak || y == Rel::Weak) {
        return Rel::Weak;
    }
    return Rel::Strict;
}

std::vector<std::size_t> distinct_letters(const std::vector<std::size_t>& word)
{
    std::set<std::size_t> s(word.begin(), word.end());
    return {s.begin(), s.end()};
}

std::vector<std::uint64_t> letter_counts(const std::vector<std::size_t>& word, std::size_t m)
{
    std::vector<std::uint64_t> out(m, 0);
    for (std::size_t l : word) {
        ++out[l - 1];
    }
    return out;
}

class TraceBuilder {
public:
    TraceBuilder(const SystemInstance& sys, const GroupContext& g, const RelationOracle* rel) : g_(g), rel_(rel)
    {
        for (const auto& p : sys.points) {
            g.require_member(p);
        }
        for (const auto& b : sys.bs) {
            g.require_member(b);
        }
        t_.kind = sys.kind;
        t_.points = sys.points;
        t_.bs = sys.bs;
        if (rel) {
            for (std::size_t l = 0; l < sys.bs.size(); ++l) {
                bool inc = false;
                try {
                    inc = rel->incomparable(sys.bs[l], g.identity());
                } catch (const CarrierMismatch&) {
                }
                t_.notes.push_back("hypothesis " + b_name(l + 1, sys.bs.size()) + "I0_G" + (inc ? " [true]" : " [false]"));
            }
        } else {
            t_.notes.push_back("hypothesis every b I 0_G");
        }
    }

    long hypothesis(const Fact& f)
    {
        t_.hypotheses.push_back({f, concrete_truth(f, t_.points, t_.bs, g_, rel_)});
        return -static_cast<long>(t_.hypotheses.size());
    }

    const Fact& fact(long ref) const
    {
        return ref < 0 ? t_.hypotheses[static_cast<std::size_t>(-ref - 1)].fact
                       : t_.steps[static_cast<std::size_t>(ref)].fact;
    }

    long step(StepRule rule, Fact f, std::vector<long> premises)
    {
        t_.steps.push_back({rule, std::move(f), std::move(premises)});
        return static_cast<long>(t_.steps.size()) - 1;
    }

    // eq: a^i = (a^j + w). Replaces a^i as the base of a term in `target`.
    long substitute(long eq, long target, bool rhs_side)
    {
        const Fact& e = fact(eq);
        Fact f = fact(target);
        Term& t = rhs_side ? f.rhs : f.lhs;
        t = Term{e.rhs.base, concat(e.rhs.word, t.word)};
        return step(StepRule::Group, std::move(f), {eq, target});
    }

    long translate(long ref, const std::vector<std::size_t>& w)
    {
        Fact f = fact(ref);
        f.lhs.word = concat(f.lhs.word, w);
        f.rhs.word = concat(f.rhs.word, w);
        return step(StepRule::P3, std::move(f), {ref});
    }

    long transit(long first, long second)
    {
        const Fact& x = fact(first);
        const Fact& y = fact(second);
        Fact f{x.lhs, chain(x.rel, y.rel), y.rhs, {}};
        return step(StepRule::P1, std::move(f), {first, second});
    }

    long strip(long ref, StepRule rule)
    {
        Fact f = fact(ref);
        f.lhs.base = 0;
        f.rhs.base = 0;
        return step(rule, std::move(f), {ref});
    }

    // W X 0_G (P4) or 0_G X W (P5) down to a single b.
    long collapse(long ref, StepRule rule)
    {
        const Fact& src = fact(ref);
        const Term& w = rule == StepRule::P4 ? (src.lhs.word.empty() ? src.rhs : src.lhs)
                                             : (src.rhs.word.empty() ? src.lhs : src.rhs);
        auto letters = distinct_letters(w.word);
        Fact f;
        f.rel = src.rel == Rel::Strict ? Rel::Strict : Rel::Weak;
        Term single{0, {letters.front()}};
        if (rule == StepRule::P4) {
            f.lhs = single;
            f.rhs = Term{};
        } else {
            f.lhs = Term{};
            f.rhs = single;
        }
        if (letters.size() > 1) {
            f.some_of = letters;
        }
        return step(rule, std::move(f), {ref});
    }

    DerivationTrace finish(long last)
    {
        t_.conclusion = fact(last);
        return std::move(t_);
    }

    DerivationTrace& trace() { return t_; }

private:
    const GroupContext& g_;
    const RelationOracle* rel_;
    DerivationTrace t_;
};

Fact equation_fact(const SystemRow& r)
{
    return Fact{Term{r.left, {}}, Rel::Equal, Term{r.right, {r.b}}, {}};
}

// Chains the equations of a cycle l1 -> l2 -> ... -> l1 into 0_G = W, then P4.
long equation_cycle_steps(TraceBuilder& tb, const std::vector<long>& eq_refs, const std::vector<std::size_t>& cycle)
{
    long acc = eq_refs[cycle.front() - 1];
    for (std::size_t t = 1; t < cycle.size(); ++t) {
        acc = tb.substitute(eq_refs[cycle[t] - 1], acc, true);
    }
    acc = tb.strip(acc, StepRule::Group);
    return tb.collapse(acc, StepRule::P4);
}

} // namespace

DerivationTrace derive_equation_cycle(const SystemInstance& sys, const GroupContext& g, const RelationOracle* rel)
{
    if (!equation_kind(sys.kind)) {
        malformed("derive_equation_cycle takes S0 or S3");
    }
    validate_system(sys);
    TraceBuilder tb(sys, g, rel);
    std::vector<long> eq;
    IndexMap f{sys.points.size(), {}};
    for (const auto& r : sys.rows) {
        eq.push_back(tb.hypothesis(equation_fact(r)));
        f.images.push_back(r.right);
    }
    const CycleWitness cycle = find_index_cycle(f, 1);
    std::string line = "cycle";
    for (auto i : cycle.indices) {
        line += " " + std::to_string(i);
    }
    tb.trace().notes.push_back(line);
    return tb.finish(equation_cycle_steps(tb, eq, cycle.indices));
}

Elimination eliminate_representations(const SystemInstance& sys, const GroupContext& g)
{
    if (!split_kind(sys.kind)) {
        malformed("elimination takes S1 or S2");
    }
    validate_system(sys);
    const std::size_t k = sys.k;
    const std::size_t m = sys.bs.size();
    std::vector<Representation> reps;
    for (std::size_t i = 1; i <= k; ++i) {
        std::vector<std::size_t> path;
        std::vector<std::size_t> word;
        std::size_t c = i;
        while (c <= k) {
            auto seen = std::find(path.begin(), path.end(), c);
            if (seen != path.end()) {
                CycleWitness w;
                w.indices.assign(seen, path.end());
                w.length = w.indices.size();
                std::vector<std::size_t> letters;
                for (auto idx : w.indices) {
                    letters.push_back(sys.rows[idx - 1].b);
                }
                w.multiplicities = letter_counts(letters, m);
                return w;
            }
            path.push_back(c);
            const SystemRow& r = sys.rows[c - 1];
            word.insert(word.begin(), r.b);
            c = r.right;
        }
        Representation rep;
        rep.index = i;
        rep.target = c;
        rep.word = word;
        rep.multiplicities = letter_counts(word, m);
        rep.holds_concretely = sys.points[i - 1] == evaluate(Term{c, word}, sys.points, sys.bs, g);
        reps.push_back(std::move(rep));
    }
    return reps;
}

DerivationTrace derive_dominator_cycle(const SystemInstance& sys, const GroupContext& g, const RelationOracle* rel)
{
    if (!split_kind(sys.kind)) {
        malformed("derive_dominator_cycle takes S1 or S2");
    }
    const Elimination elim = eliminate_representations(sys, g);
    const std::size_t n = sys.points.size();
    const std::size_t k = sys.k;

    TraceBuilder tb(sys, g, rel);
    std::vector<long> refs;
    for (const auto& r : sys.rows) {
        if (r.relation == Rel::Equal) {
            refs.push_back(tb.hypothesis(equation_fact(r)));
        } else {
            refs.push_back(tb.hypothesis(Fact{Term{r.left, {}}, Rel::Strict, Term{r.right, {}}, {}}));
        }
    }
    tb.trace().notes.push_back("split k=" + std::to_string(k));

    if (const auto* cycle = std::get_if<CycleWitness>(&elim)) {
        std::string line = "equation cycle";
        for (auto i : cycle->indices) {
            line += " " + std::to_string(i);
        }
        tb.trace().notes.push_back(line);
        return tb.finish(equation_cycle_steps(tb, refs, cycle->indices));
    }
    const auto& reps = std::get<std::vector<Representation>>(elim);

    // a^i = (a^target + word) for i <= k, derived on demand.
    std::map<std::size_t, long> rep_fact;
    auto representation = [&](std::size_t i) {
        if (auto it = rep_fact.find(i); it != rep_fact.end()) {
            return it->second;
        }
        long acc = refs[i - 1];
        while (tb.fact(acc).rhs.base <= k) {
            acc = tb.substitute(refs[tb.fact(acc).rhs.base - 1], acc, true);
        }
        rep_fact.emplace(i, acc);
        return acc;
    };

    IndexMap f{n, std::vector<std::size_t>(n, k + 1)};
    for (std::size_t j = k + 1; j <= n; ++j) {
        f.images[j - 1] = reps[sys.rows[j - 1].left - 1].target;
    }
    const CycleWitness cycle = find_index_cycle(f, k + 1);
    std::string line = "comparison cycle";
    for (auto i : cycle.indices) {
        line += " " + std::to_string(i);
    }
    tb.trace().notes.push_back(line);

    std::map<std::size_t, long> rewritten;
    for (std::size_t u : cycle.indices) {
        rewritten[u] = tb.substitute(representation(sys.rows[u - 1].left), refs[u - 1], false);
    }
    long acc = rewritten[cycle.indices.front()];
    for (std::size_t t = 1; t < cycle.length; ++t) {
        const long moved = tb.translate(rewritten[cycle.indices[t]], tb.fact(acc).lhs.word);
        acc = tb.transit(moved, acc);
    }
    acc = tb.strip(acc, StepRule::P3);
    if (tb.fact(acc).lhs.word.size() > 1) {
        acc = tb.collapse(acc, StepRule::P4);
    }
    return tb.finish(acc);
}

DerivationTrace derive_dominated_cycle(const SystemInstance& sys, const GroupContext& g, const RelationOracle* rel,
                                       std::size_t l)
{
    if (sys.kind != SystemKind::S4 && sys.kind != SystemKind::S5 && sys.kind != SystemKind::Mixed) {
        malformed("derive_dominated_cycle takes S4, S5 or MIXED");
    }
    validate_system(sys);
    if (sys.kind == SystemKind::S5 || (sys.kind == SystemKind::Mixed && sys.bs.size() > 1)) {
        DerivationTrace t = derive_dominated_cycle(project_s5(sys, l), g, rel, 1);
        t.notes.insert(t.notes.begin(), "projected " + to_string(sys.kind) + " onto b" + std::to_string(l) + " = " +
                                            sys.bs[l - 1].to_string());
        return t;
    }
    const std::size_t n = sys.points.size();
    TraceBuilder tb(sys, g, rel);
    std::vector<long> refs;
    IndexMap f{n, {}};
    for (const auto& r : sys.rows) {
        refs.push_back(tb.hypothesis(Fact{Term{r.left, {}}, r.relation, Term{r.right, {r.b}}, {}}));
        f.images.push_back(r.left);
    }
    if (!sys.outside_pairs.empty()) {
        std::string line = "J =";
        for (const auto& [j, ll] : sys.outside_pairs) {
            line += " (" + std::to_string(j) + "," + std::to_string(ll) + ")";
        }
        tb.trace().notes.push_back(line);
    }
    const CycleWitness cycle = find_index_cycle(f, 1);
    std::string line = "cycle";
    for (auto i : cycle.indices) {
        line += " " + std::to_string(i);
    }
    tb.trace().notes.push_back(line);

    long acc = refs[cycle.indices.back() - 1];
    for (std::size_t t = cycle.length - 1; t-- > 0;) {
        const long moved = tb.translate(refs[cycle.indices[t] - 1], tb.fact(acc).rhs.word);
        acc = tb.transit(acc, moved);
    }
    acc = tb.strip(acc, StepRule::P3);
    if (tb.fact(acc).rhs.word.size() > 1) {
        acc = tb.collapse(acc, StepRule::P5);
    }
    return tb.finish(acc);
}

DerivationTrace derive(const SystemInstance& sys, const GroupContext& g, const RelationOracle* rel)
{
    if (equation_kind(sys.kind)) {
        return derive_equation_cycle(sys, g, rel);
    }
    if (split_kind(sys.kind)) {
        return derive_dominator_cycle(sys, g, rel);
    }
    return derive_dominated_cycle(sys, g, rel);
}

namespace {

bool is_zero(const Term& t)
{
    return t.base == 0 && t.word.empty();
}

std::string check_step(const DerivationTrace& trace, const Step& s, const std::vector<const Fact*>& premises)
{
    const Fact& out = s.fact;
    switch (s.rule) {
    case StepRule::Group: {
        if (premises.size() == 1) {
            const Fact& p = *premises[0];
            if (p.rel != Rel::Equal || p.lhs.base == 0 || p.lhs.base != p.rhs.base) {
                return "cancellation needs a^u + x = a^u + y";
            }
            if (out != Fact{Term{0, p.lhs.word}, Rel::Equal, Term{0, p.rhs.word}, {}}) {
                return "cancellation result does not match";
            }
            return {};
        }
        if (premises.size() != 2) {
            return "substitution takes an equation and a target";
        }
        const Fact& eq = *premises[0];
        const Fact& target = *premises[1];
        if (eq.rel != Rel::Equal || !eq.lhs.word.empty() || eq.lhs.base == 0 || !eq.some_of.empty()) {
            return "substitution needs an equation a^i = ...";
        }
        for (bool rhs_side : {false, true}) {
            const Term& t = rhs_side ? target.rhs : target.lhs;
            if (t.base != eq.lhs.base) {
                continue;
            }
            Fact expect = target;
            (rhs_side ? expect.rhs : expect.lhs) = Term{eq.rhs.base, concat(eq.rhs.word, t.word)};
            if (expect == out) {
                return {};
            }
        }
        return "substitution result does not match";
    }
    case StepRule::P1: {
        if (premises.size() != 2) {
            return "P1 takes two comparisons";
        }
        const Fact& x = *premises[0];
        const Fact& y = *premises[1];
        if (x.lhs == y.lhs && x.rhs == y.rhs) {
            return "P1 premises coincide";
        }
        if (x.rhs != y.lhs || !x.some_of.empty() || !y.some_of.empty()) {
            return "P1 premises do not chain";
        }
        if (out != Fact{x.lhs, chain(x.rel, y.rel), y.rhs, {}}) {
            return "P1 result does not match";
        }
        return {};
    }
    case StepRule::P3: {
        if (premises.size() != 1) {
            return "P3 takes one comparison";
        }
        const Fact& p = *premises[0];
        if (out.rel != p.rel || !p.some_of.empty() || !out.some_of.empty()) {
            return "P3 must keep the relation";
        }
        if (out.lhs.base == 0 && out.rhs.base == 0 && p.lhs.base != 0 && p.lhs.base == p.rhs.base &&
            out.lhs.word == p.lhs.word && out.rhs.word == p.rhs.word) {
            return {};
        }
        if (out.lhs.base != p.lhs.base || out.rhs.base != p.rhs.base ||
            out.lhs.word.size() < p.lhs.word.size() || out.rhs.word.size() < p.rhs.word.size()) {
            return "P3 result does not match";
        }
        auto suffix = [](const Term& t, std::size_t from) {
            return std::vector<std::size_t>(t.word.begin() + static_cast<long>(from), t.word.end());
        };
        const auto w = suffix(out.lhs, p.lhs.word.size());
        if (w.empty() || suffix(out.rhs, p.rhs.word.size()) != w ||
            !std::equal(p.lhs.word.begin(), p.lhs.word.end(), out.lhs.word.begin()) ||
            !std::equal(p.rhs.word.begin(), p.rhs.word.end(), out.rhs.word.begin())) {
            return "P3 translation does not match";
        }
        return {};
    }
    case StepRule::P4:
    case StepRule::P5: {
        if (premises.size() != 1) {
            return "P4/P5 take one fact";
        }
        const Fact& p = *premises[0];
        const bool p4 = s.rule == StepRule::P4;
        const Term* w = nullptr;
        if (p4 && is_zero(p.rhs) && p.lhs.base == 0) {
            w = &p.lhs;
        } else if (!p4 && is_zero(p.lhs) && p.rhs.base == 0) {
            w = &p.rhs;
        } else if (p.rel == Rel::Equal && is_zero(p.lhs) && p.rhs.base == 0) {
            w = &p.rhs;
        } else if (p.rel == Rel::Equal && is_zero(p.rhs) && p.lhs.base == 0) {
            w = &p.lhs;
        }
        if (!w || w->word.empty() || !p.some_of.empty()) {
            return "P4/P5 need a multiple of b compared with 0_G";
        }
        const auto letters = distinct_letters(w->word);
        const Term single{0, {letters.front()}};
        Fact expect;
        expect.rel = p.rel == Rel::Strict ? Rel::Strict : Rel::Weak;
        expect.lhs = p4 ? single : Term{};
        expect.rhs = p4 ? Term{} : single;
        if (letters.size() > 1) {
            expect.some_of = letters;
        }
        if (out != expect) {
            return "P4/P5 result does not match";
        }
        return {};
    }
    }
    (void)trace;
    return "unknown rule";
}

} // namespace

ReplayResult replay(const DerivationTrace& trace, const GroupContext& g, const RelationOracle* rel)
{
    auto fail = [](std::string why) { return ReplayResult{false, std::move(why)}; };
    if (trace.steps.empty()) {
        return fail("trace has no steps");
    }
    std::vector<std::optional<bool>> truth;
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const Step& s = trace.steps[i];
        std::vector<const Fact*> premises;
        bool premises_true = true;
        for (long ref : s.premises) {
            if (ref < 0) {
                const auto h = static_cast<std::size_t>(-ref - 1);
                if (h >= trace.hypotheses.size()) {
                    return fail("step " + std::to_string(i + 1) + " cites a missing hypothesis");
                }
                premises.push_back(&trace.hypotheses[h].fact);
                const auto t = concrete_truth(trace.hypotheses[h].fact, trace.points, trace.bs, g, rel);
                premises_true = premises_true && t.value_or(false);
            } else {
                const auto at = static_cast<std::size_t>(ref);
                if (at >= i) {
                    return fail("step " + std::to_string(i + 1) + " cites a later step");
                }
                premises.push_back(&trace.steps[at].fact);
                premises_true = premises_true && truth[at].value_or(false);
            }
        }
        if (auto why = check_step(trace, s, premises); !why.empty()) {
            return fail("step " + std::to_string(i + 1) + " (" + to_string(s.rule) + "): " + why);
        }
        std::optional<bool> t;
        try {
            t = concrete_truth(s.fact, trace.points, trace.bs, g, rel);
        } catch (const Error& e) {
            return fail("step " + std::to_string(i + 1) + " does not evaluate: " + e.what());
        }
        const bool checkable = s.rule == StepRule::Group || s.rule == StepRule::P1 || s.rule == StepRule::P3;
        if (checkable && premises_true && t && !*t) {
            return fail("step " + std::to_string(i + 1) + " is false on the concrete points although its premises hold");
        }
        truth.push_back(t);
    }
    const Fact& last = trace.steps.back().fact;
    if (trace.conclusion != last) {
        return fail("conclusion differs from the last step");
    }
    const bool dominating = trace.kind == SystemKind::S0 || trace.kind == SystemKind::S1 ||
                            trace.kind == SystemKind::S2 || trace.kind == SystemKind::S3;
    const Term& b_side = dominating ? last.lhs : last.rhs;
    const Term& zero_side = dominating ? last.rhs : last.lhs;
    if (!is_zero(zero_side) || b_side.base != 0 || b_side.word.size() != 1) {
        return fail("conclusion must compare a single b with 0_G");
    }
    return {true, {}};
}

ComponentBounds component_bounds(const SystemInstance& sys)
{
    validate_system(sys);
    if (sys.kind != SystemKind::S4 && sys.kind != SystemKind::Mixed) {
        malformed("component bounds take S4 or MIXED rows");
    }
    const std::size_t q = sys.bs.front().size();
    ComponentBounds out;
    out.joint.assign(q, std::numeric_limits<Coord>::max());
    for (const auto& r : sys.rows) {
        if (r.relation != Rel::Strict) {
            continue;
        }
        const auto& hi = sys.points[r.left - 1];
        const auto& lo = sys.points[r.right - 1];
        std::vector<Coord> bound(q);
        std::string text;
        for (std::size_t c = 0; c < q; ++c) {
            bound[c] = hi[c] - lo[c];
            out.joint[c] = std::min(out.joint[c], bound[c]);
            const std::string var = "b" + std::to_string(c + 1);
            text += (c ? " and " : "") +
                    (bound[c] < 0 ? var + " < " + std::to_string(bound[c] + 1) : var + " <= " + std::to_string(bound[c]));
        }
        out.per_row.push_back(std::move(bound));
        out.statements.push_back(std::move(text));
    }
    return out;
}

namespace {

std::optional<std::size_t> index_in(const std::vector<GroupElement>& pts, const GroupElement& x)
{
    auto it = std::find(pts.begin(), pts.end(), x);
    if (it == pts.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - pts.begin()) + 1;
}

} // namespace

BridgeResult build_bridge(const FiniteSet& a, const FiniteSet& b, const GroupContext& g, const RelationOracle& rel,
                          bool rule_t9)
{
    const GroupElement zero = g.identity();
    SystemInstance sys;
    for (const auto& x : b) {
        if (x != zero) {
            sys.bs.push_back(x);
        }
    }
    if (sys.bs.empty()) {
        throw PreconditionError("bridge needs some b != 0_G");
    }
    const std::size_t m = sys.bs.size();

    if (!rule_t9) {
        if (b.contains(zero)) {
            throw PreconditionError("T7/T8 bridges need 0_G outside B");
        }
        const auto part = efficient_set(a, rel);
        sys.points = part.efficient.elements();
        sys.points.insert(sys.points.end(), part.dominated.begin(), part.dominated.end());
        const std::size_t n = sys.points.size();
        const std::size_t k = part.efficient.size();
        for (std::size_t i = 1; i <= k; ++i) {
            SystemRow row{Rel::Equal, i, i, 1};
            bool found = false;
            for (std::size_t j = 1; j <= n && !found; ++j) {
                for (std::size_t s = 1; s <= m && !found; ++s) {
                    if (g.combine(sys.points[j - 1], sys.bs[s - 1]) == sys.points[i - 1]) {
                        row.right = j;
                        row.b = s;
                        found = true;
                    }
                }
            }
            sys.rows.push_back(row);
        }
        if (k == n) {
            sys.kind = m == 1 ? SystemKind::S0 : SystemKind::S3;
        } else {
            sys.kind = m == 1 ? SystemKind::S1 : SystemKind::S2;
            sys.k = k;
            const auto witness = white_witness(a, rel);
            for (std::size_t j = k + 1; j <= n; ++j) {
                const std::size_t left = *index_in(sys.points, witness.at(sys.points[j - 1]));
                sys.rows.push_back({Rel::Strict, left, j, 1});
            }
        }
    } else {
        if (!b.contains(zero)) {
            throw PreconditionError("T9/T10 bridges need 0_G in B");
        }
        sys.kind = SystemKind::Mixed;
        sys.points = a.elements();
        const std::size_t n = sys.points.size();
        for (std::size_t j = 1; j <= n; ++j) {
            for (std::size_t l = 1; l <= m; ++l) {
                const GroupElement shifted = g.combine(sys.points[j - 1], sys.bs[l - 1]);
                if (auto i = index_in(sys.points, shifted)) {
                    sys.rows.push_back({Rel::Equal, *i, j, l});
                    continue;
                }
                sys.outside_pairs.emplace_back(j, l);
                std::optional<std::size_t> left;
                for (std::size_t i = 1; i <= n && !left; ++i) {
                    if (i != j && rel.strictly(sys.points[i - 1], shifted)) {
                        left = i;
                    }
                }
                if (!left) {
                    left = (j == 1 && n > 1) ? 2 : 1;
                }
                sys.rows.push_back({Rel::Strict, *left, j, l});
            }
        }
    }

    BridgeResult out;
    out.system = sys;
    out.trace = derive(sys, g, &rel);
    out.replayed = replay(out.trace, g, &rel).ok;
    out.refuted = std::any_of(out.trace.hypotheses.begin(), out.trace.hypotheses.end(),
                              [](const Hypothesis& h) { return h.concrete == false; });
    return out;
}

} // namespace effsum
