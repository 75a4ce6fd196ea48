// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any failure.

#include "effsum/cli.hpp"
#include "effsum/generator.hpp"
#include "effsum/parallel.hpp"

#include <array>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>

using namespace effsum;

namespace {

using Clock = std::chrono::steady_clock;

struct Result {
    bool pass = true;
    std::string detail;
    std::vector<std::string> failures;
};

// Thread-safe collection of the first few failure messages.
class Failures {
public:
    void add(std::string msg)
    {
        std::lock_guard lock(mutex_);
        ++count_;
        if (messages_.size() < 5) {
            messages_.push_back(std::move(msg));
        }
    }
    [[nodiscard]] std::size_t count() const { return count_; }
    void into(Result& out) const
    {
        out.pass = out.pass && count_ == 0;
        out.failures.insert(out.failures.end(), messages_.begin(), messages_.end());
    }

private:
    std::mutex mutex_;
    std::atomic<std::size_t> count_{0};
    std::vector<std::string> messages_;
};

std::atomic<std::size_t> traces_checked{0};
std::atomic<std::size_t> traces_failed{0};

bool check_trace(const DerivationTrace& trace, const GroupContext& g, const RelationOracle* rel, Failures& fails,
                 const std::string& where)
{
    ++traces_checked;
    const auto r = replay(trace, g, rel);
    if (!r.ok) {
        ++traces_failed;
        fails.add(where + ": replay failed: " + r.error);
    }
    return r.ok;
}

GroupElement random_point(Rng& rng, std::size_t q, Coord radius)
{
    GroupElement::Storage s;
    for (std::size_t i = 0; i < q; ++i) {
        s.push_back(rng.between(-radius, radius));
    }
    return GroupElement(std::move(s));
}

FiniteSet random_set(Rng& rng, std::size_t size, std::size_t q, Coord radius)
{
    std::vector<GroupElement> out;
    for (std::size_t i = 0; i < size; ++i) {
        out.push_back(random_point(rng, q, radius));
    }
    return FiniteSet(std::move(out));
}

AuditConfig sweep_audit()
{
    AuditConfig c;
    c.depth = 1;
    c.cap = 2000;
    c.budget = 5000;
    return c;
}

// 1 and the bridge half of 6.
Result soundness_sweep(Failures& bridge_fails, std::size_t& bridges)
{
    constexpr Family families[] = {Family::OrthantHolds, Family::DominatingFails, Family::DominatedFails,
                                   Family::IncomparableFails, Family::WithZeroIncomparable};
    constexpr std::size_t total = 10000;
    const auto start = Clock::now();
    Failures fails;
    std::atomic<std::size_t> fired{0};
    std::atomic<std::size_t> bridge_count{0};
    std::vector<std::array<std::size_t, 11>> per_rule(total);
    parallel_for(total, [&](std::size_t i) {
        const Family family = families[i % 5];
        Rng rng(1000003 + i);
        GenSizes sizes;
        sizes.dimension = (i / 5) % 2 == 0 ? 2 : 3;
        sizes.a_size = static_cast<std::size_t>(rng.between(1, 12));
        sizes.b_size = static_cast<std::size_t>(rng.between(family == Family::WithZeroIncomparable ? 2 : 1, 6));
        sizes.radius = 5;
        const Instance inst = generate_instance(i + 1, family, sizes);
        const auto report = audit_all(inst.a, inst.b, inst.group, inst.relation, sweep_audit());
        const auto theorem = theorem_verdict(inst.a, inst.b, inst.group, inst.relation, report);
        per_rule[i].fill(0);
        per_rule[i][static_cast<std::size_t>(theorem.rule)] = 1;
        if (!is_licensed(theorem)) {
            return;
        }
        ++fired;
        const auto oracle = oracle_verdict(inst.a, inst.b, inst.group, inst.relation);
        if ((theorem.direction == Direction::Holds) != oracle.equality_holds) {
            fails.add(inst.name + ": " + to_string(theorem.rule) + " says " + to_string(theorem.direction) +
                      " but the oracle disagrees");
        }
        const Rule r = theorem.rule;
        if (r == Rule::T7 || r == Rule::T8 || r == Rule::T9 || r == Rule::T10) {
            ++bridge_count;
            const auto bridge =
                build_bridge(inst.a, inst.b, inst.group, inst.relation, r == Rule::T9 || r == Rule::T10);
            check_trace(bridge.trace, inst.group, &inst.relation, bridge_fails, inst.name + " bridge");
            if (!bridge.refuted) {
                bridge_fails.add(inst.name + ": bridge hypotheses all hold on the data");
            }
        }
    });
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    bridges = bridge_count;

    std::array<std::size_t, 11> rules{};
    for (const auto& row : per_rule) {
        for (std::size_t k = 0; k < rules.size(); ++k) {
            rules[k] += row[k];
        }
    }
    Result out;
    std::ostringstream d;
    d << total << " instances, " << fired << " licensed verdicts, " << fails.count() << " disagreements, "
      << std::fixed << std::setprecision(1) << seconds << " s; rules";
    for (std::size_t k = 0; k < rules.size(); ++k) {
        if (rules[k] > 0) {
            d << " " << to_string(static_cast<Rule>(k)) << "=" << rules[k];
        }
    }
    out.detail = d.str();
    fails.into(out);
    if (seconds >= 60.0) {
        out.pass = false;
        out.failures.push_back("runtime " + std::to_string(seconds) + " s is over 60 s");
    }
    return out;
}

// 2
Result white_suite()
{
    Failures fails;
    std::size_t accepted = 0;
    std::size_t generated = 0;
    for (std::uint64_t seed = 1; accepted < 1000; ++seed) {
        ++generated;
        const std::size_t n = 1 + seed % 8;
        const Instance inst = generate_table_instance(seed, n);
        const auto report = audit_all(inst.a, inst.b, inst.group, inst.relation);
        if (find_status(report, PropertyId::P1).outcome != Outcome::ProvenExhaustive ||
            find_status(report, PropertyId::Refl).outcome != Outcome::ProvenExhaustive) {
            continue;
        }
        ++accepted;
        for (const FiniteSet& s : {inst.a, inst.relation.carrier()}) {
            const auto part = efficient_set(s, inst.relation);
            if (part.efficient.empty()) {
                fails.add(inst.name + ": empty efficient set");
                continue;
            }
            const auto w = white_witness(s, inst.relation);
            for (const auto& x : s) {
                const auto it = w.find(x);
                if (it == w.end() || !part.efficient.contains(it->second) || !inst.relation.related(it->second, x) ||
                    (part.efficient.contains(x) && it->second != x)) {
                    fails.add(inst.name + ": witness postcondition fails at " + x.to_string());
                }
            }
        }
    }
    Result out;
    out.detail = std::to_string(accepted) + " transitive tables out of " + std::to_string(generated) + " generated";
    fails.into(out);
    return out;
}

// 3
Result lemma_suite()
{
    const auto z2 = GroupContext::int_vec(2);
    const auto po = RelationOracle::product_order();
    Failures fails;
    for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
        Rng rng(seed * 7919);
        const std::size_t q = seed % 2 == 0 ? 2 : 3;
        const auto g = GroupContext::int_vec(q);
        const FiniteSet raw = random_set(rng, static_cast<std::size_t>(rng.between(1, 12)), q, 5);
        const FiniteSet a = efficient_set(raw, po).efficient;
        const GroupElement b = random_point(rng, q, 5);
        if (!is_stable(a, po) || !is_stable(translate(a, b, g), po)) {
            fails.add("lemma 1 seed " + std::to_string(seed));
        }
    }

    std::vector<GroupElement> box;
    for (Coord x = -2; x <= 2; ++x) {
        for (Coord y = -2; y <= 2; ++y) {
            box.push_back({x, y});
        }
    }
    const GroupElement zero{0, 0};
    std::size_t subsets = 0;
    std::vector<std::size_t> idx;
    for (std::size_t k = 1; k <= 6; ++k) {
        idx.resize(k);
        for (std::size_t i = 0; i < k; ++i) {
            idx[i] = i;
        }
        while (true) {
            std::vector<GroupElement> pts;
            for (auto i : idx) {
                pts.push_back(box[i]);
            }
            const FiniteSet a(std::move(pts));
            ++subsets;
            for (const auto& b : box) {
                if ((translate(a, b, z2) == a) != (b == zero)) {
                    fails.add("lemma 2 fails for A = " + a[0].to_string() + "... and b = " + b.to_string());
                }
            }
            std::size_t pos = k;
            while (pos > 0 && idx[pos - 1] == box.size() - k + pos - 1) {
                --pos;
            }
            if (pos == 0) {
                break;
            }
            ++idx[pos - 1];
            for (std::size_t i = pos; i < k; ++i) {
                idx[i] = idx[i - 1] + 1;
            }
        }
    }
    Result out;
    out.detail = "lemma 1 on 1000 stable sets; lemma 2 on " + std::to_string(subsets) + " subsets x 25 translations";
    fails.into(out);
    return out;
}

bool valid_cycle(const IndexMap& map, std::size_t start, const CycleWitness& c)
{
    const auto r = c.indices.size();
    if (r == 0 || c.length != r) {
        return false;
    }
    for (std::size_t i = 0; i < r; ++i) {
        if (map.images[c.indices[i] - 1] != c.indices[(i + 1) % r]) {
            return false;
        }
        for (std::size_t j = i + 1; j < r; ++j) {
            if (c.indices[i] == c.indices[j]) {
                return false;
            }
        }
    }
    std::size_t x = start;
    for (std::size_t step = 0; step <= map.n; ++step) {
        if (x == c.indices[0]) {
            return true;
        }
        x = map.images[x - 1];
    }
    return false;
}

// 4
Result pigeonhole()
{
    Failures fails;
    std::size_t maps = 0;
    for (std::size_t n = 1; n <= 6; ++n) {
        IndexMap map{n, std::vector<std::size_t>(n, 1)};
        while (true) {
            ++maps;
            for (std::size_t s = 1; s <= n; ++s) {
                if (!valid_cycle(map, s, find_index_cycle(map, s))) {
                    fails.add("n=" + std::to_string(n) + " start " + std::to_string(s));
                }
            }
            std::size_t pos = 0;
            while (pos < n && map.images[pos] == n) {
                map.images[pos] = 1;
                ++pos;
            }
            if (pos == n) {
                break;
            }
            ++map.images[pos];
        }
    }
    Result out;
    out.detail = std::to_string(maps) + " maps, every start point";
    fails.into(out);
    return out;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string cli_output(std::vector<std::string> args, int& code)
{
    std::ostringstream out;
    std::ostringstream err;
    code = run_cli(args, out, err);
    return out.str();
}

std::vector<std::string> fact_lines(const DerivationTrace& t)
{
    std::vector<std::string> out;
    for (const auto& s : t.steps) {
        out.push_back(render(s.fact, t.bs.size()));
    }
    return out;
}

// 5 and the fixture half of 6.
Result fixture_goldens(Failures& trace_fails)
{
    const std::string root = EFFSUM_FIXTURES;
    Failures fails;
    struct Expect {
        const char* name;
        Rule rule;
        Direction direction;
    };
    const Expect expects[] = {
        {"s3_transpositions", Rule::TrivialEqual, Direction::Holds},
        {"zmod5_identity", Rule::TrivialEqual, Direction::Holds},
        {"yu_ehrgott_orthant", Rule::T2, Direction::Holds},
        {"example7_incomparable", Rule::T9, Direction::Fails},
        {"truncated_line", Rule::T8, Direction::Fails},
        {"truncated_powerset", Rule::TrivialEqual, Direction::Holds},
    };
    std::size_t goldens = 0;
    for (const auto& e : expects) {
        const Instance inst = parse_instance(root + "/" + e.name + "/instance.json");
        const auto v = combined_verdict(inst.a, inst.b, inst.group, inst.relation, inst.audit, inst.b_list);
        if (v.theorem.rule != e.rule || v.theorem.direction != e.direction || !v.consistent) {
            fails.add(std::string(e.name) + ": got " + to_string(v.theorem.rule) + " " +
                      to_string(v.theorem.direction));
        }
        const std::string name = e.name;
        if (name == "zmod5_identity") {
            const auto& p4 = find_status(v.properties, PropertyId::P4);
            if (p4.outcome != Outcome::Violated || !p4.witness || p4.witness->multiplicities != std::vector<std::uint64_t>{5}) {
                fails.add("zmod5_identity: P4 is not Violated at p = 5");
            }
        }
        if (name == "truncated_line") {
            const GroupElement edge{-4, 8};
            if (!v.oracle.efficient_sum.contains(edge) || v.oracle.efficient_A.contains(edge)) {
                fails.add("truncated_line: edge point (-4,8) missing from E(A+B)");
            }
        }
        if (name == "truncated_powerset") {
            if (find_status(v.properties, PropertyId::P3).outcome != Outcome::Violated ||
                find_status(v.properties, PropertyId::P5).outcome != Outcome::Violated) {
                fails.add("truncated_powerset: P3 and P5 should be Violated");
            }
        }
    }

    for (const auto& entry : std::filesystem::directory_iterator(root)) {
        const std::string dir = entry.path().string();
        int code = 0;
        const std::string report = cli_output({"verdict", dir + "/instance.json", "--json"}, code);
        ++goldens;
        if (code != 0 || report != read_file(dir + "/report.golden")) {
            fails.add(entry.path().filename().string() + ": report differs from golden");
        }
        if (std::filesystem::exists(dir + "/trace.golden")) {
            ++goldens;
            const std::string trace = cli_output({"trace", dir + "/instance.json"}, code);
            if (code != 0 || trace != read_file(dir + "/trace.golden")) {
                fails.add(entry.path().filename().string() + ": trace differs from golden");
            }
        }
    }

    const auto z2 = GroupContext::int_vec(2);
    const auto po = RelationOracle::product_order();
    auto system_trace = [&](const std::string& name) {
        const Instance inst = parse_instance(root + "/" + name + "/instance.json");
        auto t = derive(*inst.system, inst.group, &inst.relation);
        check_trace(t, inst.group, &inst.relation, trace_fails, name);
        return fact_lines(t);
    };
    const auto l4 = system_trace("example4_system");
    if (l4.size() < 2 || l4[l4.size() - 2] != "(3b)P0_G" || l4.back() != "bP0_G") {
        fails.add("example4_system: trace does not end (3b)P0_G => bP0_G");
    }
    const auto l5 = system_trace("example5_system");
    if (l5.empty() || l5.back() != "bP0_G") {
        fails.add("example5_system: trace does not end bP0_G");
    }
    const auto l6 = system_trace("example6_system");
    if (std::find(l6.begin(), l6.end(), "(a4+3b)Pa4") == l6.end()) {
        fails.add("example6_system: trace lacks (a4+3b)Pa4");
    }
    for (const char* name : {"example7_incomparable", "truncated_line"}) {
        const Instance inst = parse_instance(root + "/" + name + "/instance.json");
        const auto b = build_bridge(inst.a, inst.b, inst.group, inst.relation, std::string(name) == "example7_incomparable");
        check_trace(b.trace, z2, &po, trace_fails, name);
    }

    Result out;
    out.detail = std::to_string(goldens) + " golden files, 6 verdict expectations, 3 worked traces";
    fails.into(out);
    return out;
}

SystemRow row(Rel r, std::size_t l, std::size_t rt, std::size_t b) { return {r, l, rt, b}; }

// Random well-formed systems of every kind, derived and replayed.
std::size_t random_system_traces(Failures& fails)
{
    const auto z2 = GroupContext::int_vec(2);
    const auto po = RelationOracle::product_order();
    constexpr SystemKind kinds[] = {SystemKind::S0, SystemKind::S1, SystemKind::S2, SystemKind::S3,
                                    SystemKind::S4, SystemKind::S5, SystemKind::Mixed};
    std::size_t made = 0;
    for (std::uint64_t seed = 1; seed <= 700; ++seed) {
        Rng rng(seed * 104729);
        SystemInstance s;
        s.kind = kinds[seed % 7];
        const std::size_t n = static_cast<std::size_t>(rng.between(s.kind == SystemKind::S1 || s.kind == SystemKind::S2 ? 2 : 1, 7));
        const bool multi = s.kind == SystemKind::S2 || s.kind == SystemKind::S3 || s.kind == SystemKind::S5 ||
                           s.kind == SystemKind::Mixed;
        const std::size_t m = multi ? static_cast<std::size_t>(rng.between(1, 3)) : 1;
        for (std::size_t i = 0; i < n; ++i) {
            s.points.push_back(random_point(rng, 2, 5));
        }
        for (std::size_t l = 0; l < m; ++l) {
            s.bs.push_back(random_point(rng, 2, 3));
        }
        auto pick = [&](std::size_t hi) { return static_cast<std::size_t>(rng.between(1, static_cast<Coord>(hi))); };
        switch (s.kind) {
        case SystemKind::S0:
        case SystemKind::S3:
            for (std::size_t i = 1; i <= n; ++i) {
                s.rows.push_back(row(Rel::Equal, i, pick(n), pick(m)));
            }
            break;
        case SystemKind::S1:
        case SystemKind::S2:
            s.k = pick(n - 1);
            for (std::size_t i = 1; i <= s.k; ++i) {
                s.rows.push_back(row(Rel::Equal, i, pick(n), pick(m)));
            }
            for (std::size_t j = s.k + 1; j <= n; ++j) {
                s.rows.push_back(row(Rel::Strict, pick(s.k), j, 1));
            }
            break;
        case SystemKind::S4:
        case SystemKind::S5:
            if (n == 1) {
                s.points.push_back(random_point(rng, 2, 5));
            }
            for (std::size_t j = 1; j <= s.points.size(); ++j) {
                for (std::size_t l = 1; l <= m; ++l) {
                    std::size_t left = pick(s.points.size() - 1);
                    if (left >= j) {
                        ++left;
                    }
                    s.rows.push_back(row(Rel::Strict, left, j, l));
                }
            }
            break;
        case SystemKind::Mixed:
            for (std::size_t j = 1; j <= n; ++j) {
                for (std::size_t l = 1; l <= m; ++l) {
                    s.rows.push_back(row(rng.chance(1, 2) ? Rel::Strict : Rel::Equal, pick(n), j, l));
                }
            }
            break;
        }
        try {
            validate_system(s);
        } catch (const MalformedSystem& e) {
            fails.add("generated system " + std::to_string(seed) + " malformed: " + e.what());
            continue;
        }
        ++made;
        check_trace(derive(s, z2, &po), z2, &po, fails, "random " + to_string(s.kind) + " system " + std::to_string(seed));
    }
    return made;
}

// 7
Result algebra_laws()
{
    const auto po = RelationOracle::product_order();
    Failures fails;
    for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
        Rng rng(seed * 31337);
        const std::size_t q = static_cast<std::size_t>(rng.between(1, 4));
        const auto g = GroupContext::int_vec(q);
        const auto a = random_set(rng, static_cast<std::size_t>(rng.between(1, 10)), q, 6);
        const auto b = random_set(rng, static_cast<std::size_t>(rng.between(1, 5)), q, 6);
        const auto c = random_set(rng, static_cast<std::size_t>(rng.between(1, 5)), q, 6);
        const GroupElement x = random_point(rng, q, 6);
        const std::string tag = " (seed " + std::to_string(seed) + ")";
        if (minkowski_sum(a, FiniteSet{g.identity()}, g) != a) {
            fails.add("identity summand" + tag);
        }
        if (minkowski_sum(minkowski_sum(a, b, g), c, g) != minkowski_sum(a, minkowski_sum(b, c, g), g)) {
            fails.add("associativity" + tag);
        }
        if (translate(a, x, g).size() != a.size()) {
            fails.add("|A+{b}| = |A|" + tag);
        }
        const auto e = efficient_set(a, po).efficient;
        if (efficient_set(e, po).efficient != e) {
            fails.add("E-idempotence" + tag);
        }
    }
    // The same laws in a non-abelian group.
    const auto s4 = GroupContext::permutations(4);
    const auto all = s4.enumerate();
    const auto fp = RelationOracle::fixed_points();
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        Rng rng(seed * 65537);
        auto pick_set = [&](std::size_t size) {
            std::vector<GroupElement> out;
            for (std::size_t i = 0; i < size; ++i) {
                out.push_back(all[static_cast<std::size_t>(rng.between(0, 23))]);
            }
            return FiniteSet(std::move(out));
        };
        const auto a = pick_set(6);
        const auto b = pick_set(3);
        const auto c = pick_set(3);
        if (minkowski_sum(minkowski_sum(a, b, s4), c, s4) != minkowski_sum(a, minkowski_sum(b, c, s4), s4) ||
            translate(a, b[0], s4).size() != a.size() ||
            efficient_set(efficient_set(a, fp).efficient, fp).efficient != efficient_set(a, fp).efficient) {
            fails.add("S4 law (seed " + std::to_string(seed) + ")");
        }
    }
    Result out;
    out.detail = "4 laws on 1000 IntVec instances each, plus 200 S4 instances";
    fails.into(out);
    return out;
}

// 8
Result multi_summand()
{
    const auto po = RelationOracle::product_order();
    Failures fails;
    AuditConfig config = sweep_audit();
    for (std::uint64_t seed = 1; seed <= 500; ++seed) {
        Rng rng(seed * 2654435761ULL);
        const std::size_t q = seed % 2 == 0 ? 2 : 3;
        const auto g = GroupContext::int_vec(q);
        const auto a = random_set(rng, static_cast<std::size_t>(rng.between(1, 8)), q, 5);
        std::vector<FiniteSet> list;
        const auto count = rng.between(2, 4);
        for (Coord i = 0; i < count; ++i) {
            std::vector<GroupElement> pts{g.identity()};
            const auto extra = rng.between(0, 2);
            for (Coord k = 0; k < extra; ++k) {
                GroupElement::Storage s;
                for (std::size_t c = 0; c < q; ++c) {
                    s.push_back(-rng.between(0, 3));
                }
                pts.emplace_back(std::move(s));
            }
            list.emplace_back(std::move(pts));
        }
        const FiniteSet b = effective_summand(FiniteSet{}, list, g);
        const auto v = combined_verdict(a, b, g, po, config, list);
        if (v.theorem.direction != Direction::Holds || !is_licensed(v.theorem) || !v.oracle.equality_holds ||
            !v.consistent) {
            fails.add("seed " + std::to_string(seed) + ": " + to_string(v.theorem.rule) + " " +
                      to_string(v.theorem.direction));
        }
        const auto stepwise = minkowski_sum_many(a, list, g);
        if (efficient_set(stepwise, po).efficient != efficient_set(a, po).efficient) {
            fails.add("seed " + std::to_string(seed) + ": stepwise sums disagree");
        }
    }
    Result out;
    out.detail = "500 instances with 2-4 summands";
    fails.into(out);
    return out;
}

void print(int id, const std::string& title, const Result& o)
{
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << id << "  " << title << ": " << o.detail << "\n";
    for (const auto& f : o.failures) {
        std::cout << "        " << f << "\n";
    }
    std::cout.flush();
}

} // namespace

int main()
{
    bool all = true;
    auto report = [&](int id, const std::string& title, const Result& o) {
        print(id, title, o);
        all = all && o.pass;
    };

    Failures trace_fails;
    std::size_t bridges = 0;
    report(1, "soundness sweep", soundness_sweep(trace_fails, bridges));
    report(2, "White existence", white_suite());
    report(3, "lemmas 1 and 2", lemma_suite());
    report(4, "pigeonhole totality", pigeonhole());
    report(5, "fixture goldens", fixture_goldens(trace_fails));

    const std::size_t random_systems = random_system_traces(trace_fails);
    Result replayed;
    replayed.detail = std::to_string(traces_checked.load()) + " traces (" + std::to_string(bridges) +
                      " sweep bridges, " + std::to_string(random_systems) + " random systems), " +
                      std::to_string(traces_failed.load()) + " failed";
    trace_fails.into(replayed);
    report(6, "trace replay", replayed);

    report(7, "algebra and efficiency laws", algebra_laws());
    report(8, "multi-summand extension", multi_summand());
    return all ? 0 : 1;
}
