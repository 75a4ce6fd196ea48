#include "doctest.h"
#include "helpers.hpp"

using namespace t;

namespace {

SystemRow eq(std::size_t l, std::size_t r, std::size_t b = 1) { return {Rel::Equal, l, r, b}; }
SystemRow st(std::size_t l, std::size_t r, std::size_t b = 1) { return {Rel::Strict, l, r, b}; }

std::vector<std::string> step_lines(const DerivationTrace& tr)
{
    std::vector<std::string> out;
    for (const auto& s : tr.steps) {
        out.push_back(render(s.fact, tr.bs.size()));
    }
    return out;
}

bool contains(const std::vector<std::string>& xs, const std::string& x)
{
    return std::find(xs.begin(), xs.end(), x) != xs.end();
}

SystemInstance example4(bool variant5)
{
    SystemInstance s;
    s.kind = SystemKind::S1;
    s.points = {v(2, -2), v(1, -1), v(1, 4), v(0, 0), v(0, 5)};
    s.bs = {v(1, -1)};
    s.k = 3;
    s.rows = {eq(1, 2), eq(2, 4), eq(3, 5), st(variant5 ? 2 : 3, 4), st(1, 5)};
    return s;
}

const GroupContext z2 = GroupContext::int_vec(2);
const RelationOracle po = RelationOracle::product_order();

} // namespace

TEST_CASE("find_index_cycle")
{
    CHECK(find_index_cycle({3, {2, 3, 1}}, 1).indices == std::vector<std::size_t>{1, 2, 3});
    CHECK(find_index_cycle({3, {2, 3, 1}}, 1).length == 3);
    CHECK(find_index_cycle({4, {1, 1, 1, 1}}, 3).indices == std::vector<std::size_t>{1});
    const auto c = find_index_cycle({5, {2, 3, 2, 5, 4}}, 1);
    CHECK(c.indices == std::vector<std::size_t>{2, 3});
    CHECK(c.length == 2);
}

TEST_CASE("equation cycle S0")
{
    SystemInstance s;
    s.kind = SystemKind::S0;
    s.points = {v(0, 0), v(1, 1), v(2, 2)};
    s.bs = {v(1, -1)};
    s.rows = {eq(1, 2), eq(2, 3), eq(3, 1)};
    const auto tr = derive_equation_cycle(s, z2, &po);
    const auto lines = step_lines(tr);
    CHECK(contains(lines, "0_G=(3b)"));
    CHECK(lines.back() == "bR0_G");
    CHECK(replay(tr, z2, &po).ok);

    SystemInstance self;
    self.kind = SystemKind::S0;
    self.points = {v(0, 0)};
    self.bs = {v(1, -1)};
    self.rows = {eq(1, 1)};
    const auto one = derive_equation_cycle(self, z2, &po);
    CHECK(contains(step_lines(one), "0_G=b"));
    CHECK(replay(one, z2, &po).ok);
}

TEST_CASE("equation cycle S3")
{
    SystemInstance s;
    s.kind = SystemKind::S3;
    s.points = {v(0, 0), v(1, 1)};
    s.bs = {v(1, -1), v(-1, 2)};
    s.rows = {eq(1, 2, 1), eq(2, 1, 2)};
    const auto tr = derive_equation_cycle(s, z2, &po);
    const auto lines = step_lines(tr);
    // a1 = a2 + b1 = a1 + b2 + b1, so the word keeps the substitution order.
    CHECK(contains(lines, "0_G=(b2+b1)"));
    CHECK(tr.conclusion.some_of == std::vector<std::size_t>{1, 2});
    CHECK(replay(tr, z2, &po).ok);
}

TEST_CASE("eliminate_representations")
{
    const auto e4 = eliminate_representations(example4(false), z2);
    REQUIRE(std::holds_alternative<std::vector<Representation>>(e4));
    const auto& reps = std::get<std::vector<Representation>>(e4);
    REQUIRE(reps.size() == 3);
    CHECK(reps[0].target == 4);
    CHECK(reps[0].multiplicities == std::vector<std::uint64_t>{2});
    CHECK(reps[1].target == 4);
    CHECK(reps[1].multiplicities == std::vector<std::uint64_t>{1});
    CHECK(reps[2].target == 5);
    CHECK(reps[2].multiplicities == std::vector<std::uint64_t>{1});
    for (const auto& r : reps) {
        CHECK(r.holds_concretely);
    }

    auto loop = example4(false);
    loop.rows[1] = eq(2, 1);
    const auto e = eliminate_representations(loop, z2);
    REQUIRE(std::holds_alternative<CycleWitness>(e));
    CHECK(std::get<CycleWitness>(e).indices == std::vector<std::size_t>{1, 2});

    SystemInstance e6;
    e6.kind = SystemKind::S1;
    e6.points = {v(1, -1), v(1, 4), v(4, -1), v(0, 0), v(0, 5), v(3, 0)};
    e6.bs = {v(1, -1)};
    e6.k = 3;
    e6.rows = {eq(1, 4), eq(2, 5), eq(3, 6), st(2, 4), st(3, 5), st(1, 6)};
    const auto r6 = std::get<std::vector<Representation>>(eliminate_representations(e6, z2));
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(r6[i].target == i + 4);
        CHECK(r6[i].multiplicities == std::vector<std::uint64_t>{1});
    }
}

TEST_CASE("dominator cycle on the worked examples")
{
    const auto tr4 = derive_dominator_cycle(example4(false), z2, &po);
    const auto l4 = step_lines(tr4);
    REQUIRE(l4.size() >= 2);
    CHECK(l4[l4.size() - 2] == "(3b)P0_G");
    CHECK(l4.back() == "bP0_G");
    CHECK(contains(l4, "(a4+3b)Pa4"));
    CHECK(replay(tr4, z2, &po).ok);

    const auto tr5 = derive_dominator_cycle(example4(true), z2, &po);
    const auto l5 = step_lines(tr5);
    CHECK(l5.back() == "bP0_G");
    CHECK(tr5.steps.back().rule == StepRule::P3);
    CHECK(replay(tr5, z2, &po).ok);
}

TEST_CASE("dominated cycle S4 and MIXED")
{
    SystemInstance s;
    s.kind = SystemKind::S4;
    s.points = {v(0, 0), v(5, 5)};
    s.bs = {v(1, -1)};
    s.rows = {st(2, 1), st(1, 2)};
    const auto tr = derive_dominated_cycle(s, z2, &po);
    const auto lines = step_lines(tr);
    REQUIRE(lines.size() >= 2);
    CHECK(lines[lines.size() - 2] == "0_GP(2b)");
    CHECK(lines.back() == "0_GPb");
    CHECK(replay(tr, z2, &po).ok);

    SystemInstance m = s;
    m.kind = SystemKind::Mixed;
    m.rows = {st(2, 1), eq(1, 2)};
    const auto mt = derive_dominated_cycle(m, z2, &po);
    const auto ml = step_lines(mt);
    CHECK(ml[ml.size() - 2] == "0_GP(2b)");
    CHECK(ml.back() == "0_GPb");
    const auto text = serialize(mt);
    CHECK(text.find("a1=(a2+b)") != std::string::npos);
    CHECK(text.find("a2P(a1+b)") != std::string::npos);
    CHECK(replay(mt, z2, &po).ok);

    m.rows = {eq(2, 1), eq(1, 2)};
    const auto me = derive_dominated_cycle(m, z2, &po);
    CHECK(step_lines(me).back() == "0_GRb");
}

TEST_CASE("project_s5")
{
    SystemInstance s;
    s.kind = SystemKind::S5;
    s.points = {v(0, 0), v(5, 5)};
    s.bs = {v(1, -1), v(-1, 1)};
    s.rows = {st(2, 1, 1), st(1, 1, 2), st(1, 2, 1), st(2, 2, 2)};
    CHECK_THROWS_AS(validate_system(s), MalformedSystem);
    s.rows = {st(2, 1, 1), st(2, 1, 2), st(1, 2, 1), st(1, 2, 2)};
    const auto p = project_s5(s, 2);
    CHECK(p.kind == SystemKind::S4);
    REQUIRE(p.rows.size() == 2);
    CHECK(p.rows[0].left == 2);
    CHECK(p.rows[1].left == 1);
    CHECK_NOTHROW(validate_system(p));
    CHECK_NOTHROW(validate_system(project_s5(s, s.bs.size())));
    CHECK_THROWS_AS(project_s5(s, 0), IndexOutOfRange);
    CHECK_THROWS_AS(project_s5(s, 3), IndexOutOfRange);
}

TEST_CASE("Example 7 component bounds")
{
    SystemInstance s;
    s.kind = SystemKind::S4;
    s.points = {v(-1, 0), v(0, -1)};
    s.bs = {v(-1, 1)};
    s.rows = {st(2, 1), st(1, 2)};
    const auto cb = component_bounds(s);
    REQUIRE(cb.statements.size() >= 2);
    CHECK(cb.statements[0] == "b1 <= 1 and b2 < 0");
    CHECK(cb.statements[1] == "b1 < 0 and b2 <= 1");
    CHECK(cb.joint == std::vector<Coord>{-1, -1});
}

TEST_CASE("malformed systems")
{
    SystemInstance s = example4(false);
    s.rows[3] = st(4, 4);
    CHECK_THROWS_AS(validate_system(s), MalformedSystem);
    s = example4(false);
    s.k = 5;
    CHECK_THROWS_AS(validate_system(s), MalformedSystem);
    s = example4(false);
    s.rows[0] = eq(1, 9);
    CHECK_THROWS_AS(validate_system(s), MalformedSystem);
}

TEST_CASE("replay rejects a tampered trace")
{
    auto tr = derive_dominator_cycle(example4(false), z2, &po);
    tr.steps.back().fact.rel = Rel::Equal;
    CHECK_FALSE(replay(tr, z2, &po).ok);
    auto tr2 = derive_dominator_cycle(example4(false), z2, &po);
    tr2.steps[1].premises = {static_cast<long>(tr2.steps.size())};
    CHECK_FALSE(replay(tr2, z2, &po).ok);
}

TEST_CASE("bridges refute the instance data")
{
    const auto t9 = build_bridge(vs({{-1, 0}, {0, -1}}), vs({{0, 0}, {-1, 1}}), z2, po, true);
    CHECK(t9.replayed);
    CHECK(t9.refuted);
    std::vector<GroupElement> line;
    for (Coord x = -3; x <= 3; ++x) {
        line.push_back(v(x, -2 * x));
    }
    const auto t8 = build_bridge(FiniteSet(line), vs({{-1, 2}, {-1, 1}}), z2, po, false);
    CHECK(t8.replayed);
    CHECK(t8.refuted);
}
