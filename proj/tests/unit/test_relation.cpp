#include "doctest.h"
#include "helpers.hpp"

using namespace t;

TEST_CASE("compare")
{
    const auto po = RelationOracle::product_order();
    CHECK(compare(v(1, 2), v(0, 2), po) == Comparison::StrictForward);
    CHECK(compare(v(0, 2), v(1, 2), po) == Comparison::StrictBackward);
    CHECK(compare(v(1, 0), v(0, 1), po) == Comparison::Incomparable);
    CHECK(compare(v(1, 0), v(1, 0), po) == Comparison::Equal);
    CHECK(compare({2, 1, 3}, {3, 2, 1}, RelationOracle::fixed_points()) == Comparison::EquivalentDistinct);
    CHECK(mirror(Comparison::StrictForward) == Comparison::StrictBackward);
}

TEST_CASE("efficient_set")
{
    const auto po = RelationOracle::product_order();
    const auto p = efficient_set(vs({{1, 0}, {0, 1}, {0, 0}}), po);
    CHECK(p.efficient == vs({{1, 0}, {0, 1}}));
    CHECK(p.dominated == vs({{0, 0}}));
    CHECK(efficient_set(FiniteSet{}, po).efficient.empty());
    const auto all = vs({{-1, 0}, {0, -1}, {-2, 1}});
    CHECK(efficient_set(all, po).efficient == all);
}

TEST_CASE("is_stable")
{
    const auto po = RelationOracle::product_order();
    CHECK(is_stable(vs({{1, 0}, {0, 1}}), po));
    CHECK_FALSE(is_stable(vs({{1, 0}, {0, 0}}), po));
    std::vector<GroupElement> line;
    for (Coord x = -3; x <= 3; ++x) {
        line.push_back(v(x, -2 * x));
    }
    CHECK(is_stable(FiniteSet(line), po));
}

TEST_CASE("white_witness")
{
    const auto po = RelationOracle::product_order();
    const auto w = white_witness(vs({{1, 0}, {0, 1}, {0, 0}}), po);
    CHECK(w.at(v(0, 0)) == v(0, 1));
    CHECK(w.at(v(1, 0)) == v(1, 0));
    CHECK(w.at(v(0, 1)) == v(0, 1));

    const auto single = white_witness(vs({{4, 4}}), po);
    CHECK(single.at(v(4, 4)) == v(4, 4));

    // 0 P 1 P 2 P 0 on Z/3: every point is dominated, so no chain ends.
    const auto z3 = GroupContext::cyclic(3);
    const auto cyc = RelationOracle::explicit_matrix(z3.enumerate(), {{1, 1, 0}, {0, 1, 1}, {1, 0, 1}});
    const FiniteSet carrier(z3.enumerate());
    CHECK(efficient_set(carrier, cyc).efficient.empty());
    CHECK_THROWS_AS(white_witness(carrier, cyc), ChainOverflow);
    CHECK_THROWS_AS(white_witness(carrier, cyc, true), NotApplicable);
}

TEST_CASE("declared properties")
{
    CHECK(RelationOracle::product_order().declares(PropertyId::P3));
    CHECK(RelationOracle::fixed_points().declares(PropertyId::P1));
    CHECK_FALSE(RelationOracle::fixed_points().declares(PropertyId::P2));
    CHECK(RelationOracle::equality().declares(PropertyId::P3));
    CHECK_FALSE(RelationOracle::superset().declares(PropertyId::P3));
}

TEST_CASE("explicit matrix must be reflexive")
{
    const auto z2 = GroupContext::cyclic(2);
    CHECK_THROWS_AS(RelationOracle::explicit_matrix(z2.enumerate(), {{0, 1}, {0, 1}}), ValidationError);
}
