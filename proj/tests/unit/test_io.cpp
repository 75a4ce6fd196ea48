#include "doctest.h"
#include "helpers.hpp"

#include "effsum/generator.hpp"

using namespace t;

TEST_CASE("parse a well-formed instance")
{
    const auto inst = parse_instance_text(R"({"group": {"kind": "intvec", "dimension": 2},
        "relation": {"kind": "product_order"}, "A": [[1, 0], [0, 1]], "B": [[0, 0]]})");
    CHECK(inst.group.kind() == CarrierKind::IntVec);
    CHECK(inst.group.parameter() == 2);
    CHECK(inst.a.size() == 2);
}

TEST_CASE("parse errors")
{
    CHECK_THROWS_AS(parse_instance_text(R"({"group": {"kind": "perm", "n": 3},
        "relation": {"kind": "fixed_points"}, "A": [[1, 1, 3]], "B": [[1, 2, 3]]})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_instance_text("{not json"), ParseError);
    CHECK_THROWS_AS(parse_instance_text(R"({"relation": {"kind": "equality"}})"), ParseError);
    CHECK_THROWS_AS(parse_instance_text(R"({"group": {"kind": "intvec", "dimension": 2},
        "relation": {"kind": "product_order"}, "A": [[1, 0, 4]], "B": [[0, 0]]})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_instance_text(R"({"group": {"kind": "cyclic", "modulus": 3},
        "relation": {"kind": "product_order"}, "A": [1], "B": [0]})"),
                    ValidationError);
}

TEST_CASE("duplicates are dropped with a warning")
{
    const auto inst = parse_instance_text(R"({"group": {"kind": "cyclic", "modulus": 5},
        "relation": {"kind": "equality"}, "A": [1, 1, 2], "B": [0]})");
    CHECK(inst.a.size() == 2);
    REQUIRE(inst.warnings.size() == 1);
}

TEST_CASE("shipped Z/5 fixture")
{
    const auto inst = parse_instance(fixture("zmod5_identity"));
    CHECK(inst.a.size() == 5);
    CHECK(inst.b.size() == 1);
    CHECK(inst.name == "zmod5_identity");
}

TEST_CASE("instance round trip")
{
    for (const char* name : {"s3_transpositions", "truncated_powerset", "example4_system", "example7_incomparable"}) {
        const auto inst = parse_instance(fixture(name));
        const auto text = dump_instance(inst);
        const auto back = parse_instance_text(text);
        CHECK(back.a == inst.a);
        CHECK(back.b == inst.b);
        CHECK(back.system == inst.system);
        CHECK(dump_instance(back) == text);
    }
}

TEST_CASE("table group and explicit matrix round trip")
{
    const auto inst = generate_table_instance(11, 4);
    const auto back = parse_instance_text(dump_instance(inst));
    CHECK(back.group == inst.group);
    CHECK(back.relation.matrix() == inst.relation.matrix());
    CHECK(dump_instance(back) == dump_instance(inst));
}

TEST_CASE("report round trip")
{
    const auto inst = parse_instance(fixture("yu_ehrgott_orthant"));
    Report r;
    r.name = inst.name;
    r.group = inst.group.describe();
    r.relation = inst.relation.describe();
    r.verdict = combined_verdict(inst.a, inst.b, inst.group, inst.relation, inst.audit);
    const auto j = report_to_json(r, inst.group);
    const auto back = report_from_json(j, inst.group);
    CHECK(back == r);
    CHECK(report_to_json(back, inst.group) == j);
}

TEST_CASE("generator")
{
    const auto a = dump_instance(generate_instance(1, Family::OrthantHolds));
    const auto b = dump_instance(generate_instance(1, Family::OrthantHolds));
    CHECK(a == b);
    const auto inst = generate_instance(1, Family::OrthantHolds, {5, 3, 2, 5});
    const auto verdict = combined_verdict(inst.a, inst.b, inst.group, inst.relation, inst.audit);
    CHECK(verdict.theorem.rule == Rule::T2);
    CHECK(verdict.theorem.direction == Direction::Holds);
    CHECK(verdict.oracle.equality_holds);

    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto one = generate_instance(seed, Family::IncomparableFails, {4, 1, 2, 5});
        REQUIRE(one.b.size() == 1);
        const auto vals = one.b[0].values();
        CHECK(std::any_of(vals.begin(), vals.end(), [](Coord c) { return c > 0; }));
        CHECK(std::any_of(vals.begin(), vals.end(), [](Coord c) { return c < 0; }));
    }
    CHECK_THROWS_AS(generate_instance(1, Family::Random, {0, 3, 2, 5}), InvalidSizes);
    CHECK_THROWS_AS(family_from_string("nope"), ParseError);
}
