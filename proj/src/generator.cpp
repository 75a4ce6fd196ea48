#include "effsum/generator.hpp"

#include <set>

namespace effsum {

std::string to_string(Family f)
{
    switch (f) {
    case Family::OrthantHolds: return "orthant_holds";
    case Family::DominatingFails: return "dominating_fails";
    case Family::DominatedFails: return "dominated_fails";
    case Family::IncomparableFails: return "incomparable_fails";
    case Family::WithZeroIncomparable: return "with_zero_incomparable";
    case Family::Random: return "random";
    }
    return "?";
}

Family family_from_string(const std::string& text)
{
    for (Family f : all_families) {
        if (to_string(f) == text) {
            return f;
        }
    }
    throw ParseError("unknown family '" + text + "'");
}

Coord Rng::between(Coord lo, Coord hi)
{
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x = engine_();
    while (x >= limit) {
        x = engine_();
    }
    return lo + static_cast<Coord>(x % span);
}

bool Rng::chance(std::uint64_t numerator, std::uint64_t denominator)
{
    return static_cast<std::uint64_t>(between(0, static_cast<Coord>(denominator) - 1)) < numerator;
}

namespace {

constexpr int max_attempts = 10000;

GroupElement draw(Rng& rng, std::size_t q, Coord lo, Coord hi)
{
    GroupElement::Storage v;
    for (std::size_t i = 0; i < q; ++i) {
        v.push_back(rng.between(lo, hi));
    }
    return GroupElement(std::move(v));
}

template <class Pred>
GroupElement draw_until(Rng& rng, std::size_t q, Coord lo, Coord hi, Pred&& ok)
{
    for (int i = 0; i < max_attempts; ++i) {
        GroupElement x = draw(rng, q, lo, hi);
        if (ok(x)) {
            return x;
        }
    }
    throw InvalidSizes("could not draw a point meeting the family constraint");
}

template <class Next>
std::vector<GroupElement> fill(std::size_t count, Next&& next, std::vector<GroupElement> seed = {})
{
    std::set<GroupElement> seen(seed.begin(), seed.end());
    for (int i = 0; i < max_attempts && seed.size() < count; ++i) {
        GroupElement x = next();
        if (seen.insert(x).second) {
            seed.push_back(std::move(x));
        }
    }
    return seed;
}

bool mixed_signs(const GroupElement& x)
{
    auto v = x.values();
    return std::any_of(v.begin(), v.end(), [](Coord c) { return c > 0; }) &&
           std::any_of(v.begin(), v.end(), [](Coord c) { return c < 0; });
}

Coord dot(const GroupElement& x, const GroupElement& y)
{
    Coord s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += x[i] * y[i];
    }
    return s;
}

} // namespace

Instance generate_instance(std::uint64_t seed, Family family, const GenSizes& sizes)
{
    if (sizes.a_size < 1 || sizes.b_size < 1 || sizes.dimension < 1 || sizes.radius < 1) {
        throw InvalidSizes("sizes must be at least 1");
    }
    const bool needs_mixed = family == Family::IncomparableFails || family == Family::WithZeroIncomparable;
    if (needs_mixed && sizes.dimension < 2) {
        throw InvalidSizes("incomparable families need dimension >= 2");
    }
    if (family == Family::WithZeroIncomparable && sizes.b_size < 2) {
        throw InvalidSizes("with_zero_incomparable needs |B| >= 2");
    }
    Rng rng(seed);
    const std::size_t q = sizes.dimension;
    const Coord r = sizes.radius;
    const GroupElement zero(GroupElement::Storage(q, 0));
    auto any_point = [&] { return draw(rng, q, -r, r); };

    std::vector<GroupElement> a = fill(sizes.a_size, any_point);
    std::vector<GroupElement> b;
    switch (family) {
    case Family::OrthantHolds:
        b = fill(sizes.b_size, [&] { return draw(rng, q, -r, 0); }, {zero});
        break;
    case Family::DominatingFails: {
        GroupElement top = draw_until(rng, q, 0, r, [&](const GroupElement& x) { return x != zero; });
        b = fill(sizes.b_size, any_point, {top});
        break;
    }
    case Family::DominatedFails:
        b = fill(sizes.b_size, [&] { return draw_until(rng, q, -r, 0, [&](const GroupElement& x) { return x != zero; }); });
        break;
    case Family::IncomparableFails:
    case Family::WithZeroIncomparable: {
        // Most draws share an open half-space with a positive normal so that
        // P4 (resp. P5) holds on B and the theorems can fire.
        const bool half_space = rng.chance(3, 4);
        const GroupElement normal = draw(rng, q, 1, 3);
        const bool below = family == Family::IncomparableFails;
        auto next = [&] {
            return draw_until(rng, q, -r, r, [&](const GroupElement& x) {
                if (!mixed_signs(x)) {
                    return false;
                }
                return !half_space || (below ? dot(normal, x) < 0 : dot(normal, x) > 0);
            });
        };
        if (below) {
            b = fill(sizes.b_size, next);
        } else {
            b = fill(sizes.b_size, next, {zero});
            a = efficient_set(FiniteSet(a), RelationOracle::product_order()).efficient.elements();
        }
        break;
    }
    case Family::Random: b = fill(sizes.b_size, any_point); break;
    }

    Instance inst;
    inst.name = to_string(family) + "-" + std::to_string(seed);
    inst.group = GroupContext::int_vec(q);
    inst.relation = RelationOracle::product_order();
    inst.a = FiniteSet(std::move(a));
    inst.b = FiniteSet(std::move(b));
    inst.generator = Json{{"seed", seed},
                          {"family", to_string(family)},
                          {"a_size", sizes.a_size},
                          {"b_size", sizes.b_size},
                          {"dimension", q},
                          {"radius", r}};
    return inst;
}

Instance generate_table_instance(std::uint64_t seed, std::size_t n)
{
    if (n < 1 || n > 8) {
        throw InvalidSizes("table carriers have 1..8 elements");
    }
    Rng rng(seed);
    std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            table[i][j] = (i + j) % n;
        }
    }
    std::vector<std::vector<bool>> m(n, std::vector<bool>(n, false));
    const auto density = static_cast<std::uint64_t>(rng.between(1, 5));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m[i][j] = i == j || rng.chance(density, 10);
        }
    }
    // Most relations are closed transitively; the rest stay raw and are
    // filtered out by the P1 audit.
    if (rng.chance(9, 10)) {
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    if (m[i][k] && m[k][j]) {
                        m[i][j] = true;
                    }
                }
            }
        }
    }
    std::vector<GroupElement> carrier;
    for (std::size_t i = 0; i < n; ++i) {
        carrier.push_back(GroupElement{static_cast<Coord>(i)});
    }
    std::vector<GroupElement> subset;
    for (const auto& x : carrier) {
        if (rng.chance(1, 2)) {
            subset.push_back(x);
        }
    }
    if (subset.empty()) {
        subset.push_back(carrier[static_cast<std::size_t>(rng.between(0, static_cast<Coord>(n) - 1))]);
    }

    Instance inst;
    inst.name = "table-" + std::to_string(n) + "-" + std::to_string(seed);
    inst.group = GroupContext::cayley(std::move(table), 0);
    inst.relation = RelationOracle::explicit_matrix(carrier, std::move(m));
    inst.a = FiniteSet(std::move(subset));
    inst.b = FiniteSet{GroupElement{0}};
    inst.generator = Json{{"seed", seed}, {"family", "table"}, {"n", n}};
    return inst;
}

} // namespace effsum
