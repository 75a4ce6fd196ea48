#include "effsum/detail/cone.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <set>

namespace effsum::detail {

namespace {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// sum_j coeff[j] * x_j >= rhs
struct Row {
    std::vector<Int> coeff;
    Int rhs;

    friend bool operator<(const Row& a, const Row& b)
    {
        if (a.coeff != b.coeff) {
            return a.coeff < b.coeff;
        }
        return a.rhs < b.rhs;
    }
};

void normalize(Row& row)
{
    Int g = abs(row.rhs);
    for (const auto& c : row.coeff) {
        g = gcd(g, abs(c));
    }
    if (g > 1) {
        for (auto& c : row.coeff) {
            c /= g;
        }
        row.rhs /= g;
    }
}

// Rows over variables [0, upto); returns false on contradiction.
bool only_constants_feasible(const std::vector<Row>& rows)
{
    for (const auto& r : rows) {
        if (r.rhs > 0) {
            return false;
        }
    }
    return true;
}

} // namespace

ConeSearch find_cone_combination(const std::vector<std::vector<Coord>>& vectors, ConeSense sense,
                                 std::size_t row_limit)
{
    const std::size_t k = vectors.size();
    if (k == 0) {
        return {true, std::nullopt};
    }
    const std::size_t dim = vectors.front().size();

    std::vector<Row> rows;
    for (std::size_t l = 0; l < k; ++l) {
        Row r{std::vector<Int>(k, 0), 0};
        r.coeff[l] = 1;
        rows.push_back(std::move(r));
    }
    for (std::size_t i = 0; i < dim; ++i) {
        Row up{std::vector<Int>(k, 0), 0};
        for (std::size_t l = 0; l < k; ++l) {
            up.coeff[l] = vectors[l][i];
        }
        Row down = up;
        for (auto& c : down.coeff) {
            c = -c;
        }
        if (sense != ConeSense::NonPositive) {
            rows.push_back(up);
        }
        if (sense != ConeSense::NonNegative) {
            rows.push_back(down);
        }
    }
    rows.push_back(Row{std::vector<Int>(k, 1), 1});

    // stages[t] holds the rows mentioning only variables 0..t.
    std::vector<std::vector<Row>> stages(k);
    std::vector<Row> current = std::move(rows);
    for (std::size_t t = k; t-- > 0;) {
        std::set<Row> unique;
        for (auto& r : current) {
            normalize(r);
            unique.insert(r);
        }
        current.assign(unique.begin(), unique.end());
        stages[t] = current;

        std::vector<const Row*> pos;
        std::vector<const Row*> neg;
        std::vector<Row> next;
        for (const auto& r : current) {
            if (r.coeff[t] > 0) {
                pos.push_back(&r);
            } else if (r.coeff[t] < 0) {
                neg.push_back(&r);
            } else {
                next.push_back(r);
            }
        }
        if (next.size() + pos.size() * neg.size() > row_limit) {
            return {false, std::nullopt};
        }
        for (const Row* p : pos) {
            for (const Row* n : neg) {
                const Int a = p->coeff[t];
                const Int b = -n->coeff[t];
                Row combined{std::vector<Int>(k, 0), b * p->rhs + a * n->rhs};
                for (std::size_t j = 0; j < k; ++j) {
                    combined.coeff[j] = b * p->coeff[j] + a * n->coeff[j];
                }
                next.push_back(std::move(combined));
            }
        }
        current = std::move(next);
    }
    if (!only_constants_feasible(current)) {
        return {true, std::nullopt};
    }

    std::vector<Rational> x(k, 0);
    for (std::size_t t = 0; t < k; ++t) {
        std::optional<Rational> lower;
        for (const auto& r : stages[t]) {
            if (r.coeff[t] <= 0) {
                continue;
            }
            Rational rest = Rational(r.rhs);
            for (std::size_t j = 0; j < t; ++j) {
                rest -= Rational(r.coeff[j]) * x[j];
            }
            Rational bound = rest / Rational(r.coeff[t]);
            if (!lower || bound > *lower) {
                lower = bound;
            }
        }
        x[t] = lower.value_or(Rational(0));
    }

    Int scale = 1;
    for (const auto& v : x) {
        const Int d = denominator(v);
        scale = scale / gcd(scale, d) * d;
    }
    std::vector<Int> ints(k);
    Int common = 0;
    for (std::size_t l = 0; l < k; ++l) {
        ints[l] = numerator(x[l] * Rational(scale));
        common = gcd(common, ints[l]);
    }
    std::vector<std::uint64_t> out(k);
    for (std::size_t l = 0; l < k; ++l) {
        const Int v = common > 1 ? Int(ints[l] / common) : ints[l];
        if (v < 0 || v > Int(std::numeric_limits<std::uint32_t>::max())) {
            return {false, std::nullopt};
        }
        out[l] = static_cast<std::uint64_t>(v);
    }
    return {true, std::move(out)};
}

} // namespace effsum::detail
