#pragma once

#include "effsum/io.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace effsum {

enum class Family { OrthantHolds, DominatingFails, DominatedFails, IncomparableFails, WithZeroIncomparable, Random };

inline constexpr Family all_families[] = {Family::OrthantHolds,      Family::DominatingFails,
                                          Family::DominatedFails,    Family::IncomparableFails,
                                          Family::WithZeroIncomparable, Family::Random};

std::string to_string(Family f);
Family family_from_string(const std::string& text);

struct GenSizes {
    std::size_t a_size = 5;
    std::size_t b_size = 3;
    std::size_t dimension = 2;
    Coord radius = 5;
};

// mt19937_64 with a portable bounded draw, so output is identical everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Coord between(Coord lo, Coord hi);
    bool chance(std::uint64_t numerator, std::uint64_t denominator);

private:
    std::mt19937_64 engine_;
};

// IntVec instances under the product order.
Instance generate_instance(std::uint64_t seed, Family family, const GenSizes& sizes = {});

// Random explicit_matrix relation over the elements of Z/n (n <= 8) or a random
// Cayley table carrier; used by the White and audit suites.
Instance generate_table_instance(std::uint64_t seed, std::size_t n);

} // namespace effsum
