#pragma once

#include "effsum/group.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace effsum::detail {

enum class ConeSense { NonNegative, NonPositive, Zero };

struct ConeSearch {
    // False when the elimination exceeded its row budget and nothing was decided.
    bool decided = false;
    // Nonnegative multiplicities, not all zero, when a combination exists.
    std::optional<std::vector<std::uint64_t>> multiplicities;
};

// Exact rational Fourier-Motzkin test for nonnegative integers p (not all
// zero) with sum_l p_l * v_l >= 0, <= 0 or == 0 componentwise.
ConeSearch find_cone_combination(const std::vector<std::vector<Coord>>& vectors, ConeSense sense,
                                 std::size_t row_limit = 20000);

} // namespace effsum::detail
