#pragma once

#include "effsum/io.hpp"

#include <string>

namespace t {

using namespace effsum;

inline GroupElement v(Coord x, Coord y) { return GroupElement{x, y}; }

inline FiniteSet vs(std::initializer_list<std::pair<Coord, Coord>> pts)
{
    std::vector<GroupElement> out;
    for (auto [x, y] : pts) {
        out.push_back(v(x, y));
    }
    return FiniteSet(std::move(out));
}

inline std::string fixture(const std::string& name)
{
    return std::string(EFFSUM_FIXTURES) + "/" + name + "/instance.json";
}

} // namespace t
