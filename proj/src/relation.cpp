#include "effsum/relation.hpp"

#include <algorithm>

namespace effsum {

std::string to_string(PropertyId id)
{
    switch (id) {
    case PropertyId::Refl: return "REFL";
    case PropertyId::P1: return "P1";
    case PropertyId::P2: return "P2";
    case PropertyId::P3: return "P3";
    case PropertyId::P4: return "P4";
    case PropertyId::P4p: return "P4p";
    case PropertyId::P5: return "P5";
    case PropertyId::P5p: return "P5p";
    }
    return "?";
}

PropertyId property_from_string(const std::string& text)
{
    for (PropertyId id : all_properties) {
        if (to_string(id) == text) {
            return id;
        }
    }
    throw ParseError("unknown property identifier '" + text + "'");
}

std::string to_string(RelationKind kind)
{
    switch (kind) {
    case RelationKind::ProductOrder: return "product_order";
    case RelationKind::FixedPoints: return "fixed_points";
    case RelationKind::Equality: return "equality";
    case RelationKind::Superset: return "superset";
    case RelationKind::ExplicitMatrix: return "explicit_matrix";
    }
    return "?";
}

RelationOracle RelationOracle::product_order()
{
    return {RelationKind::ProductOrder,
            {PropertyId::Refl, PropertyId::P1, PropertyId::P2, PropertyId::P3, PropertyId::P4p, PropertyId::P5p}};
}

RelationOracle RelationOracle::fixed_points()
{
    return {RelationKind::FixedPoints, {PropertyId::Refl, PropertyId::P1}};
}

RelationOracle RelationOracle::equality()
{
    return {RelationKind::Equality, {PropertyId::Refl, PropertyId::P1, PropertyId::P2, PropertyId::P3}};
}

RelationOracle RelationOracle::superset()
{
    return {RelationKind::Superset, {PropertyId::Refl, PropertyId::P1, PropertyId::P2}};
}

RelationOracle RelationOracle::explicit_matrix(std::vector<GroupElement> carrier,
                                               std::vector<std::vector<bool>> matrix)
{
    const std::size_t raw = carrier.size();
    FiniteSet set(std::move(carrier));
    if (set.size() != raw) {
        throw ValidationError("explicit_matrix carrier contains duplicates");
    }
    if (matrix.size() != set.size()) {
        throw ValidationError("explicit_matrix must be |carrier| x |carrier|");
    }
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        if (matrix[i].size() != set.size()) {
            throw ValidationError("explicit_matrix must be |carrier| x |carrier|");
        }
        if (!matrix[i][i]) {
            throw ValidationError("explicit_matrix diagonal must be true (R is reflexive)");
        }
    }
    RelationOracle rel{RelationKind::ExplicitMatrix, {PropertyId::Refl}};
    rel.matrix_ = std::make_shared<const Matrix>(Matrix{std::move(set), std::move(matrix)});
    return rel;
}

const FiniteSet& RelationOracle::carrier() const
{
    if (!matrix_) {
        throw PreconditionError("relation has no explicit carrier");
    }
    return matrix_->carrier;
}

const std::vector<std::vector<bool>>& RelationOracle::matrix() const
{
    if (!matrix_) {
        throw PreconditionError("relation has no explicit matrix");
    }
    return matrix_->cells;
}

namespace {

std::size_t count_fixed_points(const GroupElement& x)
{
    std::size_t n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == static_cast<Coord>(i + 1)) {
            ++n;
        }
    }
    return n;
}

} // namespace

bool RelationOracle::related(const GroupElement& x, const GroupElement& y) const
{
    switch (kind_) {
    case RelationKind::ProductOrder: {
        if (x.size() != y.size()) {
            throw CarrierMismatch("product order compares vectors of different dimension");
        }
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] < y[i]) {
                return false;
            }
        }
        return true;
    }
    case RelationKind::FixedPoints:
        if (x.size() != y.size()) {
            throw CarrierMismatch("fixed-point relation compares permutations of different degree");
        }
        return count_fixed_points(x) >= count_fixed_points(y);
    case RelationKind::Equality: return x == y;
    case RelationKind::Superset: {
        auto xv = x.values();
        auto yv = y.values();
        return std::includes(xv.begin(), xv.end(), yv.begin(), yv.end());
    }
    case RelationKind::ExplicitMatrix: {
        auto i = matrix_->carrier.index_of(x);
        auto j = matrix_->carrier.index_of(y);
        if (!i || !j) {
            throw CarrierMismatch("element outside the explicit_matrix carrier: " +
                                  (!i ? x : y).to_string());
        }
        return matrix_->cells[*i][*j];
    }
    }
    return false;
}

std::string RelationOracle::describe() const
{
    if (kind_ == RelationKind::ExplicitMatrix) {
        return "explicit_matrix(" + std::to_string(matrix_->carrier.size()) + ")";
    }
    return to_string(kind_);
}

std::string to_string(Comparison c)
{
    switch (c) {
    case Comparison::Equal: return "Equal";
    case Comparison::EquivalentDistinct: return "EquivalentDistinct";
    case Comparison::StrictForward: return "StrictForward";
    case Comparison::StrictBackward: return "StrictBackward";
    case Comparison::Incomparable: return "Incomparable";
    }
    return "?";
}

Comparison mirror(Comparison c)
{
    switch (c) {
    case Comparison::StrictForward: return Comparison::StrictBackward;
    case Comparison::StrictBackward: return Comparison::StrictForward;
    default: return c;
    }
}

Comparison compare(const GroupElement& x, const GroupElement& y, const RelationOracle& rel)
{
    const bool forward = rel.related(x, y);
    const bool backward = rel.related(y, x);
    if (x == y) {
        return Comparison::Equal;
    }
    if (forward && backward) {
        return Comparison::EquivalentDistinct;
    }
    if (forward) {
        return Comparison::StrictForward;
    }
    if (backward) {
        return Comparison::StrictBackward;
    }
    return Comparison::Incomparable;
}

EfficiencyPartition efficient_set(const FiniteSet& s, const RelationOracle& rel)
{
    std::vector<GroupElement> efficient;
    std::vector<GroupElement> dominated;
    for (const auto& g : s) {
        const bool beaten = std::any_of(s.begin(), s.end(), [&](const GroupElement& h) {
            return rel.strictly(h, g);
        });
        (beaten ? dominated : efficient).push_back(g);
    }
    return {FiniteSet(std::move(efficient)), FiniteSet(std::move(dominated))};
}

bool is_stable(const FiniteSet& s, const RelationOracle& rel)
{
    return efficient_set(s, rel).dominated.empty();
}

std::map<GroupElement, GroupElement> white_witness(const FiniteSet& s, const RelationOracle& rel,
                                                   bool transitivity_violated)
{
    if (transitivity_violated) {
        throw NotApplicable("white_witness needs a transitive relation on the set");
    }
    std::map<GroupElement, GroupElement> out;
    for (const auto& a : s) {
        GroupElement current = a;
        std::size_t steps = 0;
        while (true) {
            auto dominator = std::find_if(s.begin(), s.end(), [&](const GroupElement& h) {
                return rel.strictly(h, current);
            });
            if (dominator == s.end()) {
                break;
            }
            current = *dominator;
            if (++steps > s.size()) {
                throw ChainOverflow("domination chain from " + a.to_string() + " exceeds " +
                                    std::to_string(s.size()) + " steps; P has a cycle");
            }
        }
        out.emplace(a, current);
    }
    return out;
}

} // namespace effsum
