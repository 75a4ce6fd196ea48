#pragma once

#include "effsum/group.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace effsum {

// Stable identifiers; the report strings are REFL, P1, P2, P3, P4, P4p, P5, P5p.
enum class PropertyId { Refl, P1, P2, P3, P4, P4p, P5, P5p };

inline constexpr PropertyId all_properties[] = {PropertyId::Refl, PropertyId::P1,  PropertyId::P2,
                                                PropertyId::P3,   PropertyId::P4,  PropertyId::P4p,
                                                PropertyId::P5,   PropertyId::P5p};

std::string to_string(PropertyId id);
PropertyId property_from_string(const std::string& text);

enum class RelationKind { ProductOrder, FixedPoints, Equality, Superset, ExplicitMatrix };

std::string to_string(RelationKind kind);

// A reflexive relation R on group-element encodings. xRy reads "x is at least
// as good as y"; P is its strict part and I its incomparability.
class RelationOracle {
public:
    // Larger-is-better componentwise order on IntVec.
    static RelationOracle product_order();
    // pi R sigma iff pi has at least as many fixed points as sigma.
    static RelationOracle fixed_points();
    static RelationOracle equality();
    // X R Y iff Y is a subset of X.
    static RelationOracle superset();
    // Arbitrary relation on a finite carrier; matrix[i][j] says carrier[i] R carrier[j]
    // with the carrier taken in canonical order.
    static RelationOracle explicit_matrix(std::vector<GroupElement> carrier,
                                          std::vector<std::vector<bool>> matrix);

    [[nodiscard]] RelationKind kind() const { return kind_; }
    [[nodiscard]] bool related(const GroupElement& x, const GroupElement& y) const;
    [[nodiscard]] bool strictly(const GroupElement& x, const GroupElement& y) const
    {
        return related(x, y) && !related(y, x);
    }
    [[nodiscard]] bool incomparable(const GroupElement& x, const GroupElement& y) const
    {
        return !related(x, y) && !related(y, x);
    }

    [[nodiscard]] const std::set<PropertyId>& declared() const { return declared_; }
    [[nodiscard]] bool declares(PropertyId id) const { return declared_.contains(id); }

    // Explicit matrices only.
    [[nodiscard]] const FiniteSet& carrier() const;
    [[nodiscard]] const std::vector<std::vector<bool>>& matrix() const;

    [[nodiscard]] std::string describe() const;

private:
    struct Matrix {
        FiniteSet carrier;
        std::vector<std::vector<bool>> cells;
    };

    RelationOracle(RelationKind kind, std::set<PropertyId> declared)
        : kind_(kind), declared_(std::move(declared))
    {
    }

    RelationKind kind_;
    std::set<PropertyId> declared_;
    std::shared_ptr<const Matrix> matrix_;
};

enum class Comparison { Equal, EquivalentDistinct, StrictForward, StrictBackward, Incomparable };

std::string to_string(Comparison c);
Comparison mirror(Comparison c);

Comparison compare(const GroupElement& x, const GroupElement& y, const RelationOracle& rel);

struct EfficiencyPartition {
    FiniteSet efficient;
    FiniteSet dominated;

    friend bool operator==(const EfficiencyPartition&, const EfficiencyPartition&) = default;
};

EfficiencyPartition efficient_set(const FiniteSet& s, const RelationOracle& rel);
bool is_stable(const FiniteSet& s, const RelationOracle& rel);

// Maps every element of a finite set to an efficient element at least as good
// as it. Ties go to the canonically least strict dominator, repeated until an
// efficient element is reached. If `transitivity_violated` is set the call is
// refused with NotApplicable; a chain longer than |S| raises ChainOverflow.
std::map<GroupElement, GroupElement> white_witness(const FiniteSet& s, const RelationOracle& rel,
                                                   bool transitivity_violated = false);

} // namespace effsum
