#pragma once

#include "effsum/group.hpp"
#include "effsum/relation.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace effsum {

struct AuditConfig {
    int depth = 2;
    std::size_t cap = 10000;
    // Defaults to max(8, |A| + |B|).
    std::optional<std::uint64_t> max_multiplicity;
    // Longest b-combination the bounded P4/P5 scan tries; defaults to |B|.
    std::optional<std::size_t> combination_bound;
    // Tuples examined per property when the domain is not enumerated in full.
    std::size_t budget = 50000;
    // Finite carriers up to this order are scanned exhaustively.
    std::size_t exhaustive_limit = 130;

    friend bool operator==(const AuditConfig&, const AuditConfig&) = default;
};

// Bounded closure of A u B u {0_G} u inverses under composition.
// `scan_order` lists the elements layer by layer: A u B first (canonical),
// then identity and inverses, then each composition layer in generation
// order. A larger depth or cap only appends to it.
struct ProbeSet {
    FiniteSet elements;
    std::vector<GroupElement> scan_order;
    int depth = 0;
    bool truncated = false;
};

ProbeSet probe_closure(const FiniteSet& a, const FiniteSet& b, const GroupContext& g, int depth,
                       std::size_t cap);

enum class Outcome { Violated, NoViolationFound, ProvenExhaustive, Declared };

std::string to_string(Outcome o);
Outcome outcome_from_string(const std::string& text);

// Replaying a witness through the property's defining predicate must fail it.
//   REFL: [x]           P1: [x, y, z]        P2: [x, y]
//   P3:   [g, g', z] with side "left" or "right"
//   P4/P5 (and primed): elements b^1..b^m with multiplicities p_1..p_m
struct Witness {
    std::vector<GroupElement> elements;
    std::vector<std::uint64_t> multiplicities;
    std::string side;

    friend bool operator==(const Witness&, const Witness&) = default;
};

struct PropertyStatus {
    PropertyId property = PropertyId::Refl;
    Outcome outcome = Outcome::NoViolationFound;
    std::optional<Witness> witness;
    std::size_t probe_size = 0;
    int depth = 0;
    std::string evidence;

    friend bool operator==(const PropertyStatus&, const PropertyStatus&) = default;
};

// Declared or ProvenExhaustive: strong enough to license a theorem.
inline bool is_firm(Outcome o)
{
    return o == Outcome::Declared || o == Outcome::ProvenExhaustive;
}

PropertyStatus audit_property(PropertyId prop, const RelationOracle& rel, const GroupContext& g,
                              const ProbeSet& probe, const FiniteSet& b, std::uint64_t max_multiplicity,
                              const AuditConfig& config = {});

// Every property in all_properties order.
std::vector<PropertyStatus> audit_all(const FiniteSet& a, const FiniteSet& b, const GroupContext& g,
                                      const RelationOracle& rel, const AuditConfig& config = {});

const PropertyStatus& find_status(const std::vector<PropertyStatus>& report, PropertyId id);

// True when the witness of a Violated status really fails the property.
bool replay_violation(const PropertyStatus& status, const RelationOracle& rel, const GroupContext& g);

std::uint64_t default_max_multiplicity(const FiniteSet& a, const FiniteSet& b);

} // namespace effsum
