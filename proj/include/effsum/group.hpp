#pragma once

#include "effsum/errors.hpp"

#include <boost/container/small_vector.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace effsum {

using Coord = std::int64_t;

// A group element in one of the built-in encodings:
//   IntVec   components of a vector in Z^q
//   Perm     one-line image array of a permutation of {1..n}
//   CycInt   a single residue in [0, n)
//   FinSet   strictly increasing nonnegative integers (a finite subset of N)
//   TableIdx a single index into a Cayley table
// The encoding alone does not say which carrier it belongs to; that is the
// job of GroupContext. Ordering is lexicographic on the encoding and is the
// canonical order used everywhere for output and tie-breaking.
class GroupElement {
public:
    using Storage = boost::container::small_vector<Coord, 4>;

    GroupElement() = default;
    GroupElement(std::initializer_list<Coord> values) : values_(values) {}
    explicit GroupElement(Storage values) : values_(std::move(values)) {}
    explicit GroupElement(std::span<const Coord> values) : values_(values.begin(), values.end()) {}

    [[nodiscard]] std::span<const Coord> values() const { return {values_.data(), values_.size()}; }
    [[nodiscard]] std::size_t size() const { return values_.size(); }
    [[nodiscard]] bool empty() const { return values_.empty(); }
    [[nodiscard]] Coord operator[](std::size_t i) const { return values_[i]; }

    friend bool operator==(const GroupElement& lhs, const GroupElement& rhs)
    {
        return lhs.values_ == rhs.values_;
    }
    friend std::strong_ordering operator<=>(const GroupElement& lhs, const GroupElement& rhs)
    {
        return std::lexicographical_compare_three_way(lhs.values_.begin(), lhs.values_.end(),
                                                      rhs.values_.begin(), rhs.values_.end());
    }

    [[nodiscard]] std::string to_string() const;

private:
    Storage values_;
};

struct GroupElementHash {
    std::size_t operator()(const GroupElement& e) const noexcept;
};

enum class CarrierKind { IntVec, Perm, CycInt, FinSet, TableIdx };

std::string to_string(CarrierKind kind);

// Full multiplication table of a finite group, validated on construction.
struct CayleyTable {
    std::vector<std::vector<std::size_t>> product;
    std::size_t identity = 0;
    std::vector<std::size_t> inverse;
};

class GroupContext {
public:
    static GroupContext int_vec(std::size_t dimension);
    static GroupContext permutations(std::size_t n);
    static GroupContext cyclic(Coord modulus);
    static GroupContext finite_sets();
    // Validates closure, identity, inverses and associativity exhaustively.
    static GroupContext cayley(std::vector<std::vector<std::size_t>> product, std::size_t identity);

    [[nodiscard]] CarrierKind kind() const { return kind_; }
    // q for IntVec, n for Perm, the modulus for CycInt, the order for TableIdx, 0 for FinSet.
    [[nodiscard]] std::size_t parameter() const { return parameter_; }
    [[nodiscard]] const CayleyTable* table() const { return table_.get(); }

    [[nodiscard]] GroupElement identity() const;
    [[nodiscard]] GroupElement combine(const GroupElement& x, const GroupElement& y) const;
    [[nodiscard]] GroupElement inverse(const GroupElement& x) const;
    // Sum of p copies of x; repeat(0, x) is the identity.
    [[nodiscard]] GroupElement repeat(std::uint64_t p, const GroupElement& x) const;

    [[nodiscard]] bool is_member(const GroupElement& x) const;
    void require_member(const GroupElement& x) const;

    // Group order when the carrier is finite.
    [[nodiscard]] std::optional<std::size_t> order() const;
    // All elements in canonical order; throws PreconditionError on infinite carriers.
    [[nodiscard]] std::vector<GroupElement> enumerate() const;

    [[nodiscard]] std::string describe() const;

    friend bool operator==(const GroupContext& lhs, const GroupContext& rhs);

private:
    GroupContext(CarrierKind kind, std::size_t parameter) : kind_(kind), parameter_(parameter) {}

    CarrierKind kind_;
    std::size_t parameter_;
    std::shared_ptr<const CayleyTable> table_;
};

// A deduplicated, canonically ordered collection of group elements.
class FiniteSet {
public:
    FiniteSet() = default;
    explicit FiniteSet(std::vector<GroupElement> elements);
    FiniteSet(std::initializer_list<GroupElement> elements);

    [[nodiscard]] std::size_t size() const { return elements_.size(); }
    [[nodiscard]] bool empty() const { return elements_.empty(); }
    [[nodiscard]] bool contains(const GroupElement& x) const;
    [[nodiscard]] const GroupElement& operator[](std::size_t i) const { return elements_[i]; }
    [[nodiscard]] const std::vector<GroupElement>& elements() const { return elements_; }
    [[nodiscard]] std::optional<std::size_t> index_of(const GroupElement& x) const;

    [[nodiscard]] auto begin() const { return elements_.begin(); }
    [[nodiscard]] auto end() const { return elements_.end(); }

    [[nodiscard]] FiniteSet united(const FiniteSet& other) const;
    [[nodiscard]] bool is_subset_of(const FiniteSet& other) const;

    friend bool operator==(const FiniteSet&, const FiniteSet&) = default;

private:
    std::vector<GroupElement> elements_;
};

// Number of duplicates a FiniteSet built from `raw` would drop.
std::size_t count_duplicates(const std::vector<GroupElement>& raw);

FiniteSet minkowski_sum(const FiniteSet& a, const FiniteSet& b, const GroupContext& g);
// Left fold: ((A + B1) + B2) + ...
FiniteSet minkowski_sum_many(const FiniteSet& a, std::span<const FiniteSet> summands,
                             const GroupContext& g);
// B1 + B2 + ... with no base set.
FiniteSet sum_of_sets(std::span<const FiniteSet> summands, const GroupContext& g);
FiniteSet translate(const FiniteSet& a, const GroupElement& b, const GroupContext& g);

} // namespace effsum
