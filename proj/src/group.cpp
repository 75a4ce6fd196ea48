#include "effsum/group.hpp"

#include <boost/container_hash/hash.hpp>

#include <algorithm>
#include <numeric>
#include <sstream>

namespace effsum {

namespace {

Coord checked_add(Coord a, Coord b)
{
    Coord out = 0;
    if (__builtin_add_overflow(a, b, &out)) {
        throw ArithmeticOverflow("integer overflow in group composition");
    }
    return out;
}

Coord checked_neg(Coord a)
{
    Coord out = 0;
    if (__builtin_sub_overflow(Coord{0}, a, &out)) {
        throw ArithmeticOverflow("integer overflow in group inverse");
    }
    return out;
}

constexpr std::size_t max_enumerable_perm = 8;

} // namespace

std::string GroupElement::to_string() const
{
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (i != 0) {
            os << ',';
        }
        os << values_[i];
    }
    os << ']';
    return os.str();
}

std::size_t GroupElementHash::operator()(const GroupElement& e) const noexcept
{
    auto v = e.values();
    return boost::hash_range(v.begin(), v.end());
}

std::string to_string(CarrierKind kind)
{
    switch (kind) {
    case CarrierKind::IntVec: return "intvec";
    case CarrierKind::Perm: return "perm";
    case CarrierKind::CycInt: return "cyclic";
    case CarrierKind::FinSet: return "finset";
    case CarrierKind::TableIdx: return "table";
    }
    return "?";
}

GroupContext GroupContext::int_vec(std::size_t dimension)
{
    if (dimension == 0) {
        throw ValidationError("IntVec dimension must be at least 1");
    }
    return {CarrierKind::IntVec, dimension};
}

GroupContext GroupContext::permutations(std::size_t n)
{
    if (n == 0) {
        throw ValidationError("permutation degree must be at least 1");
    }
    return {CarrierKind::Perm, n};
}

GroupContext GroupContext::cyclic(Coord modulus)
{
    if (modulus < 1) {
        throw ValidationError("cyclic modulus must be at least 1");
    }
    return {CarrierKind::CycInt, static_cast<std::size_t>(modulus)};
}

GroupContext GroupContext::finite_sets()
{
    return {CarrierKind::FinSet, 0};
}

GroupContext GroupContext::cayley(std::vector<std::vector<std::size_t>> product, std::size_t identity)
{
    const std::size_t n = product.size();
    if (n == 0) {
        throw ValidationError("Cayley table is empty");
    }
    for (const auto& row : product) {
        if (row.size() != n) {
            throw ValidationError("Cayley table is not square");
        }
        for (std::size_t v : row) {
            if (v >= n) {
                throw ValidationError("Cayley table entry out of range");
            }
        }
    }
    if (identity >= n) {
        throw ValidationError("Cayley identity index out of range");
    }
    for (std::size_t x = 0; x < n; ++x) {
        if (product[identity][x] != x || product[x][identity] != x) {
            throw ValidationError("Cayley identity law fails at index " + std::to_string(x));
        }
    }
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            for (std::size_t z = 0; z < n; ++z) {
                if (product[product[x][y]][z] != product[x][product[y][z]]) {
                    throw ValidationError("Cayley table is not associative at (" + std::to_string(x) +
                                          "," + std::to_string(y) + "," + std::to_string(z) + ")");
                }
            }
        }
    }
    std::vector<std::size_t> inverse(n, n);
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            if (product[x][y] == identity && product[y][x] == identity) {
                inverse[x] = y;
                break;
            }
        }
        if (inverse[x] == n) {
            throw ValidationError("Cayley table element " + std::to_string(x) + " has no inverse");
        }
    }
    GroupContext g{CarrierKind::TableIdx, n};
    g.table_ = std::make_shared<const CayleyTable>(CayleyTable{std::move(product), identity, std::move(inverse)});
    return g;
}

GroupElement GroupContext::identity() const
{
    switch (kind_) {
    case CarrierKind::IntVec: return GroupElement{GroupElement::Storage(parameter_, 0)};
    case CarrierKind::Perm: {
        GroupElement::Storage s(parameter_);
        std::iota(s.begin(), s.end(), Coord{1});
        return GroupElement{std::move(s)};
    }
    case CarrierKind::CycInt: return GroupElement{0};
    case CarrierKind::FinSet: return GroupElement{};
    case CarrierKind::TableIdx: return GroupElement{static_cast<Coord>(table_->identity)};
    }
    return {};
}

bool GroupContext::is_member(const GroupElement& x) const
{
    switch (kind_) {
    case CarrierKind::IntVec: return x.size() == parameter_;
    case CarrierKind::Perm: {
        if (x.size() != parameter_) {
            return false;
        }
        std::vector<bool> seen(parameter_, false);
        for (Coord v : x.values()) {
            if (v < 1 || v > static_cast<Coord>(parameter_) || seen[static_cast<std::size_t>(v - 1)]) {
                return false;
            }
            seen[static_cast<std::size_t>(v - 1)] = true;
        }
        return true;
    }
    case CarrierKind::CycInt:
        return x.size() == 1 && x[0] >= 0 && x[0] < static_cast<Coord>(parameter_);
    case CarrierKind::FinSet: {
        Coord prev = -1;
        for (Coord v : x.values()) {
            if (v <= prev) {
                return false;
            }
            prev = v;
        }
        return true;
    }
    case CarrierKind::TableIdx:
        return x.size() == 1 && x[0] >= 0 && x[0] < static_cast<Coord>(parameter_);
    }
    return false;
}

void GroupContext::require_member(const GroupElement& x) const
{
    if (!is_member(x)) {
        throw CarrierMismatch("element " + x.to_string() + " does not belong to " + describe());
    }
}

GroupElement GroupContext::combine(const GroupElement& x, const GroupElement& y) const
{
    require_member(x);
    require_member(y);
    switch (kind_) {
    case CarrierKind::IntVec: {
        GroupElement::Storage s(parameter_);
        for (std::size_t i = 0; i < parameter_; ++i) {
            s[i] = checked_add(x[i], y[i]);
        }
        return GroupElement{std::move(s)};
    }
    case CarrierKind::Perm: {
        // x acts first: (x + y)(i) = y(x(i)), so (12) + (123) = (13).
        GroupElement::Storage s(parameter_);
        for (std::size_t i = 0; i < parameter_; ++i) {
            s[i] = y[static_cast<std::size_t>(x[i] - 1)];
        }
        return GroupElement{std::move(s)};
    }
    case CarrierKind::CycInt: {
        const auto n = static_cast<Coord>(parameter_);
        return GroupElement{(x[0] + y[0]) % n};
    }
    case CarrierKind::FinSet: {
        GroupElement::Storage s;
        auto xv = x.values();
        auto yv = y.values();
        std::set_symmetric_difference(xv.begin(), xv.end(), yv.begin(), yv.end(), std::back_inserter(s));
        return GroupElement{std::move(s)};
    }
    case CarrierKind::TableIdx:
        return GroupElement{static_cast<Coord>(
            table_->product[static_cast<std::size_t>(x[0])][static_cast<std::size_t>(y[0])])};
    }
    return {};
}

GroupElement GroupContext::inverse(const GroupElement& x) const
{
    require_member(x);
    switch (kind_) {
    case CarrierKind::IntVec: {
        GroupElement::Storage s(parameter_);
        for (std::size_t i = 0; i < parameter_; ++i) {
            s[i] = checked_neg(x[i]);
        }
        return GroupElement{std::move(s)};
    }
    case CarrierKind::Perm: {
        GroupElement::Storage s(parameter_);
        for (std::size_t i = 0; i < parameter_; ++i) {
            s[static_cast<std::size_t>(x[i] - 1)] = static_cast<Coord>(i + 1);
        }
        return GroupElement{std::move(s)};
    }
    case CarrierKind::CycInt: {
        const auto n = static_cast<Coord>(parameter_);
        return GroupElement{(n - x[0]) % n};
    }
    case CarrierKind::FinSet: return x;
    case CarrierKind::TableIdx:
        return GroupElement{static_cast<Coord>(table_->inverse[static_cast<std::size_t>(x[0])])};
    }
    return {};
}

GroupElement GroupContext::repeat(std::uint64_t p, const GroupElement& x) const
{
    require_member(x);
    GroupElement result = identity();
    GroupElement base = x;
    while (p != 0) {
        if ((p & 1U) != 0) {
            result = combine(result, base);
        }
        p >>= 1U;
        if (p != 0) {
            base = combine(base, base);
        }
    }
    return result;
}

std::optional<std::size_t> GroupContext::order() const
{
    switch (kind_) {
    case CarrierKind::IntVec:
    case CarrierKind::FinSet: return std::nullopt;
    case CarrierKind::Perm: {
        std::size_t f = 1;
        for (std::size_t i = 2; i <= parameter_; ++i) {
            f *= i;
        }
        return f;
    }
    case CarrierKind::CycInt:
    case CarrierKind::TableIdx: return parameter_;
    }
    return std::nullopt;
}

std::vector<GroupElement> GroupContext::enumerate() const
{
    std::vector<GroupElement> out;
    switch (kind_) {
    case CarrierKind::IntVec:
    case CarrierKind::FinSet: throw PreconditionError("cannot enumerate infinite carrier " + describe());
    case CarrierKind::Perm: {
        if (parameter_ > max_enumerable_perm) {
            throw PreconditionError("refusing to enumerate " + describe());
        }
        GroupElement::Storage s(parameter_);
        std::iota(s.begin(), s.end(), Coord{1});
        do {
            out.emplace_back(s);
        } while (std::next_permutation(s.begin(), s.end()));
        break;
    }
    case CarrierKind::CycInt:
    case CarrierKind::TableIdx:
        for (std::size_t i = 0; i < parameter_; ++i) {
            out.push_back(GroupElement{static_cast<Coord>(i)});
        }
        break;
    }
    return out;
}

std::string GroupContext::describe() const
{
    switch (kind_) {
    case CarrierKind::IntVec: return "IntVec(" + std::to_string(parameter_) + ")";
    case CarrierKind::Perm: return "S" + std::to_string(parameter_);
    case CarrierKind::CycInt: return "Z/" + std::to_string(parameter_);
    case CarrierKind::FinSet: return "FinSet";
    case CarrierKind::TableIdx: return "Table(" + std::to_string(parameter_) + ")";
    }
    return "?";
}

bool operator==(const GroupContext& lhs, const GroupContext& rhs)
{
    if (lhs.kind_ != rhs.kind_ || lhs.parameter_ != rhs.parameter_) {
        return false;
    }
    if (lhs.kind_ != CarrierKind::TableIdx) {
        return true;
    }
    return lhs.table_->product == rhs.table_->product && lhs.table_->identity == rhs.table_->identity;
}

FiniteSet::FiniteSet(std::vector<GroupElement> elements) : elements_(std::move(elements))
{
    std::sort(elements_.begin(), elements_.end());
    elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
}

FiniteSet::FiniteSet(std::initializer_list<GroupElement> elements)
    : FiniteSet(std::vector<GroupElement>(elements))
{
}

bool FiniteSet::contains(const GroupElement& x) const
{
    return std::binary_search(elements_.begin(), elements_.end(), x);
}

std::optional<std::size_t> FiniteSet::index_of(const GroupElement& x) const
{
    auto it = std::lower_bound(elements_.begin(), elements_.end(), x);
    if (it == elements_.end() || *it != x) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - elements_.begin());
}

FiniteSet FiniteSet::united(const FiniteSet& other) const
{
    std::vector<GroupElement> out;
    out.reserve(size() + other.size());
    std::set_union(begin(), end(), other.begin(), other.end(), std::back_inserter(out));
    FiniteSet s;
    s.elements_ = std::move(out);
    return s;
}

bool FiniteSet::is_subset_of(const FiniteSet& other) const
{
    return std::includes(other.begin(), other.end(), begin(), end());
}

std::size_t count_duplicates(const std::vector<GroupElement>& raw)
{
    return raw.size() - FiniteSet(raw).size();
}

FiniteSet minkowski_sum(const FiniteSet& a, const FiniteSet& b, const GroupContext& g)
{
    if (a.empty() || b.empty()) {
        throw EmptyOperand("Minkowski sum needs nonempty operands");
    }
    std::vector<GroupElement> out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a) {
        for (const auto& y : b) {
            out.push_back(g.combine(x, y));
        }
    }
    return FiniteSet(std::move(out));
}

FiniteSet minkowski_sum_many(const FiniteSet& a, std::span<const FiniteSet> summands, const GroupContext& g)
{
    if (a.empty()) {
        throw EmptyOperand("Minkowski sum needs nonempty operands");
    }
    FiniteSet acc = a;
    for (const auto& s : summands) {
        acc = minkowski_sum(acc, s, g);
    }
    return acc;
}

FiniteSet sum_of_sets(std::span<const FiniteSet> summands, const GroupContext& g)
{
    if (summands.empty()) {
        throw EmptyOperand("no summands given");
    }
    return minkowski_sum_many(summands.front(), summands.subspan(1), g);
}

FiniteSet translate(const FiniteSet& a, const GroupElement& b, const GroupContext& g)
{
    std::vector<GroupElement> out;
    out.reserve(a.size());
    for (const auto& x : a) {
        out.push_back(g.combine(x, b));
    }
    return FiniteSet(std::move(out));
}

} // namespace effsum
