#pragma once

// Exact arithmetic, total ordering and cone enumeration for the discrete
// ordered dual groups supported by this library:
//
//   IntegerLine  X = Z                 (usual order)
//   LexLattice   X = Z^d               (lexicographic order, coordinate 1 first)
//   DyadicLine   X = Z[1/2] subset Q   (real-number order)
//
// Elements are kept in canonical exact form; dyadic rationals are stored as
// numerator / 2^exponent with the numerator odd or zero.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace muhankel {

enum class GroupKind { IntegerLine, LexLattice, DyadicLine };

enum class Ordering { Less, Equal, Greater };

struct GroupDescriptor {
    GroupKind kind = GroupKind::IntegerLine;
    int rank = 1;  // lattice dimension; 1 for the line kinds

    static GroupDescriptor integer_line() { return {GroupKind::IntegerLine, 1}; }
    static GroupDescriptor lex_lattice(int d) {
        if (d < 1) throw std::invalid_argument("lex_lattice: rank must be >= 1");
        return {GroupKind::LexLattice, d};
    }
    static GroupDescriptor dyadic_line() { return {GroupKind::DyadicLine, 1}; }

    friend bool operator==(const GroupDescriptor&, const GroupDescriptor&) = default;
};

// Canonical exact element of one of the three groups.  `coords` holds the
// integer value (size 1) for IntegerLine, the d lattice coordinates for
// LexLattice, and the dyadic numerator for DyadicLine with denominator
// 2^den_exp.
struct GroupElement {
    GroupKind kind = GroupKind::IntegerLine;
    std::vector<std::int64_t> coords{0};
    std::uint32_t den_exp = 0;

    friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

namespace detail {

inline std::int64_t checked_shift(std::int64_t v, std::uint32_t sh) {
    __int128 wide = static_cast<__int128>(v) << sh;
    if (wide > INT64_MAX || wide < INT64_MIN)
        throw std::overflow_error("dyadic arithmetic overflow");
    return static_cast<std::int64_t>(wide);
}

inline void canonicalize_dyadic(std::int64_t& num, std::uint32_t& exp) {
    if (num == 0) { exp = 0; return; }
    while (exp > 0 && (num & 1) == 0) { num >>= 1; --exp; }
}

}  // namespace detail

inline GroupElement identity_element(const GroupDescriptor& g) {
    GroupElement e;
    e.kind = g.kind;
    e.coords.assign(static_cast<std::size_t>(g.rank), 0);
    return e;
}

inline GroupElement line_element(std::int64_t k) {
    return GroupElement{GroupKind::IntegerLine, {k}, 0};
}

inline GroupElement lattice_element(std::vector<std::int64_t> coords) {
    if (coords.empty()) throw std::invalid_argument("lattice_element: empty coordinates");
    return GroupElement{GroupKind::LexLattice, std::move(coords), 0};
}

// numerator / 2^exponent, reduced on construction.
inline GroupElement dyadic_element(std::int64_t numerator, std::uint32_t exponent) {
    detail::canonicalize_dyadic(numerator, exponent);
    return GroupElement{GroupKind::DyadicLine, {numerator}, exponent};
}

inline void require_member(const GroupDescriptor& g, const GroupElement& x) {
    if (x.kind != g.kind)
        throw std::invalid_argument("group element does not belong to this group kind");
    if (x.coords.size() != static_cast<std::size_t>(g.rank))
        throw std::invalid_argument("group element rank mismatch");
}

inline void require_same_group(const GroupDescriptor& g, const GroupElement& x,
                               const GroupElement& y) {
    require_member(g, x);
    require_member(g, y);
}

inline Ordering compare(const GroupDescriptor& g, const GroupElement& x, const GroupElement& y) {
    require_same_group(g, x, y);
    switch (g.kind) {
        case GroupKind::IntegerLine:
        case GroupKind::LexLattice:
            for (std::size_t i = 0; i < x.coords.size(); ++i) {
                if (x.coords[i] < y.coords[i]) return Ordering::Less;
                if (x.coords[i] > y.coords[i]) return Ordering::Greater;
            }
            return Ordering::Equal;
        case GroupKind::DyadicLine: {
            // a/2^e vs b/2^f  <=>  a*2^f vs b*2^e, exactly in 128-bit.
            __int128 lhs = static_cast<__int128>(x.coords[0]) << y.den_exp;
            __int128 rhs = static_cast<__int128>(y.coords[0]) << x.den_exp;
            if (lhs < rhs) return Ordering::Less;
            if (lhs > rhs) return Ordering::Greater;
            return Ordering::Equal;
        }
    }
    throw std::logic_error("unreachable");
}

inline bool less(const GroupDescriptor& g, const GroupElement& x, const GroupElement& y) {
    return compare(g, x, y) == Ordering::Less;
}

inline GroupElement add(const GroupDescriptor& g, const GroupElement& x, const GroupElement& y) {
    require_same_group(g, x, y);
    if (g.kind == GroupKind::DyadicLine) {
        std::uint32_t e = std::max(x.den_exp, y.den_exp);
        std::int64_t num = detail::checked_shift(x.coords[0], e - x.den_exp) +
                           detail::checked_shift(y.coords[0], e - y.den_exp);
        return dyadic_element(num, e);
    }
    GroupElement r = x;
    for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] += y.coords[i];
    return r;
}

inline GroupElement negate(const GroupDescriptor& g, const GroupElement& x) {
    require_member(g, x);
    GroupElement r = x;
    for (auto& c : r.coords) c = -c;
    return r;
}

inline GroupElement subtract(const GroupDescriptor& g, const GroupElement& x,
                             const GroupElement& y) {
    return add(g, x, negate(g, y));
}

inline GroupElement scale(const GroupDescriptor& g, const GroupElement& x, std::int64_t n) {
    require_member(g, x);
    if (g.kind == GroupKind::DyadicLine) {
        __int128 wide = static_cast<__int128>(x.coords[0]) * n;
        if (wide > INT64_MAX || wide < INT64_MIN)
            throw std::overflow_error("dyadic arithmetic overflow");
        return dyadic_element(static_cast<std::int64_t>(wide), x.den_exp);
    }
    GroupElement r = x;
    for (auto& c : r.coords) c *= n;
    return r;
}

inline bool is_identity(const GroupElement& x) {
    return std::all_of(x.coords.begin(), x.coords.end(), [](std::int64_t c) { return c == 0; });
}

// x >= identity in the group order, i.e. x in X_+.
inline bool in_cone(const GroupDescriptor& g, const GroupElement& x) {
    return compare(g, x, identity_element(g)) != Ordering::Less;
}

inline bool strictly_positive(const GroupDescriptor& g, const GroupElement& x) {
    return compare(g, x, identity_element(g)) == Ordering::Greater;
}

// Least element of X_+ \ {chi_0}, when one exists.
inline std::optional<GroupElement> first_positive(const GroupDescriptor& g) {
    switch (g.kind) {
        case GroupKind::IntegerLine:
            return line_element(1);
        case GroupKind::LexLattice: {
            GroupElement e = identity_element(g);
            e.coords.back() = 1;  // (0,...,0,1): any smaller positive point would be lex-negative
            return e;
        }
        case GroupKind::DyadicLine:
            return std::nullopt;  // 1/2^n decreases to 0
    }
    throw std::logic_error("unreachable");
}

// n such that x = n * chi_1 with n >= 0, when x lies on the cyclic sub-cone.
inline std::optional<std::int64_t> cyclic_index(const GroupDescriptor& g, const GroupElement& x) {
    require_member(g, x);
    auto chi1 = first_positive(g);
    if (!chi1) throw std::invalid_argument("group has no first positive element");
    if (!in_cone(g, x)) throw std::invalid_argument("element is not in the positive cone");
    switch (g.kind) {
        case GroupKind::IntegerLine:
            return x.coords[0];
        case GroupKind::LexLattice: {
            for (std::size_t i = 0; i + 1 < x.coords.size(); ++i)
                if (x.coords[i] != 0) return std::nullopt;
            return x.coords.back();
        }
        default:
            throw std::logic_error("unreachable");
    }
}

inline bool in_cyclic_cone(const GroupDescriptor& g, const GroupElement& x) {
    return cyclic_index(g, x).has_value();
}

// ---------------------------------------------------------------------------
// Finite cone windows

struct LineBounds {
    std::int64_t max_value = 0;  // window = {0, 1, ..., max_value}
};

struct BoxBounds {
    // inclusive [lo, hi] per coordinate; the window is the cone part of the box
    std::vector<std::pair<std::int64_t, std::int64_t>> coord_range;
};

struct DyadicBounds {
    std::uint32_t max_exponent = 0;  // denominators up to 2^max_exponent
    std::int64_t max_value = 0;      // window = {k / 2^max_exponent : 0 <= k <= max_value * 2^max_exponent}
};

using WindowBounds = std::variant<LineBounds, BoxBounds, DyadicBounds>;

// Sorted finite slice of X_+ starting at chi_0.  Enumeration is deterministic:
// equal bounds produce identical element lists.
class ConeWindow {
  public:
    ConeWindow(GroupDescriptor g, std::vector<GroupElement> sorted_elements)
        : group_(g), elements_(std::move(sorted_elements)) {
        if (elements_.empty() || !is_identity(elements_.front()))
            throw std::invalid_argument("cone window must start at the identity");
        for (std::size_t i = 0; i + 1 < elements_.size(); ++i)
            if (compare(group_, elements_[i], elements_[i + 1]) != Ordering::Less)
                throw std::invalid_argument("cone window elements must be strictly increasing");
    }

    const GroupDescriptor& group() const { return group_; }

    // All window elements, chi_0 first.
    std::span<const GroupElement> elements() const { return elements_; }

    // Window elements without chi_0 (the minus-side labels).
    std::span<const GroupElement> positive_elements() const {
        return std::span<const GroupElement>(elements_).subspan(1);
    }

    std::size_t size() const { return elements_.size(); }

    std::optional<std::size_t> index_of(const GroupElement& x) const {
        auto it = std::lower_bound(
            elements_.begin(), elements_.end(), x,
            [&](const GroupElement& a, const GroupElement& b) { return less(group_, a, b); });
        if (it == elements_.end() || !(*it == x)) return std::nullopt;
        return static_cast<std::size_t>(it - elements_.begin());
    }

    bool contains(const GroupElement& x) const { return index_of(x).has_value(); }

  private:
    GroupDescriptor group_;
    std::vector<GroupElement> elements_;
};

inline ConeWindow enumerate_window(const GroupDescriptor& g, const WindowBounds& bounds) {
    std::vector<GroupElement> out;
    switch (g.kind) {
        case GroupKind::IntegerLine: {
            const auto& b = std::get<LineBounds>(bounds);
            for (std::int64_t k = 0; k <= b.max_value; ++k) out.push_back(line_element(k));
            if (out.empty()) out.push_back(identity_element(g));
            break;
        }
        case GroupKind::LexLattice: {
            const auto& b = std::get<BoxBounds>(bounds);
            if (b.coord_range.size() != static_cast<std::size_t>(g.rank))
                throw std::invalid_argument("box bounds rank mismatch");
            std::vector<std::int64_t> point(b.coord_range.size());
            auto recurse = [&](auto&& self, std::size_t dim) -> void {
                if (dim == point.size()) {
                    GroupElement e{GroupKind::LexLattice, point, 0};
                    if (in_cone(g, e)) out.push_back(std::move(e));
                    return;
                }
                auto [lo, hi] = b.coord_range[dim];
                for (std::int64_t v = lo; v <= hi; ++v) {
                    point[dim] = v;
                    self(self, dim + 1);
                }
            };
            recurse(recurse, 0);
            std::sort(out.begin(), out.end(), [&](const GroupElement& a, const GroupElement& b2) {
                return less(g, a, b2);
            });
            if (out.empty() || !is_identity(out.front()))
                out.insert(out.begin(), identity_element(g));
            break;
        }
        case GroupKind::DyadicLine: {
            const auto& b = std::get<DyadicBounds>(bounds);
            std::int64_t steps = detail::checked_shift(std::max<std::int64_t>(b.max_value, 0),
                                                       b.max_exponent);
            for (std::int64_t k = 0; k <= steps; ++k)
                out.push_back(dyadic_element(k, b.max_exponent));
            if (out.empty()) out.push_back(identity_element(g));
            break;
        }
    }
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return ConeWindow(g, std::move(out));
}

// Canonical textual form used as matrix row/column labels: "3", "(1,-2)", "3/4".
inline std::string to_label(const GroupElement& x) {
    switch (x.kind) {
        case GroupKind::IntegerLine:
            return std::to_string(x.coords[0]);
        case GroupKind::LexLattice: {
            std::string s = "(";
            for (std::size_t i = 0; i < x.coords.size(); ++i) {
                if (i) s += ',';
                s += std::to_string(x.coords[i]);
            }
            s += ')';
            return s;
        }
        case GroupKind::DyadicLine: {
            if (x.den_exp == 0) return std::to_string(x.coords[0]);
            return std::to_string(x.coords[0]) + "/" +
                   std::to_string(std::int64_t{1} << x.den_exp);
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace muhankel
