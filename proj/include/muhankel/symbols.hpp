#pragma once

// Semicharacters mu, nu : X_+ -> C, symbol functions a : X_+ \ {chi_0} -> C,
// and moment sequences backing the integral examples.  Everything here is a
// pure value; evaluation never mutates.

#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include <muhankel/disk_measure.hpp>
#include <muhankel/ordered_group.hpp>

namespace muhankel {

namespace detail {

inline cplx ipow(cplx z, std::int64_t n) {
    if (n < 0) {
        if (z == cplx(0.0)) throw std::invalid_argument("0 cannot be raised to a negative power");
        return 1.0 / ipow(z, -n);
    }
    cplx r = 1.0;
    while (n) {
        if (n & 1) r *= z;
        z *= z;
        n >>= 1;
    }
    return r;
}

// Strict weak order on canonical representations, for sparse-map keys.
struct ReprLess {
    bool operator()(const GroupElement& a, const GroupElement& b) const {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.den_exp != b.den_exp) return a.den_exp < b.den_exp;
        return a.coords < b.coords;
    }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Moment sequences gamma_n = integral of zeta^n

class MomentSequence {
  public:
    static MomentSequence from_measure(DiskMeasure m) {
        MomentSequence s;
        s.measure_ = std::move(m);
        return s;
    }

    static MomentSequence explicit_values(std::vector<cplx> values) {
        MomentSequence s;
        s.values_ = std::move(values);
        return s;
    }

    cplx operator[](std::size_t n) const {
        if (measure_) return measure_->moment(n);
        if (n < values_.size()) return values_[n];
        return 0.0;  // explicit lists are finitely supported
    }

    bool measure_backed() const { return measure_.has_value(); }
    const DiskMeasure& measure() const {
        if (!measure_) throw std::logic_error("moment sequence has no backing measure");
        return *measure_;
    }
    std::size_t explicit_length() const { return values_.size(); }

    // Full-sequence l2 norm; nullopt when divergent (boundary atoms).
    std::optional<double> l2_norm() const {
        if (measure_) return moment_l2_norm(*measure_);
        double s = 0.0;
        for (const auto& v : values_) s += std::norm(v);
        return std::sqrt(s);
    }

  private:
    MomentSequence() = default;
    std::optional<DiskMeasure> measure_;
    std::vector<cplx> values_;
};

inline MomentSequence moments(const DiskMeasure& m, std::size_t /*n_max is implicit:
                              measure-backed sequences evaluate any index*/ = 0) {
    return MomentSequence::from_measure(m);
}

// ---------------------------------------------------------------------------
// Semicharacters

// mu(m_1,...,m_d) = prod_i base_i^{m_i} on a lex lattice
struct GeneratorPowers {
    std::vector<cplx> base;
};

// mu(k) = ratio^k on Z
struct GeometricOnLine {
    cplx ratio;
};

// mu(n chi_1) = ratio^n on the cyclic sub-cone, 0 elsewhere (the complement
// of the cyclic sub-cone is an ideal, so this is multiplicative)
struct CyclicSupported {
    cplx ratio;
};

// mu(x) = exp(x log base) for dyadic x, principal branch; base off (-inf, 0]
struct DyadicPower {
    cplx base;
};

class Semicharacter {
  public:
    using Form = std::variant<GeneratorPowers, GeometricOnLine, CyclicSupported, DyadicPower>;

    Semicharacter(GroupDescriptor g, Form form) : group_(g), form_(std::move(form)) {
        if (std::holds_alternative<GeometricOnLine>(form_) && g.kind != GroupKind::IntegerLine)
            throw std::invalid_argument("GeometricOnLine requires the integer line");
        if (auto* gp = std::get_if<GeneratorPowers>(&form_)) {
            if (g.kind != GroupKind::LexLattice ||
                gp->base.size() != static_cast<std::size_t>(g.rank))
                throw std::invalid_argument("GeneratorPowers requires one base per lattice generator");
        }
        if (std::holds_alternative<CyclicSupported>(form_) && !first_positive(g))
            throw std::invalid_argument("CyclicSupported requires a first positive element");
        if (auto* dp = std::get_if<DyadicPower>(&form_)) {
            if (g.kind != GroupKind::DyadicLine)
                throw std::invalid_argument("DyadicPower requires the dyadic line");
            if (dp->base.imag() == 0.0 && dp->base.real() <= 0.0)
                throw std::invalid_argument("DyadicPower base must avoid (-inf, 0]");
        }
    }

    // The constant-one semicharacter in the form natural for the group.
    static Semicharacter one(const GroupDescriptor& g) {
        switch (g.kind) {
            case GroupKind::IntegerLine: return Semicharacter(g, GeometricOnLine{1.0});
            case GroupKind::LexLattice:
                return Semicharacter(
                    g, GeneratorPowers{std::vector<cplx>(static_cast<std::size_t>(g.rank), 1.0)});
            case GroupKind::DyadicLine: return Semicharacter(g, DyadicPower{1.0});
        }
        throw std::logic_error("unreachable");
    }

    const GroupDescriptor& group() const { return group_; }
    const Form& form() const { return form_; }

    cplx operator()(const GroupElement& chi) const {
        require_member(group_, chi);
        if (!in_cone(group_, chi))
            throw std::invalid_argument("semicharacters are defined on the positive cone only");
        return std::visit(
            [&](const auto& f) -> cplx { return eval(f, chi); }, form_);
    }

    // Closed-form l2(X_+) norm over the full cone (including chi_0) when one
    // exists and is finite; nullopt means "use window norms".
    std::optional<double> l2_norm_cone() const {
        if (const auto* geo = std::get_if<GeometricOnLine>(&form_)) {
            double r2 = std::norm(geo->ratio);
            if (r2 < 1.0) return std::sqrt(1.0 / (1.0 - r2));
            return std::nullopt;
        }
        if (const auto* cyc = std::get_if<CyclicSupported>(&form_)) {
            double r2 = std::norm(cyc->ratio);
            if (r2 < 1.0) return std::sqrt(1.0 / (1.0 - r2));
            return std::nullopt;
        }
        return std::nullopt;  // lattice and dyadic powers are never l2 on the full cone
    }

    bool is_unimodular_on(const ConeWindow& w, double tol = 1e-12) const {
        for (const auto& chi : w.elements())
            if (std::abs(std::abs((*this)(chi)) - 1.0) > tol) return false;
        return true;
    }

  private:
    cplx eval(const GeneratorPowers& f, const GroupElement& chi) const {
        cplx v = 1.0;
        for (std::size_t i = 0; i < f.base.size(); ++i) v *= detail::ipow(f.base[i], chi.coords[i]);
        return v;
    }
    cplx eval(const GeometricOnLine& f, const GroupElement& chi) const {
        return detail::ipow(f.ratio, chi.coords[0]);
    }
    cplx eval(const CyclicSupported& f, const GroupElement& chi) const {
        auto n = cyclic_index(group_, chi);
        if (!n) return 0.0;
        return detail::ipow(f.ratio, *n);
    }
    cplx eval(const DyadicPower& f, const GroupElement& chi) const {
        double x = static_cast<double>(chi.coords[0]) /
                   static_cast<double>(std::int64_t{1} << chi.den_exp);
        return std::exp(x * std::log(f.base));
    }

    GroupDescriptor group_;
    Form form_;
};

// Pointwise quotient mu/nu as a semicharacter, for the forms where the
// quotient stays in closed form.  nullopt when it does not.
inline std::optional<Semicharacter> quotient(const Semicharacter& mu, const Semicharacter& nu) {
    if (!(mu.group() == nu.group())) return std::nullopt;
    const auto& g = mu.group();
    const auto *mg = std::get_if<GeometricOnLine>(&mu.form()),
               *ng = std::get_if<GeometricOnLine>(&nu.form());
    const auto *mc = std::get_if<CyclicSupported>(&mu.form()),
               *nc = std::get_if<CyclicSupported>(&nu.form());
    const auto *mp = std::get_if<GeneratorPowers>(&mu.form()),
               *np = std::get_if<GeneratorPowers>(&nu.form());
    const auto *md = std::get_if<DyadicPower>(&mu.form()),
               *nd = std::get_if<DyadicPower>(&nu.form());

    auto ratio_of = [](const auto* f) { return f->ratio; };
    // On Z the cyclic sub-cone is all of X_+, so cyclic and geometric coincide.
    if (g.kind == GroupKind::IntegerLine && (mg || mc) && (ng || nc)) {
        cplx qm = mg ? ratio_of(mg) : ratio_of(mc);
        cplx qn = ng ? ratio_of(ng) : ratio_of(nc);
        if (qn == cplx(0.0)) return std::nullopt;
        return Semicharacter(g, GeometricOnLine{qm / qn});
    }
    if (mp && np) {
        std::vector<cplx> base(mp->base.size());
        for (std::size_t i = 0; i < base.size(); ++i) {
            if (np->base[i] == cplx(0.0)) return std::nullopt;
            base[i] = mp->base[i] / np->base[i];
        }
        return Semicharacter(g, GeneratorPowers{std::move(base)});
    }
    if (mc && np) {
        auto chi1 = first_positive(g);
        cplx v = nu(*chi1);
        if (v == cplx(0.0)) return std::nullopt;
        return Semicharacter(g, CyclicSupported{mc->ratio / v});
    }
    if (md && nd) {
        // exp(x log a)/exp(x log b) = exp(x log(a/b)) only when no branch wrap occurs
        if (std::abs(std::arg(md->base) - std::arg(nd->base)) >= 3.141592653589793)
            return std::nullopt;
        return Semicharacter(g, DyadicPower{md->base / nd->base});
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Symbol functions a : X_+ \ {chi_0} -> C

class SymbolFunction {
  public:
    using SparseMap = std::map<GroupElement, cplx, detail::ReprLess>;

    static SymbolFunction sparse(const GroupDescriptor& g, SparseMap entries) {
        for (const auto& [xi, v] : entries) {
            (void)v;
            if (!strictly_positive(g, xi))
                throw std::invalid_argument("symbol support must be strictly positive");
        }
        SymbolFunction s;
        s.group_ = g;
        s.entries_ = std::move(entries);
        return s;
    }

    // a(chi_k) = gamma_{k-1} on the integer line.
    static SymbolFunction from_moments(const GroupDescriptor& g, MomentSequence gamma) {
        if (g.kind != GroupKind::IntegerLine)
            throw std::invalid_argument("moment symbols live on the integer line");
        SymbolFunction s;
        s.group_ = g;
        s.gamma_ = std::move(gamma);
        return s;
    }

    static SymbolFunction zero(const GroupDescriptor& g) { return sparse(g, {}); }

    const GroupDescriptor& group() const { return group_; }

    cplx operator()(const GroupElement& xi) const {
        require_member(group_, xi);
        if (!strictly_positive(group_, xi))
            throw std::invalid_argument("symbol functions are defined on X_+ \\ {chi_0} only");
        if (gamma_) return (*gamma_)[static_cast<std::size_t>(xi.coords[0] - 1)];
        auto it = entries_.find(xi);
        return it == entries_.end() ? cplx(0.0) : it->second;
    }

    bool moment_backed() const { return gamma_.has_value(); }
    const MomentSequence& moment_sequence() const {
        if (!gamma_) throw std::logic_error("symbol has no moment sequence");
        return *gamma_;
    }
    const SparseMap& sparse_entries() const { return entries_; }

    // Exact full-cone l2 norm when computable: sparse supports sum exactly;
    // moment symbols reduce to the moment-sequence norm.
    std::optional<double> l2_norm_cone() const {
        if (gamma_) return gamma_->l2_norm();
        double s = 0.0;
        for (const auto& [xi, v] : entries_) {
            (void)xi;
            s += std::norm(v);
        }
        return std::sqrt(s);
    }

    bool support_inside(const ConeWindow& w) const {
        if (gamma_) return false;  // moment symbols are infinitely supported in general
        for (const auto& [xi, v] : entries_)
            if (v != cplx(0.0) && !w.contains(xi)) return false;
        return true;
    }

  private:
    SymbolFunction() = default;
    GroupDescriptor group_;
    SparseMap entries_;
    std::optional<MomentSequence> gamma_;
};

// (a*nu)(xi) = a(xi) nu(xi), materialized over the window.
inline SymbolFunction scale_by_semicharacter(const SymbolFunction& a, const Semicharacter& nu,
                                             const ConeWindow& w) {
    SymbolFunction::SparseMap entries;
    for (const auto& xi : w.positive_elements()) {
        cplx v = a(xi) * nu(xi);
        if (v != cplx(0.0)) entries.emplace(xi, v);
    }
    return SymbolFunction::sparse(a.group(), std::move(entries));
}

// ---------------------------------------------------------------------------
// Windowed l2 norms

inline double l2_norm_on_cone(const Semicharacter& f, const ConeWindow& w,
                              bool exclude_identity = false) {
    double s = 0.0;
    for (const auto& chi : w.elements()) {
        if (exclude_identity && is_identity(chi)) continue;
        s += std::norm(f(chi));
    }
    return std::sqrt(s);
}

inline double l2_norm_on_cone(const SymbolFunction& a, const ConeWindow& w) {
    double s = 0.0;
    for (const auto& xi : w.positive_elements()) s += std::norm(a(xi));
    return std::sqrt(s);
}

}  // namespace muhankel
