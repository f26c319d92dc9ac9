#pragma once

// Executable checks for the operator identities, norm bounds, series
// representations and Neumann-series solvers realized by this library.
//
// Truncation policy: identities that involve shifts are asserted on interior
// index pairs only — those whose shifted indices stay inside the window — so
// a check never fails merely because mass left the truncation.  Each report
// carries the interior fraction so callers can detect windows that are too
// small to be meaningful.

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include <muhankel/operator_core.hpp>

namespace muhankel {

struct ResidualReport {
    double max_abs_residual = 0.0;
    std::size_t num_entries_checked = 0;
    double interior_fraction = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct BoundReport {
    double norm = 0.0;
    double bound = 0.0;
    double factor_norm = 0.0;   // ||mu|| resp. ||nu||
    double symbol_norm = 0.0;   // ||a||
    bool factor_closed_form = false;
    bool symbol_square_summable = true;
    double tolerance = 0.0;
    bool pass = false;
};

namespace detail {

inline ResidualReport interior_residual(const TruncatedOperator& lhs,
                                        const TruncatedOperator& rhs,
                                        const std::vector<bool>& row_ok,
                                        const std::vector<bool>& col_ok, double tol) {
    ResidualReport rep;
    rep.tolerance = tol;
    for (std::size_t j = 0; j < col_ok.size(); ++j) {
        if (!col_ok[j]) continue;
        for (std::size_t i = 0; i < row_ok.size(); ++i) {
            if (!row_ok[i]) continue;
            double d = std::abs(lhs.entries(static_cast<Eigen::Index>(i),
                                            static_cast<Eigen::Index>(j)) -
                                rhs.entries(static_cast<Eigen::Index>(i),
                                            static_cast<Eigen::Index>(j)));
            rep.max_abs_residual = std::max(rep.max_abs_residual, d);
            ++rep.num_entries_checked;
        }
    }
    std::size_t total = row_ok.size() * col_ok.size();
    rep.interior_fraction = total ? double(rep.num_entries_checked) / double(total) : 0.0;
    rep.pass = rep.max_abs_residual <= tol;
    return rep;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Boundedness bounds

// ||A_{mu,a}|| <= ||mu||_{l2(X_+)} ||a||_{l2(X_+ \ {chi_0})}.  The bound uses
// the true full-cone norms where a closed form exists; otherwise the windowed
// norm, which still dominates the truncated operator norm.
inline BoundReport check_boundedness_bound(const Semicharacter& mu, const SymbolFunction& a,
                                           const ConeWindow& w, double tol) {
    BoundReport rep;
    rep.tolerance = tol;
    auto op = build_mu_hankel(mu, a, w);
    rep.norm = spectral_norm(op);
    if (auto closed = mu.l2_norm_cone()) {
        rep.factor_norm = *closed;
        rep.factor_closed_form = true;
    } else {
        rep.factor_norm = l2_norm_on_cone(mu, w, /*exclude_identity=*/false);
    }
    if (auto full = a.l2_norm_cone()) {
        rep.symbol_norm = *full;
    } else {
        rep.symbol_square_summable = false;
        rep.symbol_norm = std::numeric_limits<double>::infinity();
    }
    rep.bound = rep.factor_norm * rep.symbol_norm;
    rep.pass = rep.norm <= rep.bound + tol;
    return rep;
}

// ||B_{nu,a}|| <= ||nu||_{l2(X_+ \ {chi_0})} ||a||_{l2(X_+ \ {chi_0})};
// stated for groups with a first positive element.
inline BoundReport check_nu_bound(const Semicharacter& nu, const SymbolFunction& a,
                                  const ConeWindow& w, double tol) {
    if (!first_positive(w.group()))
        throw std::invalid_argument("nu-bound check requires a first positive element");
    BoundReport rep;
    rep.tolerance = tol;
    auto op = build_mu_nu_hankel(Semicharacter::one(w.group()), nu, a, w);
    rep.norm = spectral_norm(op);
    if (auto closed = nu.l2_norm_cone()) {
        // drop the chi_0 term: |nu(chi_0)|^2 = 1
        rep.factor_norm = std::sqrt(std::max(*closed * *closed - 1.0, 0.0));
        rep.factor_closed_form = true;
    } else {
        rep.factor_norm = l2_norm_on_cone(nu, w, /*exclude_identity=*/true);
    }
    if (auto full = a.l2_norm_cone()) {
        rep.symbol_norm = *full;
    } else {
        rep.symbol_square_summable = false;
        rep.symbol_norm = std::numeric_limits<double>::infinity();
    }
    rep.bound = rep.factor_norm * rep.symbol_norm;
    rep.pass = rep.norm <= rep.bound + tol;
    return rep;
}

// ---------------------------------------------------------------------------
// Operator equations

// A S_chi = mu(chi) P_- S_chi A, checked entrywise on interior index pairs.
inline ResidualReport check_generalized_hankel_equation(const TruncatedOperator& op,
                                                        const Semicharacter& mu,
                                                        const GroupElement& chi,
                                                        const ConeWindow& w, double tol = 1e-12) {
    const auto& g = w.group();
    if (!in_cone(g, chi)) throw std::invalid_argument("shift element must lie in X_+");
    if (op.domain_side != Side::Plus || op.codomain_side != Side::Minus)
        throw std::invalid_argument("expected a plus -> minus operator");
    auto lhs = compose(op, unilateral_shift(w, chi));
    auto rhs = scale(mu(chi), compose(compressed_shift_minus(w, chi), op));
    std::vector<bool> row_ok(op.rows.size()), col_ok(op.cols.size());
    for (std::size_t i = 0; i < op.rows.size(); ++i)
        row_ok[i] = w.contains(add(g, op.rows[i], chi));
    for (std::size_t j = 0; j < op.cols.size(); ++j)
        col_ok[j] = w.contains(add(g, op.cols[j], chi));
    return detail::interior_residual(lhs, rhs, row_ok, col_ok, tol);
}

// S_chibar^* B = nu(chi) B S_chi, the nu-side operator equation.
inline ResidualReport check_nu_equation(const TruncatedOperator& op, const Semicharacter& nu,
                                        const GroupElement& chi, const ConeWindow& w,
                                        double tol = 1e-12) {
    const auto& g = w.group();
    if (!in_cone(g, chi)) throw std::invalid_argument("shift element must lie in X_+");
    if (op.domain_side != Side::Plus || op.codomain_side != Side::Minus)
        throw std::invalid_argument("expected a plus -> minus operator");
    auto lhs = compose(compressed_shift_minus(w, chi), op);
    auto rhs = scale(nu(chi), compose(op, unilateral_shift(w, chi)));
    std::vector<bool> row_ok(op.rows.size()), col_ok(op.cols.size());
    for (std::size_t i = 0; i < op.rows.size(); ++i)
        row_ok[i] = w.contains(add(g, op.rows[i], chi));
    for (std::size_t j = 0; j < op.cols.size(); ++j)
        col_ok[j] = w.contains(add(g, op.cols[j], chi));
    return detail::interior_residual(lhs, rhs, row_ok, col_ok, tol);
}

// ---------------------------------------------------------------------------
// Unimodular factorization A = H U

struct UnimodularFactorization {
    TruncatedOperator hankel;   // H[xi, chi] = a(chi + xi)
    TruncatedOperator unitary;  // diag(mu(chi)) over the plus window
};

inline UnimodularFactorization factor_unimodular(const Semicharacter& mu, const SymbolFunction& a,
                                                 const ConeWindow& w, double tol = 1e-12) {
    if (!mu.is_unimodular_on(w, tol))
        throw std::invalid_argument("factor_unimodular requires |mu(chi)| = 1 on the window");
    UnimodularFactorization f{build_mu_hankel(Semicharacter::one(w.group()), a, w),
                              make_operator(w, Side::Plus, Side::Plus)};
    std::vector<cplx> diag_values;
    diag_values.reserve(w.size());
    for (const auto& chi : w.elements()) diag_values.push_back(mu(chi));
    f.unitary = diagonal(w, Side::Plus, diag_values);
    return f;
}

// ---------------------------------------------------------------------------
// Neumann-series solvers

// n_terms making the series tail r^{n+1} lead/(1-r) fall below tol.
inline int default_neumann_terms(double ratio, double lead_norm, double tol) {
    if (ratio <= 0.0 || lead_norm <= 0.0) return 0;
    if (ratio >= 1.0) throw std::invalid_argument("series ratio must be < 1");
    double n = std::ceil(std::log(tol * (1.0 - ratio) / lead_norm) / std::log(ratio));
    if (n < 0.0) return 0;
    if (n > 1e6) return 1000000;
    return static_cast<int>(n);
}

struct NeumannSolution {
    TruncatedOperator solution;
    double operator_norm = 0.0;  // ||Q|| resp. ||R||
    int n_terms = 0;
    double tail_bound = 0.0;
    ResidualReport residual;
};

// Q X = X S_{chi_1} with ||Q|| < 1; X = sum_n (Q^n phi_0) (x) chi_1^n.
// Series terms whose column label leaves the window vanish on the window, so
// n_terms is capped at the largest multiple of chi_1 inside the window.
inline NeumannSolution solve_neumann_forward(const TruncatedOperator& q_op,
                                             const WindowVector& phi0, const ConeWindow& w,
                                             int n_terms = -1, double tol = 1e-10) {
    const auto& g = w.group();
    auto chi1 = first_positive(g);
    if (!chi1) throw std::invalid_argument("Neumann solver requires a first positive element");
    if (q_op.domain_side != Side::Minus || q_op.codomain_side != Side::Minus)
        throw std::invalid_argument("Q must act on the minus window");
    if (phi0.side != Side::Minus || !same_labels(phi0.labels, q_op.cols))
        throw std::invalid_argument("phi_0 must be a minus-window vector");

    NeumannSolution out;
    out.operator_norm = spectral_norm(q_op);
    if (out.operator_norm >= 1.0)
        throw std::invalid_argument("Neumann series requires ||Q|| < 1");

    int max_in_window = 0;
    while (w.contains(scale(g, *chi1, max_in_window + 1))) ++max_in_window;
    if (n_terms < 0) n_terms = default_neumann_terms(out.operator_norm, phi0.norm(), tol);
    out.n_terms = std::min(n_terms, max_in_window);

    out.solution = make_operator(w, Side::Plus, Side::Minus);
    WindowVector v = phi0;
    for (int n = 0; n <= out.n_terms; ++n) {
        auto e = basis_vector(w, Side::Plus, scale(g, *chi1, n));
        out.solution = add(out.solution, rank_one(v, e));
        if (n < out.n_terms) v = apply(q_op, v);
    }

    double r = out.operator_norm;
    out.tail_bound = (r < 1.0)
                         ? std::pow(r, double(out.n_terms + 1)) * phi0.norm() / (1.0 - r)
                         : std::numeric_limits<double>::infinity();

    auto lhs = compose(q_op, out.solution);
    auto rhs = compose(out.solution, unilateral_shift(w, *chi1));
    std::vector<bool> row_ok(out.solution.rows.size(), true);
    std::vector<bool> col_ok(out.solution.cols.size());
    for (std::size_t j = 0; j < out.solution.cols.size(); ++j)
        col_ok[j] = w.contains(add(g, out.solution.cols[j], *chi1));
    out.residual = detail::interior_residual(lhs, rhs, row_ok, col_ok, out.tail_bound + tol);
    return out;
}

// R Y = Y S_{conj(chi_1)} with ||R|| < 1; Y = sum_n (R^n psi_1) (x) conj(chi_1)^{n+1}.
inline NeumannSolution solve_neumann_backward(const TruncatedOperator& r_op,
                                              const WindowVector& psi1, const ConeWindow& w,
                                              int n_terms = -1, double tol = 1e-10) {
    const auto& g = w.group();
    auto chi1 = first_positive(g);
    if (!chi1) throw std::invalid_argument("Neumann solver requires a first positive element");
    if (r_op.domain_side != Side::Plus || r_op.codomain_side != Side::Plus)
        throw std::invalid_argument("R must act on the plus window");
    if (psi1.side != Side::Plus || !same_labels(psi1.labels, r_op.cols))
        throw std::invalid_argument("psi_1 must be a plus-window vector");

    NeumannSolution out;
    out.operator_norm = spectral_norm(r_op);
    if (out.operator_norm >= 1.0)
        throw std::invalid_argument("Neumann series requires ||R|| < 1");

    int max_in_window = 0;  // columns carry labels (n+1) chi_1
    while (w.contains(scale(g, *chi1, max_in_window + 2))) ++max_in_window;
    if (n_terms < 0) n_terms = default_neumann_terms(out.operator_norm, psi1.norm(), tol);
    out.n_terms = std::min(n_terms, max_in_window);

    TruncatedOperator sum;
    sum.group = g;
    sum.domain_side = Side::Minus;
    sum.codomain_side = Side::Plus;
    sum.rows = window_labels(w, Side::Plus);
    sum.cols = window_labels(w, Side::Minus);
    sum.entries = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(sum.rows.size()),
                                         static_cast<Eigen::Index>(sum.cols.size()));
    WindowVector v = psi1;
    for (int n = 0; n <= out.n_terms; ++n) {
        auto e = basis_vector(w, Side::Minus, scale(g, *chi1, n + 1));
        sum = add(sum, rank_one(v, e));
        if (n < out.n_terms) v = apply(r_op, v);
    }
    out.solution = std::move(sum);

    double r = out.operator_norm;
    out.tail_bound = (r < 1.0)
                         ? std::pow(r, double(out.n_terms + 1)) * psi1.norm() / (1.0 - r)
                         : std::numeric_limits<double>::infinity();

    auto lhs = compose(r_op, out.solution);
    auto rhs = compose(out.solution, shift_minus(w, *chi1));
    std::vector<bool> row_ok(out.solution.rows.size(), true);
    std::vector<bool> col_ok(out.solution.cols.size());
    for (std::size_t j = 0; j < out.solution.cols.size(); ++j)
        col_ok[j] = w.contains(add(g, out.solution.cols[j], *chi1));
    out.residual = detail::interior_residual(lhs, rhs, row_ok, col_ok, out.tail_bound + tol);
    return out;
}

// ---------------------------------------------------------------------------
// Structure theorems (series reconstructions)

struct StructureReport {
    TruncatedOperator series;
    TruncatedOperator direct;
    std::vector<WindowVector> vectors;  // phi_0.. (small case) resp. psi_1.. (large case)
    int n_terms = 0;
    double max_abs_diff_on_ray = 0.0;
    double max_abs_off_ray = 0.0;
    double nuclear = 0.0;
    double nuclear_bound = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

// |q| < 1: A = sum_n q^n phi_n (x) chi_1^n with <phi_n, conj(xi)> = a(chi_1^n xi),
// compared against the direct cyclic-supported build.
inline StructureReport reconstruct_small_mu(const cplx& q, const SymbolFunction& a,
                                            const ConeWindow& w, int n_terms = -1,
                                            double tol = 1e-10) {
    const auto& g = w.group();
    auto chi1 = first_positive(g);
    if (!chi1) throw std::invalid_argument("structure theorem requires a first positive element");
    if (std::abs(q) >= 1.0) throw std::invalid_argument("reconstruct_small_mu requires |q| < 1");

    StructureReport rep;
    rep.tolerance = tol;

    auto make_phi = [&](int n) {
        WindowVector phi = zero_vector(w, Side::Minus);
        GroupElement base = scale(g, *chi1, n);
        for (std::size_t i = 0; i < phi.labels.size(); ++i)
            phi.coeffs[static_cast<Eigen::Index>(i)] = a(add(g, base, phi.labels[i]));
        return phi;
    };

    int max_in_window = 0;
    while (w.contains(scale(g, *chi1, max_in_window + 1))) ++max_in_window;
    auto phi0 = make_phi(0);
    if (n_terms < 0) n_terms = default_neumann_terms(std::abs(q), phi0.norm(), tol);
    rep.n_terms = std::min(n_terms, max_in_window);

    rep.series = make_operator(w, Side::Plus, Side::Minus);
    for (int n = 0; n <= rep.n_terms; ++n) {
        auto phi = (n == 0) ? phi0 : make_phi(n);
        auto e = basis_vector(w, Side::Plus, scale(g, *chi1, n));
        rep.series = add(rep.series, scale(detail::ipow(q, n), rank_one(phi, e)));
        rep.vectors.push_back(std::move(phi));
    }

    rep.direct = build_mu_hankel(Semicharacter(g, CyclicSupported{q}), a, w);

    for (std::size_t j = 0; j < rep.series.cols.size(); ++j) {
        bool on_ray = in_cyclic_cone(g, rep.series.cols[j]);
        for (Eigen::Index i = 0; i < rep.series.n_rows(); ++i) {
            double d = std::abs(rep.series.entries(i, static_cast<Eigen::Index>(j)) -
                                rep.direct.entries(i, static_cast<Eigen::Index>(j)));
            if (on_ray)
                rep.max_abs_diff_on_ray = std::max(rep.max_abs_diff_on_ray, d);
            else
                rep.max_abs_off_ray = std::max(
                    rep.max_abs_off_ray,
                    std::abs(rep.series.entries(i, static_cast<Eigen::Index>(j))));
        }
    }

    rep.nuclear = nuclear_norm(rep.series);
    rep.nuclear_bound = phi0.norm() / (1.0 - std::abs(q));
    rep.pass = rep.max_abs_diff_on_ray <= tol && rep.max_abs_off_ray == 0.0 &&
               rep.nuclear <= rep.nuclear_bound + 1e-8;
    return rep;
}

// |mu(chi_1)| > 1: A = sum_{n>=1} (1/mu(chi_1))^{n-1} conj(chi_1)^n (x) psi_n with
// <psi_n, chi> = conj(mu(chi_1^{n-1} chi) a(chi_1^n chi)).  The symbol must be
// supported in the cyclic sub-cone; that is the necessity half of the theorem.
inline StructureReport reconstruct_large_mu(const Semicharacter& mu, const SymbolFunction& a,
                                            const ConeWindow& w, int n_terms = -1,
                                            double tol = 1e-10) {
    const auto& g = w.group();
    auto chi1 = first_positive(g);
    if (!chi1) throw std::invalid_argument("structure theorem requires a first positive element");
    cplx q1 = mu(*chi1);
    if (std::abs(q1) <= 1.0)
        throw std::invalid_argument("reconstruct_large_mu requires |mu(chi_1)| > 1");
    if (!a.moment_backed()) {
        for (const auto& [xi, v] : a.sparse_entries())
            if (v != cplx(0.0) && !in_cyclic_cone(g, xi))
                throw std::invalid_argument(
                    "symbol support must lie in the cyclic sub-cone X_+^i \\ {chi_0}: "
                    "a bounded operator with |mu(chi_1)| > 1 forces a = 0 off the sub-cone "
                    "(offending element " +
                    to_label(xi) + ")");
    }
    // moment-backed symbols live on Z, where the cyclic sub-cone is all of X_+

    StructureReport rep;
    rep.tolerance = tol;

    auto make_psi = [&](int n) {  // n >= 1
        WindowVector psi = zero_vector(w, Side::Plus);
        GroupElement lower = scale(g, *chi1, n - 1);
        GroupElement upper = scale(g, *chi1, n);
        for (std::size_t j = 0; j < psi.labels.size(); ++j) {
            cplx value = mu(add(g, lower, psi.labels[j])) * a(add(g, upper, psi.labels[j]));
            psi.coeffs[static_cast<Eigen::Index>(j)] = std::conj(value);
        }
        return psi;
    };

    int max_in_window = 0;
    while (w.contains(scale(g, *chi1, max_in_window + 1))) ++max_in_window;
    auto psi1 = make_psi(1);
    if (n_terms < 0) n_terms = 1 + default_neumann_terms(1.0 / std::abs(q1), psi1.norm(), tol);
    rep.n_terms = std::min(n_terms, max_in_window);

    rep.series = make_operator(w, Side::Plus, Side::Minus);
    for (int n = 1; n <= rep.n_terms; ++n) {
        auto psi = (n == 1) ? psi1 : make_psi(n);
        auto e = basis_vector(w, Side::Minus, scale(g, *chi1, n));
        rep.series = add(rep.series, scale(detail::ipow(1.0 / q1, n - 1), rank_one(e, psi)));
        rep.vectors.push_back(std::move(psi));
    }

    rep.direct = build_mu_hankel(mu, a, w);

    for (std::size_t i = 0; i < rep.series.rows.size(); ++i) {
        bool on_ray = in_cyclic_cone(g, rep.series.rows[i]);
        for (Eigen::Index j = 0; j < rep.series.n_cols(); ++j) {
            double d = std::abs(rep.series.entries(static_cast<Eigen::Index>(i), j) -
                                rep.direct.entries(static_cast<Eigen::Index>(i), j));
            if (on_ray)
                rep.max_abs_diff_on_ray = std::max(rep.max_abs_diff_on_ray, d);
            else
                rep.max_abs_off_ray =
                    std::max(rep.max_abs_off_ray,
                             std::abs(rep.series.entries(static_cast<Eigen::Index>(i), j)));
        }
    }

    rep.nuclear = nuclear_norm(rep.series);
    rep.nuclear_bound = std::abs(q1) * psi1.norm() / (std::abs(q1) - 1.0);
    rep.pass = rep.max_abs_diff_on_ray <= tol && rep.max_abs_off_ray == 0.0 &&
               rep.nuclear <= rep.nuclear_bound + 1e-8;
    return rep;
}

}  // namespace muhankel
