#pragma once

// Truncated operator matrices between the windowed bases of H^2(G) and
// H^2_-(G).  A plus-side basis vector is a cone character chi; a minus-side
// basis vector is conj(xi) for strictly positive xi, and is labeled by xi.
//
// Entry convention: entries(i, j) is the coefficient of basis vector rows[i]
// in the image of basis vector cols[j]; the inner product is conjugate-linear
// in the second slot.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include <muhankel/ordered_group.hpp>
#include <muhankel/symbols.hpp>

namespace muhankel {

enum class Side { Plus, Minus };

inline std::vector<GroupElement> window_labels(const ConeWindow& w, Side side) {
    auto span = (side == Side::Plus) ? w.elements() : w.positive_elements();
    return {span.begin(), span.end()};
}

namespace detail {

inline std::optional<std::size_t> label_index(const GroupDescriptor& g,
                                              const std::vector<GroupElement>& labels,
                                              const GroupElement& x) {
    auto it = std::lower_bound(labels.begin(), labels.end(), x,
                               [&](const GroupElement& a, const GroupElement& b) {
                                   return less(g, a, b);
                               });
    if (it == labels.end() || !(*it == x)) return std::nullopt;
    return static_cast<std::size_t>(it - labels.begin());
}

}  // namespace detail

struct WindowVector {
    GroupDescriptor group;
    Side side = Side::Plus;
    std::vector<GroupElement> labels;
    Eigen::VectorXcd coeffs;

    double norm() const { return coeffs.norm(); }
};

inline WindowVector zero_vector(const ConeWindow& w, Side side) {
    WindowVector v{w.group(), side, window_labels(w, side), {}};
    v.coeffs = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(v.labels.size()));
    return v;
}

inline WindowVector basis_vector(const ConeWindow& w, Side side, const GroupElement& at) {
    WindowVector v = zero_vector(w, side);
    auto idx = detail::label_index(w.group(), v.labels, at);
    if (!idx) throw std::invalid_argument("basis element is not a window label on this side");
    v.coeffs[static_cast<Eigen::Index>(*idx)] = 1.0;
    return v;
}

struct TruncatedOperator {
    GroupDescriptor group;
    Side domain_side = Side::Plus;
    Side codomain_side = Side::Minus;
    std::vector<GroupElement> rows;  // codomain labels
    std::vector<GroupElement> cols;  // domain labels
    Eigen::MatrixXcd entries;

    Eigen::Index n_rows() const { return entries.rows(); }
    Eigen::Index n_cols() const { return entries.cols(); }
};

inline TruncatedOperator make_operator(const ConeWindow& w, Side domain, Side codomain) {
    TruncatedOperator t;
    t.group = w.group();
    t.domain_side = domain;
    t.codomain_side = codomain;
    t.rows = window_labels(w, codomain);
    t.cols = window_labels(w, domain);
    t.entries = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(t.rows.size()),
                                       static_cast<Eigen::Index>(t.cols.size()));
    return t;
}

inline bool same_labels(const std::vector<GroupElement>& a, const std::vector<GroupElement>& b) {
    return a == b;
}

// ---------------------------------------------------------------------------
// Builders

// M[xi, chi] = mu(chi) nu(xi) a(chi + xi); a evaluates to 0 off its support.
inline TruncatedOperator build_mu_nu_hankel(const Semicharacter& mu, const Semicharacter& nu,
                                            const SymbolFunction& a, const ConeWindow& w) {
    if (!(mu.group() == w.group()) || !(nu.group() == w.group()) || !(a.group() == w.group()))
        throw std::invalid_argument("mu, nu, a and the window must share one group");
    auto t = make_operator(w, Side::Plus, Side::Minus);
    const auto& g = w.group();
    std::vector<cplx> mu_col(t.cols.size()), nu_row(t.rows.size());
    for (std::size_t j = 0; j < t.cols.size(); ++j) mu_col[j] = mu(t.cols[j]);
    for (std::size_t i = 0; i < t.rows.size(); ++i) nu_row[i] = nu(t.rows[i]);
    for (std::size_t j = 0; j < t.cols.size(); ++j)
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            GroupElement sum = add(g, t.cols[j], t.rows[i]);
            t.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                mu_col[j] * nu_row[i] * a(sum);
        }
    return t;
}

inline TruncatedOperator build_mu_hankel(const Semicharacter& mu, const SymbolFunction& a,
                                         const ConeWindow& w) {
    return build_mu_nu_hankel(mu, Semicharacter::one(w.group()), a, w);
}

// The four shift compressions used by the operator equations.  Images that
// leave the window are dropped.
//
//   S_chi        : plus  -> plus,  eta     |-> eta + chi
//   S_chi^*      : plus  -> plus,  eta     |-> eta - chi   (0 unless eta - chi in X_+)
//   S_chibar     : minus -> minus, conj xi |-> conj(xi + chi)
//   P_- S_chi    : minus -> minus, conj xi |-> conj(xi - chi)  (0 unless xi - chi > 0);
//                  this is also S_chibar^*.
enum class ShiftKind { RaisePlus, LowerPlus, RaiseMinus, LowerMinus };

inline TruncatedOperator shift_matrix(const ConeWindow& w, const GroupElement& chi,
                                      ShiftKind kind) {
    const auto& g = w.group();
    require_member(g, chi);
    if (!in_cone(g, chi)) throw std::invalid_argument("shift element must lie in X_+");
    Side side = (kind == ShiftKind::RaisePlus || kind == ShiftKind::LowerPlus) ? Side::Plus
                                                                               : Side::Minus;
    bool raise = (kind == ShiftKind::RaisePlus || kind == ShiftKind::RaiseMinus);
    auto t = make_operator(w, side, side);
    for (std::size_t j = 0; j < t.cols.size(); ++j) {
        GroupElement target = raise ? add(g, t.cols[j], chi) : subtract(g, t.cols[j], chi);
        auto i = detail::label_index(g, t.rows, target);
        if (i) t.entries(static_cast<Eigen::Index>(*i), static_cast<Eigen::Index>(j)) = 1.0;
    }
    return t;
}

inline TruncatedOperator unilateral_shift(const ConeWindow& w, const GroupElement& chi) {
    return shift_matrix(w, chi, ShiftKind::RaisePlus);
}
inline TruncatedOperator unilateral_shift_adjoint(const ConeWindow& w, const GroupElement& chi) {
    return shift_matrix(w, chi, ShiftKind::LowerPlus);
}
inline TruncatedOperator shift_minus(const ConeWindow& w, const GroupElement& chi) {
    return shift_matrix(w, chi, ShiftKind::RaiseMinus);
}
inline TruncatedOperator compressed_shift_minus(const ConeWindow& w, const GroupElement& chi) {
    return shift_matrix(w, chi, ShiftKind::LowerMinus);
}

// (f (x) y) x = <x, y> f, i.e. the matrix f y^*.
inline TruncatedOperator rank_one(const WindowVector& f, const WindowVector& y) {
    if (!(f.group == y.group)) throw std::invalid_argument("rank_one: group mismatch");
    TruncatedOperator t;
    t.group = f.group;
    t.domain_side = y.side;
    t.codomain_side = f.side;
    t.rows = f.labels;
    t.cols = y.labels;
    t.entries = f.coeffs * y.coeffs.adjoint();
    return t;
}

inline TruncatedOperator identity_on(const ConeWindow& w, Side side) {
    auto t = make_operator(w, side, side);
    t.entries.setIdentity();
    return t;
}

inline TruncatedOperator diagonal(const ConeWindow& w, Side side,
                                  const std::vector<cplx>& values) {
    auto t = make_operator(w, side, side);
    if (values.size() != t.cols.size())
        throw std::invalid_argument("diagonal: value count mismatch");
    for (std::size_t j = 0; j < values.size(); ++j)
        t.entries(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = values[j];
    return t;
}

// ---------------------------------------------------------------------------
// Algebra

inline TruncatedOperator compose(const TruncatedOperator& a, const TruncatedOperator& b) {
    if (!(a.group == b.group) || a.domain_side != b.codomain_side ||
        !same_labels(a.cols, b.rows))
        throw std::invalid_argument("compose: inner bases do not match");
    TruncatedOperator t;
    t.group = a.group;
    t.domain_side = b.domain_side;
    t.codomain_side = a.codomain_side;
    t.rows = a.rows;
    t.cols = b.cols;
    t.entries = a.entries * b.entries;
    return t;
}

inline TruncatedOperator add(const TruncatedOperator& a, const TruncatedOperator& b) {
    if (!(a.group == b.group) || a.domain_side != b.domain_side ||
        a.codomain_side != b.codomain_side || !same_labels(a.rows, b.rows) ||
        !same_labels(a.cols, b.cols))
        throw std::invalid_argument("add: operators live on different bases");
    TruncatedOperator t = a;
    t.entries += b.entries;
    return t;
}

inline TruncatedOperator subtract(const TruncatedOperator& a, const TruncatedOperator& b) {
    TruncatedOperator nb = b;
    nb.entries = -nb.entries;
    return add(a, nb);
}

inline TruncatedOperator scale(const cplx& c, const TruncatedOperator& a) {
    TruncatedOperator t = a;
    t.entries *= c;
    return t;
}

inline TruncatedOperator adjoint(const TruncatedOperator& a) {
    TruncatedOperator t;
    t.group = a.group;
    t.domain_side = a.codomain_side;
    t.codomain_side = a.domain_side;
    t.rows = a.cols;
    t.cols = a.rows;
    t.entries = a.entries.adjoint();
    return t;
}

inline WindowVector apply(const TruncatedOperator& a, const WindowVector& x) {
    if (!(a.group == x.group) || a.domain_side != x.side || !same_labels(a.cols, x.labels))
        throw std::invalid_argument("apply: vector basis does not match operator domain");
    return WindowVector{a.group, a.codomain_side, a.rows, a.entries * x.coeffs};
}

inline cplx trace(const TruncatedOperator& a) {
    if (a.domain_side != a.codomain_side || !same_labels(a.rows, a.cols))
        throw std::invalid_argument("trace requires identical row and column bases");
    cplx s = 0.0;  // index order, for reproducibility
    for (Eigen::Index i = 0; i < a.n_rows(); ++i) s += a.entries(i, i);
    return s;
}

inline TruncatedOperator submatrix(const TruncatedOperator& a,
                                   const std::vector<GroupElement>& rows,
                                   const std::vector<GroupElement>& cols) {
    TruncatedOperator t;
    t.group = a.group;
    t.domain_side = a.domain_side;
    t.codomain_side = a.codomain_side;
    t.rows = rows;
    t.cols = cols;
    t.entries.resize(static_cast<Eigen::Index>(rows.size()),
                     static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto ri = detail::label_index(a.group, a.rows, rows[i]);
        if (!ri) throw std::invalid_argument("submatrix: row label missing");
        for (std::size_t j = 0; j < cols.size(); ++j) {
            auto cj = detail::label_index(a.group, a.cols, cols[j]);
            if (!cj) throw std::invalid_argument("submatrix: column label missing");
            t.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                a.entries(static_cast<Eigen::Index>(*ri), static_cast<Eigen::Index>(*cj));
        }
    }
    return t;
}

// Largest square block common to rows and cols, in label order.
inline TruncatedOperator leading_square_block(const TruncatedOperator& a) {
    std::vector<GroupElement> common;
    for (const auto& r : a.rows)
        if (detail::label_index(a.group, a.cols, r)) common.push_back(r);
    return submatrix(a, common, common);
}

inline double max_abs(const TruncatedOperator& a) {
    if (a.entries.size() == 0) return 0.0;
    return a.entries.cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const TruncatedOperator& a, const TruncatedOperator& b) {
    return max_abs(subtract(a, b));
}

// ---------------------------------------------------------------------------
// Spectral quantities

inline std::vector<double> singular_values(const TruncatedOperator& a) {
    if (a.entries.size() == 0) return {};
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(a.entries);
    const auto& sv = svd.singularValues();
    return {sv.data(), sv.data() + sv.size()};
}

// Dominant singular value by power iteration on T^* T with the deterministic
// all-ones start.  If the start vector happens to be orthogonal to the top
// singular space the iteration stagnates; the documented fallback perturbs
// coordinate 0 by 1e-3 and restarts once.
inline double power_iteration_norm(const TruncatedOperator& a, double tol = 1e-10,
                                   int max_iter = 20000) {
    if (tol <= 0.0) throw std::invalid_argument("power iteration tolerance must be positive");
    const Eigen::Index n = a.n_cols();
    if (n == 0 || a.n_rows() == 0) return 0.0;
    auto run = [&](Eigen::VectorXcd v) -> double {
        v.normalize();
        double sigma = 0.0;
        for (int it = 0; it < max_iter; ++it) {
            Eigen::VectorXcd av = a.entries * v;
            double s = av.norm();
            if (s == 0.0) return 0.0;
            Eigen::VectorXcd w = a.entries.adjoint() * av;
            double wn = w.norm();
            if (wn == 0.0) return s;
            v = w / wn;
            if (std::abs(s - sigma) <= tol * std::max(s, 1e-300)) return s;
            sigma = s;
        }
        return sigma;
    };
    Eigen::VectorXcd start = Eigen::VectorXcd::Ones(n);
    double first = run(start);
    Eigen::VectorXcd perturbed = start;
    perturbed[0] += 1e-3;
    double second = run(perturbed);
    return std::max(first, second);
}

inline double spectral_norm(const TruncatedOperator& a, double tol = 1e-10) {
    if (tol <= 0.0) throw std::invalid_argument("spectral_norm tolerance must be positive");
    if (a.entries.size() == 0) return 0.0;
    if (std::max(a.n_rows(), a.n_cols()) <= 512) {
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(a.entries);
        return svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
    }
    return power_iteration_norm(a, tol);
}

inline double nuclear_norm(const TruncatedOperator& a) {
    double s = 0.0;
    for (double sv : singular_values(a)) s += sv;
    return s;
}

// ---------------------------------------------------------------------------
// The flip reindexing on the circle group

// J is the unitary relabeling conj(chi_j) <-> chi_{j-1} on Z.  Applied to a
// plus->minus operator it yields the plus->plus matrix with identical entries;
// applied to a plus->plus operator it undoes that, so the relabeling is an
// involution.
inline TruncatedOperator flip_reindex(const TruncatedOperator& a) {
    if (a.group.kind != GroupKind::IntegerLine)
        throw std::invalid_argument("flip_reindex is defined on the integer line only");
    if (a.domain_side != Side::Plus)
        throw std::invalid_argument("flip_reindex expects a plus-side domain");
    TruncatedOperator t = a;
    std::int64_t offset = (a.codomain_side == Side::Minus) ? -1 : +1;
    t.codomain_side = (a.codomain_side == Side::Minus) ? Side::Plus : Side::Minus;
    for (auto& r : t.rows) r = line_element(r.coords[0] + offset);
    return t;
}

// ---------------------------------------------------------------------------
// Export

inline void write_csv(std::ostream& os, const TruncatedOperator& a) {
    os << "row,col,re,im\n";
    for (Eigen::Index i = 0; i < a.n_rows(); ++i)
        for (Eigen::Index j = 0; j < a.n_cols(); ++j) {
            const cplx& v = a.entries(i, j);
            os << to_label(a.rows[static_cast<std::size_t>(i)]) << ','
               << to_label(a.cols[static_cast<std::size_t>(j)]) << ',' << v.real() << ','
               << v.imag() << '\n';
        }
}

inline nlohmann::json to_json(const TruncatedOperator& a) {
    nlohmann::json rows = nlohmann::json::array(), cols = nlohmann::json::array();
    for (const auto& r : a.rows) rows.push_back(to_label(r));
    for (const auto& c : a.cols) cols.push_back(to_label(c));
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    for (Eigen::Index i = 0; i < a.n_rows(); ++i) {
        nlohmann::json re_row = nlohmann::json::array(), im_row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < a.n_cols(); ++j) {
            re_row.push_back(a.entries(i, j).real());
            im_row.push_back(a.entries(i, j).imag());
        }
        re.push_back(std::move(re_row));
        im.push_back(std::move(im_row));
    }
    return nlohmann::json{{"rows", rows}, {"cols", cols}, {"re", re}, {"im", im}};
}

}  // namespace muhankel
