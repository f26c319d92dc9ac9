#pragma once

// Finite atomic measures on the unit disk and their moment sequences.
// Moments of atomic measures are exact (up to floating rounding), which keeps
// every downstream oracle free of quadrature error.

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace muhankel {

using cplx = std::complex<double>;

enum class DiskDomain {
    Open,   // atoms strictly inside the disk
    Closed  // boundary atoms allowed
};

struct DiskAtom {
    cplx location;
    cplx weight;
};

class DiskMeasure {
  public:
    DiskMeasure(DiskDomain domain, std::vector<DiskAtom> atoms)
        : domain_(domain), atoms_(std::move(atoms)) {
        for (const auto& a : atoms_) {
            double r = std::abs(a.location);
            if (domain_ == DiskDomain::Open && r >= 1.0)
                throw std::invalid_argument("open-disk measure requires |zeta| < 1");
            if (domain_ == DiskDomain::Closed && r > 1.0 + 1e-12)
                throw std::invalid_argument("closed-disk measure requires |zeta| <= 1");
        }
    }

    DiskDomain domain() const { return domain_; }
    std::span<const DiskAtom> atoms() const { return atoms_; }

    // n-th moment, summed in atom order.
    cplx moment(std::size_t n) const {
        cplx s = 0.0;
        for (const auto& a : atoms_) s += a.weight * pow_n(a.location, n);
        return s;
    }

    double total_variation() const {
        double s = 0.0;
        for (const auto& a : atoms_) s += std::abs(a.weight);
        return s;
    }

    double max_radius() const {
        double r = 0.0;
        for (const auto& a : atoms_) r = std::max(r, std::abs(a.location));
        return r;
    }

  private:
    static cplx pow_n(cplx z, std::size_t n) {
        cplx r = 1.0;
        while (n) {
            if (n & 1) r *= z;
            z *= z;
            n >>= 1;
        }
        return r;
    }

    DiskDomain domain_;
    std::vector<DiskAtom> atoms_;
};

// l2 norm of the full moment sequence (gamma_n)_{n>=0}:
//   sum_n |gamma_n|^2 = sum_{i,j} w_i conj(w_j) / (1 - zeta_i conj(zeta_j)).
// Divergent (nullopt) when any atom sits on the boundary.
inline std::optional<double> moment_l2_norm(const DiskMeasure& m) {
    if (m.max_radius() >= 1.0 - 1e-15) return std::nullopt;
    cplx s = 0.0;
    for (const auto& ai : m.atoms())
        for (const auto& aj : m.atoms())
            s += ai.weight * std::conj(aj.weight) /
                 (1.0 - ai.location * std::conj(aj.location));
    double v = s.real();  // imaginary part cancels pairwise
    return std::sqrt(std::max(v, 0.0));
}

}  // namespace muhankel
