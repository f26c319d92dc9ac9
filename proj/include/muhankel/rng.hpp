#pragma once

// Deterministic seeded randomness for property checks.  The raw engine output
// is mapped to doubles directly so streams do not depend on the standard
// library's distribution implementations.

#include <cstdint>
#include <random>

#include <muhankel/operator_core.hpp>

namespace muhankel {

class SeededRng {
  public:
    explicit SeededRng(std::uint64_t seed) : eng_(seed) {}

    double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }  // [0, 1)
    double symmetric() { return 2.0 * unit() - 1.0; }                        // [-1, 1)
    cplx complex_box() { return {symmetric(), symmetric()}; }
    cplx complex_disk(double max_radius) {
        while (true) {
            cplx z = complex_box();
            if (std::abs(z) <= 1.0) return max_radius * z;
        }
    }
    std::uint64_t integer(std::uint64_t bound) { return eng_() % bound; }

  private:
    std::mt19937_64 eng_;
};

inline WindowVector random_vector(const ConeWindow& w, Side side, SeededRng& rng) {
    WindowVector v = zero_vector(w, side);
    for (Eigen::Index i = 0; i < v.coeffs.size(); ++i) v.coeffs[i] = rng.complex_box();
    return v;
}

inline TruncatedOperator random_operator(const ConeWindow& w, Side domain, Side codomain,
                                         SeededRng& rng) {
    auto t = make_operator(w, domain, codomain);
    for (Eigen::Index i = 0; i < t.n_rows(); ++i)
        for (Eigen::Index j = 0; j < t.n_cols(); ++j) t.entries(i, j) = rng.complex_box();
    return t;
}

}  // namespace muhankel
