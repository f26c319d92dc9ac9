#include <catch2/catch_amalgamated.hpp>

#include <muhankel/operator_core.hpp>
#include <muhankel/rng.hpp>

#include <cmath>
#include <sstream>

using namespace muhankel;
using Catch::Approx;

namespace {

ConeWindow line_window(std::int64_t n) {
    return enumerate_window(GroupDescriptor::integer_line(), LineBounds{n});
}

SymbolFunction point_mass_symbol(double zeta) {
    DiskMeasure m(DiskDomain::Open, {{cplx(zeta, 0.0), cplx(1.0, 0.0)}});
    return SymbolFunction::from_moments(GroupDescriptor::integer_line(), moments(m));
}

}  // namespace

TEST_CASE("hankel matrix construction", "[operator_core]") {
    auto z = GroupDescriptor::integer_line();
    auto w = line_window(4);

    SECTION("single symbol entry gives a single matrix entry") {
        Semicharacter mu(z, GeometricOnLine{0.5});
        auto a = SymbolFunction::sparse(z, {{line_element(1), cplx(1.0)}});
        auto t = build_mu_hankel(mu, a, w);
        REQUIRE(t.rows.size() == 4);   // xi = 1..4
        REQUIRE(t.cols.size() == 5);   // chi = 0..4
        CHECK(t.entries(0, 0) == cplx(1.0));  // mu(0) a(1)
        CHECK(t.entries.cwiseAbs().sum() == Approx(1.0));
    }

    SECTION("zero symbol gives the zero matrix") {
        Semicharacter mu(z, GeometricOnLine{0.5});
        auto t = build_mu_hankel(mu, SymbolFunction::zero(z), w);
        CHECK(max_abs(t) == 0.0);
    }

    SECTION("mu = 1 with a moment symbol is the classical Hankel matrix") {
        auto a = point_mass_symbol(0.5);
        auto t = build_mu_hankel(Semicharacter::one(z), a, w);
        for (std::size_t i = 0; i < t.rows.size(); ++i)
            for (std::size_t j = 0; j < t.cols.size(); ++j) {
                double expect = std::pow(0.5, double(t.cols[j].coords[0] + t.rows[i].coords[0] - 1));
                CHECK(std::abs(t.entries(Eigen::Index(i), Eigen::Index(j)) - expect) < 1e-15);
            }
    }

    SECTION("group mismatch is rejected") {
        auto lex = GroupDescriptor::lex_lattice(2);
        Semicharacter mu(lex, CyclicSupported{0.5});
        auto a = SymbolFunction::sparse(z, {{line_element(1), cplx(1.0)}});
        CHECK_THROWS_AS(build_mu_hankel(mu, a, w), std::invalid_argument);
    }
}

TEST_CASE("shift matrices", "[operator_core]") {
    auto w = line_window(3);
    auto chi1 = line_element(1);

    SECTION("unilateral shift is the subdiagonal 0/1 matrix") {
        auto s = unilateral_shift(w, chi1);
        REQUIRE(s.n_rows() == 4);
        REQUIRE(s.n_cols() == 4);
        for (Eigen::Index i = 0; i < 4; ++i)
            for (Eigen::Index j = 0; j < 4; ++j)
                CHECK(s.entries(i, j) == cplx(i == j + 1 ? 1.0 : 0.0));
    }

    SECTION("compressed minus shift annihilates xi = chi when the difference is chi_0") {
        auto p = compressed_shift_minus(w, chi1);
        auto e1 = basis_vector(w, Side::Minus, line_element(1));
        auto image = apply(p, e1);
        CHECK(image.coeffs.norm() == 0.0);
    }

    SECTION("compressed minus shift on the lex lattice") {
        auto lex = GroupDescriptor::lex_lattice(2);
        auto wl = enumerate_window(lex, BoxBounds{{{0, 2}, {-2, 2}}});
        auto p = compressed_shift_minus(wl, lattice_element({0, 1}));
        auto e = basis_vector(wl, Side::Minus, lattice_element({1, 0}));
        auto image = apply(p, e);
        auto idx = wl.index_of(lattice_element({1, -1}));
        REQUIRE(idx.has_value());
        double total = image.coeffs.cwiseAbs().sum();
        CHECK(total == Approx(1.0));
        // minus labels drop chi_0, so the coefficient index is shifted by one
        CHECK(image.coeffs[Eigen::Index(*idx - 1)] == cplx(1.0));
    }

    SECTION("shift by a non-cone element is rejected") {
        CHECK_THROWS_AS(unilateral_shift(w, line_element(-1)), std::invalid_argument);
    }
}

TEST_CASE("rank-one operators", "[operator_core]") {
    auto w = line_window(5);

    SECTION("elementary matrix") {
        auto f = basis_vector(w, Side::Minus, line_element(1));
        auto y = basis_vector(w, Side::Plus, line_element(0));
        auto t = rank_one(f, y);
        CHECK(t.entries(0, 0) == cplx(1.0));
        CHECK(t.entries.cwiseAbs().sum() == Approx(1.0));
    }

    SECTION("norm and adjoint properties") {
        SeededRng rng(20250801);
        for (int rep = 0; rep < 20; ++rep) {
            auto f = random_vector(w, Side::Minus, rng);
            auto y = random_vector(w, Side::Plus, rng);
            auto t = rank_one(f, y);
            CHECK(spectral_norm(t) == Approx(f.norm() * y.norm()).margin(1e-10));
            auto lhs = adjoint(t);
            auto rhs = rank_one(y, f);
            CHECK(max_abs_diff(lhs, rhs) == 0.0);  // exact
        }
    }

    SECTION("A (f x y) B = (A f) x (B* y)") {
        SeededRng rng(20250802);
        for (int rep = 0; rep < 20; ++rep) {
            auto f = random_vector(w, Side::Minus, rng);
            auto y = random_vector(w, Side::Plus, rng);
            auto a = random_operator(w, Side::Minus, Side::Minus, rng);
            auto b = random_operator(w, Side::Plus, Side::Plus, rng);
            auto lhs = compose(compose(a, rank_one(f, y)), b);
            auto rhs = rank_one(apply(a, f), apply(adjoint(b), y));
            CHECK(max_abs_diff(lhs, rhs) <= 1e-12);
        }
    }
}

TEST_CASE("spectral quantities", "[operator_core]") {
    auto w = line_window(8);

    SECTION("zero matrix") {
        auto t = make_operator(w, Side::Plus, Side::Minus);
        CHECK(spectral_norm(t) == 0.0);
        CHECK(nuclear_norm(t) == 0.0);
    }

    SECTION("identity-like diagonal") {
        auto w2 = line_window(2);
        auto t = diagonal(w2, Side::Plus, {1.0, 1.0, 1.0});
        CHECK(spectral_norm(t) == Approx(1.0));
        CHECK(nuclear_norm(t) == Approx(3.0));
        CHECK(trace(t) == cplx(3.0));
        auto sv = singular_values(t);
        REQUIRE(sv.size() == 3);
        CHECK(std::is_sorted(sv.rbegin(), sv.rend()));
    }

    SECTION("point-mass example norm matches the closed-form rank-one value") {
        // Derived oracle: M[j,k] = 0.5^k 0.5^{k+j-1} factors as an outer
        // product, so the norm is 1/sqrt((1-0.25)(1-0.0625)).
        auto z = GroupDescriptor::integer_line();
        auto w64 = line_window(64);
        auto t = build_mu_hankel(Semicharacter(z, GeometricOnLine{0.5}), point_mass_symbol(0.5),
                                 w64);
        double oracle = 1.0 / std::sqrt((1.0 - 0.25) * (1.0 - 0.0625));
        CHECK(spectral_norm(t) == Approx(oracle).margin(1e-6));
        CHECK(oracle == Approx(1.1925695879998878).margin(1e-12));
    }

    SECTION("norm chain: spectral <= nuclear <= rank * spectral") {
        SeededRng rng(20250803);
        for (int rep = 0; rep < 10; ++rep) {
            auto t = random_operator(w, Side::Plus, Side::Minus, rng);
            double sn = spectral_norm(t);
            double nn = nuclear_norm(t);
            double rank = double(std::min(t.n_rows(), t.n_cols()));
            CHECK(sn <= nn + 1e-12);
            CHECK(nn <= rank * sn + 1e-9);
        }
    }

    SECTION("power iteration agrees with the SVD route") {
        SeededRng rng(20250804);
        for (int rep = 0; rep < 5; ++rep) {
            auto t = random_operator(w, Side::Plus, Side::Minus, rng);
            double svd_norm = spectral_norm(t);
            double pi_norm = power_iteration_norm(t, 1e-12);
            CHECK(pi_norm == Approx(svd_norm).epsilon(1e-8));
        }
    }
}

TEST_CASE("trace rejects mismatched bases", "[operator_core]") {
    auto w = line_window(4);
    auto t = make_operator(w, Side::Plus, Side::Minus);
    CHECK_THROWS_AS(trace(t), std::invalid_argument);
}

TEST_CASE("adjoint is an involution", "[operator_core]") {
    auto w = line_window(6);
    SeededRng rng(20250805);
    auto t = random_operator(w, Side::Plus, Side::Minus, rng);
    auto back = adjoint(adjoint(t));
    CHECK(max_abs_diff(t, back) == 0.0);
    CHECK(back.domain_side == t.domain_side);
    CHECK(same_labels(back.rows, t.rows));
}

TEST_CASE("flip reindexing on the circle group", "[operator_core]") {
    auto z = GroupDescriptor::integer_line();
    auto w = line_window(16);
    auto t = build_mu_hankel(Semicharacter(z, GeometricOnLine{0.5}), point_mass_symbol(0.5), w);

    auto flipped = flip_reindex(t);
    CHECK(flipped.codomain_side == Side::Plus);
    // row labeled j becomes j-1 with unchanged entries: (J A)[j,k] = q^k gamma_{k+j}
    for (std::size_t i = 0; i < flipped.rows.size(); ++i)
        for (std::size_t j = 0; j < flipped.cols.size(); ++j) {
            double expect = std::pow(0.5, double(flipped.cols[j].coords[0])) *
                            std::pow(0.5, double(flipped.cols[j].coords[0] +
                                                 flipped.rows[i].coords[0]));
            CHECK(std::abs(flipped.entries(Eigen::Index(i), Eigen::Index(j)) - expect) < 1e-15);
        }

    auto back = flip_reindex(flipped);
    CHECK(back.codomain_side == Side::Minus);
    CHECK(same_labels(back.rows, t.rows));
    CHECK(max_abs_diff(back, t) == 0.0);

    auto zero = make_operator(w, Side::Plus, Side::Minus);
    CHECK(max_abs(flip_reindex(zero)) == 0.0);

    auto lex = GroupDescriptor::lex_lattice(2);
    auto wl = enumerate_window(lex, BoxBounds{{{0, 1}, {-1, 1}}});
    auto tl = make_operator(wl, Side::Plus, Side::Minus);
    CHECK_THROWS_AS(flip_reindex(tl), std::invalid_argument);
}

TEST_CASE("trace of the flipped point-mass operator", "[operator_core]") {
    // Derived oracle: sum_k (q zeta^2)^k = 1/(1 - 0.125) = 8/7.
    auto z = GroupDescriptor::integer_line();
    auto w = line_window(64);
    auto t = build_mu_hankel(Semicharacter(z, GeometricOnLine{0.5}), point_mass_symbol(0.5), w);
    auto ja = leading_square_block(flip_reindex(t));
    CHECK(std::abs(trace(ja) - cplx(8.0 / 7.0)) < 1e-10);
}

TEST_CASE("chi_0 column norm equals the windowed symbol norm", "[operator_core]") {
    auto z = GroupDescriptor::integer_line();
    auto w = line_window(24);
    auto a = point_mass_symbol(0.6);
    auto t = build_mu_hankel(Semicharacter(z, GeometricOnLine{cplx(0.3, 0.4)}), a, w);
    double col_norm = t.entries.col(0).norm();
    CHECK(col_norm == Approx(l2_norm_on_cone(a, w)).margin(1e-12));
}

TEST_CASE("shift identity S S* = I - chi_0 (x) chi_0 on the window interior",
          "[operator_core]") {
    auto check = [](const ConeWindow& w) {
        const auto& g = w.group();
        auto chi1 = *first_positive(g);
        auto s = unilateral_shift(w, chi1);
        auto lhs = compose(s, unilateral_shift_adjoint(w, chi1));
        auto e0 = basis_vector(w, Side::Plus, identity_element(g));
        auto rhs = subtract(identity_on(w, Side::Plus), rank_one(e0, e0));
        for (std::size_t j = 0; j < lhs.cols.size(); ++j) {
            const auto& chi = lhs.cols[j];
            bool interior = is_identity(chi) || w.contains(subtract(g, chi, chi1));
            if (!interior) continue;
            for (Eigen::Index i = 0; i < lhs.n_rows(); ++i)
                CHECK(std::abs(lhs.entries(i, Eigen::Index(j)) - rhs.entries(i, Eigen::Index(j))) ==
                      0.0);
        }
    };
    check(line_window(8));
    auto lex = GroupDescriptor::lex_lattice(2);
    check(enumerate_window(lex, BoxBounds{{{0, 2}, {-2, 2}}}));
}

TEST_CASE("csv and json export", "[operator_core]") {
    auto z = GroupDescriptor::integer_line();
    auto w = line_window(2);
    auto a = SymbolFunction::sparse(z, {{line_element(1), cplx(2.0, -1.0)}});
    auto t = build_mu_hankel(Semicharacter::one(z), a, w);

    std::ostringstream csv;
    write_csv(csv, t);
    CHECK(csv.str().find("row,col,re,im") == 0);
    CHECK(csv.str().find("1,0,2,-1") != std::string::npos);

    auto j = to_json(t);
    CHECK(j["rows"].size() == 2);
    CHECK(j["cols"].size() == 3);
    CHECK(j["re"][0][0] == 2.0);
    CHECK(j["im"][0][0] == -1.0);
}
