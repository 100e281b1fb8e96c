#include <doctest.h>

#include "jclcd/errors.hpp"
#include "jclcd/spectrum.hpp"
#include "support/oracles.hpp"

#include <cmath>
#include <numbers>

using namespace jclcd;
using jclcd::testing::max_abs;

TEST_CASE("mode_detuning") {
    const LatticeSpec pbc(4, Boundary::Periodic, 1.0);
    CHECK(mode_detuning(pbc, 2.0, 0) == doctest::Approx(-3.0).epsilon(1e-15));
    CHECK(std::abs(mode_detuning(pbc, 2.0, 1) - 1.0) <= 1e-15);
    CHECK_THROWS_AS(mode_detuning(pbc, 2.0, 4), RangeError);

    // Oracle: the lowest doublet of the dense open-chain Hamiltonian at g = 0
    // holds the photon mode with the smallest Δ_k.
    const LatticeSpec obc(4, Boundary::Open, 1.0);
    const double expected = -2.2360679774997897;  // 1 - 4 cos(π/5)
    const EigenDecomposition dense = jacobi_eigensystem(assemble_hr(obc, 0.0, 2.0));
    CHECK(std::abs(dense.eigenvalues(0) - expected) <= 1e-12);
    CHECK(std::abs(mode_detuning(obc, 2.0, 0) - expected) <= 1e-14);
}

TEST_CASE("mode_spectrum closed forms") {
    const LatticeSpec pbc(4, Boundary::Periodic, 1.0);
    const ModeSpectrum m = mode_spectrum(pbc, 1.0, 2.0, 0);
    CHECK(std::abs(m.chi_k - std::sqrt(13.0)) <= 1e-14);
    CHECK(std::abs(m.lambda_minus - -3.3027756377319946) <= 1e-14);
    CHECK(std::abs(m.lambda_plus - 0.30277563773199465) <= 1e-14);

    // The Jacobi oracle finds both values among the eight dense eigenvalues.
    const RealVector dense = jacobi_eigensystem(assemble_hr(pbc, 1.0, 2.0)).eigenvalues;
    auto present = [&](double x) { return ((dense.array() - x).abs() < 1e-10).any(); };
    CHECK(present(m.lambda_minus));
    CHECK(present(m.lambda_plus));

    // g -> 0 with Δ_k < 0: the lower state is the bare photon with a minus sign.
    const ModeSpectrum bare = mode_spectrum(pbc, 0.0, 2.0, 0);
    CHECK(bare.theta_k == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
    CHECK(bare.v_minus(0) == -1.0);
    CHECK(std::abs(bare.v_minus(1)) == 0.0);

    // Resonance: Δ_k = 0.
    const LatticeSpec resonant(4, Boundary::Periodic, 0.0);
    const ModeSpectrum r = mode_spectrum(resonant, 0.8, 0.0, 0);
    CHECK(r.theta_k == doctest::Approx(std::numbers::pi / 4).epsilon(1e-15));
    CHECK(std::abs(r.v_plus(0) - (std::numbers::sqrt2 / 2)) <= 1e-15);
    CHECK(std::abs(r.v_plus(1) - (std::numbers::sqrt2 / 2)) <= 1e-15);

    CHECK_THROWS_AS(mode_spectrum(resonant, 0.0, 0.0, 0), DegenerateModeError);
    CHECK_THROWS_AS(mode_spectrum(pbc, -0.1, 1.0, 0), RangeError);
}

TEST_CASE("mode_spectrum invariants") {
    for (int trial = 0; trial < 100; ++trial) {
        const LatticeSpec spec(testing::uniform_int(3, 8), trial % 2 ? Boundary::Periodic : Boundary::Open,
                               testing::uniform(-2, 2));
        const double g = testing::uniform(0.0, 3.0);
        const double j = testing::uniform(-3, 3);
        for (const ModeSpectrum& m : mode_spectra(spec, g, j)) {
            CHECK(m.chi_k >= 0.0);
            CHECK(std::abs(m.chi_k - std::sqrt(m.delta_k * m.delta_k + 4 * g * g)) <= 1e-12);
            CHECK(m.theta_k >= 0.0);
            CHECK(m.theta_k <= std::numbers::pi / 2);
            CHECK(std::abs(m.v_plus.norm() - 1.0) <= 1e-14);
            CHECK(std::abs(m.v_plus.dot(m.v_minus)) <= 1e-15);
            CHECK(m.v_minus(0) <= 0.0);
            CHECK(std::abs(std::cos(m.theta_k) - m.v_plus(0)) <= 1e-14);
            // θ_k is continuous in g away from χ_k = 0.
            const ModeSpectrum nudged = mode_spectrum(spec, g + 1e-8, j, m.k);
            CHECK(std::abs(nudged.theta_k - m.theta_k) <= 1e-6);
        }
    }
}

TEST_CASE("mode_vector") {
    const LatticeSpec pbc(4, Boundary::Periodic, 1.0);
    ComplexVector r0 = mode_vector(pbc, 0);
    for (int s = 0; s < 4; ++s) CHECK(std::abs(r0(s) - 0.5) <= 1e-15);
    ComplexVector r2 = mode_vector(pbc, 2);
    const double expected[] = {0.5, -0.5, 0.5, -0.5};
    for (int s = 0; s < 4; ++s) CHECK(std::abs(r2(s) - expected[s]) <= 1e-15);

    const LatticeSpec obc2(2, Boundary::Open, 0.0);
    const ComplexVector a = mode_vector(obc2, 0);
    const ComplexVector b = mode_vector(obc2, 1);
    CHECK(std::abs(a(0) - (std::numbers::sqrt2 / 2)) <= 1e-15);
    CHECK(std::abs(a(1) - (std::numbers::sqrt2 / 2)) <= 1e-15);
    CHECK(std::abs(a.dot(b)) <= 1e-15);
    CHECK(std::abs(b.norm() - 1.0) <= 1e-15);

    for (int n = 3; n <= 9; ++n) {
        for (Boundary bc : {Boundary::Periodic, Boundary::Open}) {
            const LatticeSpec spec(n, bc, 0.0);
            ComplexMatrix r(n, n);
            for (int k = 0; k < n; ++k) r.col(k) = mode_vector(spec, k);
            CHECK(max_abs(r.adjoint() * r - ComplexMatrix::Identity(n, n)) <= 1e-12);
        }
    }
}

TEST_CASE("eigenstate") {
    const LatticeSpec spec(4, Boundary::Periodic, 1.0);
    const ComplexVector w0 = eigenstate(spec, 0.0, 2.0, 0, Branch::Minus);
    for (int s = 0; s < 4; ++s) {
        CHECK(std::abs(w0(2 * s) - -0.5) <= 1e-15);
        CHECK(std::abs(w0(2 * s + 1)) <= 1e-15);
    }

    // Decoupled sites (J = 0): every site carries v_- / 2 with Δ_k = 1, χ = √5.
    const ComplexVector wf = eigenstate(spec, 1.0, 0.0, 0, Branch::Minus);
    for (int s = 0; s < 4; ++s) {
        CHECK(std::abs(wf(2 * s) - -0.2628655560595668) <= 1e-15);
        CHECK(std::abs(wf(2 * s + 1) - 0.42532540417601999) <= 1e-15);
    }
    const ComplexMatrix hf = assemble_hr(spec, 1.0, 0.0);
    const double lambda = 0.5 * (1.0 - std::sqrt(5.0));
    CHECK((hf * wf - lambda * wf).norm() <= 1e-12);
    const EigenDecomposition dense = jacobi_eigensystem(hf);
    CHECK(std::abs(dense.eigenvalues(0) - lambda) <= 1e-12);
    // Its fourfold-degenerate ground space contains wf.
    const ComplexMatrix ground = dense.eigenvectors.leftCols(4);
    CHECK(std::abs((ground.adjoint() * wf).norm() - 1.0) <= 1e-12);
}

TEST_CASE("eigenstates are orthonormal and satisfy H w = λ w") {
    for (int trial = 0; trial < 60; ++trial) {
        const int n = testing::uniform_int(3, 8);
        const LatticeSpec spec(n, trial % 2 ? Boundary::Periodic : Boundary::Open, testing::uniform(-2, 2));
        const double g = testing::uniform(0.1, 3.0);
        const double j = testing::uniform(0, 3);
        const ComplexMatrix h = assemble_hr(spec, g, j);
        ComplexMatrix w(2 * n, 2 * n);
        for (int k = 0; k < n; ++k) {
            for (Branch b : {Branch::Plus, Branch::Minus}) {
                const ComplexVector v = eigenstate(spec, g, j, k, b);
                const double lambda = mode_spectrum(spec, g, j, k).lambda(b);
                CHECK((h * v - lambda * v).norm() <= 1e-10);
                w.col(2 * k + (b == Branch::Plus ? 0 : 1)) = v;
            }
        }
        CHECK(max_abs(w.adjoint() * w - ComplexMatrix::Identity(2 * n, 2 * n)) <= 1e-10);
    }
}

TEST_CASE("ground mode is k = 0 for J >= 0") {
    for (int trial = 0; trial < 100; ++trial) {
        const LatticeSpec spec(testing::uniform_int(3, 8), trial % 2 ? Boundary::Periodic : Boundary::Open,
                               testing::uniform(-2, 2));
        const double g = testing::uniform(0.1, 3.0);
        const double j = testing::uniform(0.0, 3.0);
        const std::vector<double> all = testing::sorted_analytic_energies(spec, g, j);
        CHECK(mode_spectrum(spec, g, j, 0).lambda_minus == doctest::Approx(all.front()).epsilon(1e-14));
    }
}

TEST_CASE("mode-basis transform is unitary") {
    const LatticeSpec pbc(4, Boundary::Periodic, 1.0);
    ComplexVector uniform_photon = ComplexVector::Zero(8);
    for (int s = 0; s < 4; ++s) uniform_photon(2 * s) = 0.5;
    const ComplexVector modes = to_mode_basis(pbc, uniform_photon);
    CHECK(std::abs(modes(0) - 1.0) <= 1e-15);
    CHECK(modes.tail(7).norm() <= 1e-15);

    for (int trial = 0; trial < 40; ++trial) {
        const int n = testing::uniform_int(3, 10);
        const LatticeSpec spec(n, trial % 2 ? Boundary::Periodic : Boundary::Open, 0.3);
        const ComplexVector psi = testing::random_unit_vector(2 * n);
        const ComplexVector m = to_mode_basis(spec, psi);
        CHECK(std::abs(m.norm() - psi.norm()) <= 1e-12);
        CHECK((from_mode_basis(spec, m) - psi).cwiseAbs().maxCoeff() <= 1e-12);
    }
    CHECK_THROWS_AS(to_mode_basis(pbc, ComplexVector::Zero(6)), DimensionError);
    CHECK_THROWS_AS(from_mode_basis(pbc, ComplexVector::Zero(9)), DimensionError);
}

TEST_CASE("jacobi_eigensystem") {
    ComplexMatrix d = ComplexMatrix::Zero(3, 3);
    d.diagonal() << 1.0, 2.0, 3.0;
    const EigenDecomposition e = jacobi_eigensystem(d);
    CHECK(e.eigenvalues(0) == 1.0);
    CHECK(e.eigenvalues(2) == 3.0);
    CHECK(max_abs(e.eigenvectors - ComplexMatrix::Identity(3, 3)) == 0.0);

    ComplexMatrix ha(2, 2);
    ha << 1.0, 1.0, 1.0, 0.0;
    const EigenDecomposition two = jacobi_eigensystem(ha);
    CHECK(std::abs(two.eigenvalues(0) - -0.6180339887498949) <= 1e-14);
    CHECK(std::abs(two.eigenvalues(1) - 1.6180339887498949) <= 1e-14);

    // Complex Hermitian input: residual and unitarity.
    for (int trial = 0; trial < 20; ++trial) {
        const int n = testing::uniform_int(2, 24);
        ComplexMatrix a(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) a(r, c) = Complex(testing::uniform(-1, 1), testing::uniform(-1, 1));
        const ComplexMatrix h = a + a.adjoint();
        const EigenDecomposition x = jacobi_eigensystem(h);
        const ComplexMatrix& v = x.eigenvectors;
        CHECK(max_abs(h * v - v * x.eigenvalues.cast<Complex>().asDiagonal()) <= 1e-10);
        CHECK(max_abs(v.adjoint() * v - ComplexMatrix::Identity(n, n)) <= 1e-10);
        for (int i = 1; i < n; ++i) CHECK(x.eigenvalues(i - 1) <= x.eigenvalues(i));
    }

    CHECK_THROWS_AS(jacobi_eigensystem(ComplexMatrix::Zero(65, 65)), DimensionError);
    ComplexMatrix skew(2, 2);
    skew << 0.0, 1.0, 0.0, 0.0;
    CHECK_THROWS_AS(jacobi_eigensystem(skew), DimensionError);
}

TEST_CASE("analytic spectrum matches the Jacobi oracle on 200 random lattices") {
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const LatticeSpec spec(testing::uniform_int(3, 8), trial % 2 ? Boundary::Periodic : Boundary::Open,
                               testing::uniform(-2, 2));
        const double g = testing::uniform(0.1, 3.0);
        const double j = testing::uniform(0.0, 3.0);
        const std::vector<double> analytic = testing::sorted_analytic_energies(spec, g, j);
        const RealVector dense = jacobi_eigensystem(assemble_hr(spec, g, j)).eigenvalues;
        for (std::size_t i = 0; i < analytic.size(); ++i) {
            worst = std::max(worst, std::abs(analytic[i] - dense(static_cast<Eigen::Index>(i))));
        }
    }
    CHECK(worst <= 1e-10);
}
