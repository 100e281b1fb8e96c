#include <doctest.h>

#include "jclcd/errors.hpp"
#include "jclcd/lattice.hpp"
#include "support/oracles.hpp"

#include <numbers>

using namespace jclcd;
using jclcd::testing::max_abs;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("make_lattice_spec enforces boundary-dependent minimum size") {
    const LatticeSpec four = make_lattice_spec(4, Boundary::Periodic, 1.0);
    CHECK(four.n_sites() == 4);
    CHECK(four.dim() == 8);
    CHECK(boundary_index(four.boundary()) == 1);
    CHECK(boundary_index(Boundary::Open) == 0);

    CHECK_THROWS_AS(make_lattice_spec(2, Boundary::Periodic, 1.0), SizeError);
    CHECK_NOTHROW(make_lattice_spec(2, Boundary::Open, 0.0));
    CHECK_THROWS_AS(make_lattice_spec(1, Boundary::Open, 0.0), SizeError);
    CHECK_THROWS_AS(make_lattice_spec(4, Boundary::Open, std::numeric_limits<double>::infinity()), NonFiniteError);
    CHECK_THROWS_AS(make_lattice_spec(4, Boundary::Open, std::nan("")), NonFiniteError);
}

TEST_CASE("couplings_at evaluates the linear ramps") {
    const RampSchedule fig2(1.0, 1.0, 0.0, 2.0, 0.5 * kPi);
    const CouplingSample start = couplings_at(fig2, 0.0);
    CHECK(start.g == 1.0);
    CHECK(start.j == 0.0);
    CHECK(start.dg == 0.0);
    CHECK(start.dj == doctest::Approx(4.0 / kPi).epsilon(1e-15));

    const CouplingSample end = couplings_at(fig2, fig2.total_time());
    CHECK(end.g == 1.0);
    CHECK(end.j == doctest::Approx(2.0).epsilon(1e-15));

    const RampSchedule fig3(0.0, 1.0, 2.0, 0.0, 0.5 * kPi);
    const CouplingSample w = couplings_at(fig3, 0.0);
    CHECK(w.g == 0.0);
    CHECK(w.j == 2.0);
    CHECK(w.dg == doctest::Approx(2.0 / kPi).epsilon(1e-15));
    CHECK(w.dj == doctest::Approx(-4.0 / kPi).epsilon(1e-15));

    CHECK_THROWS_AS(couplings_at(fig2, -1e-12), RangeError);
    CHECK_THROWS_AS(couplings_at(fig2, fig2.total_time() * 1.0001), RangeError);
    CHECK_THROWS_AS(RampSchedule(0, 1, 0, 1, 0.0), RangeError);
}

TEST_CASE("couplings_at is affine in t") {
    for (int trial = 0; trial < 50; ++trial) {
        const RampSchedule s(testing::uniform(0, 3), testing::uniform(0, 3), testing::uniform(-2, 2),
                             testing::uniform(-2, 2), testing::uniform(0.1, 20));
        const double t1 = testing::uniform(0, s.total_time());
        const double t2 = testing::uniform(0, s.total_time());
        const CouplingSample mid = couplings_at(s, 0.5 * (t1 + t2));
        const double mean_g = 0.5 * (couplings_at(s, t1).g + couplings_at(s, t2).g);
        const double mean_j = 0.5 * (couplings_at(s, t1).j + couplings_at(s, t2).j);
        CHECK(std::abs(mid.g - mean_g) <= 1e-14);
        CHECK(std::abs(mid.j - mean_j) <= 1e-14);
    }
}

TEST_CASE("basis_index is a bijection onto [0, 2N)") {
    const LatticeSpec spec(4, Boundary::Periodic, 1.0);
    CHECK(basis_index(spec, 1, Flavor::Photon) == 0);
    CHECK(basis_index(spec, 3, Flavor::Qubit) == 5);
    CHECK(basis_site(spec, 7) == std::pair{4, Flavor::Qubit});
    for (int i = 0; i < spec.dim(); ++i) {
        const auto [site, flavor] = basis_site(spec, i);
        CHECK(basis_index(spec, site, flavor) == i);
    }
    CHECK_THROWS_AS(basis_index(spec, 0, Flavor::Photon), RangeError);
    CHECK_THROWS_AS(basis_index(spec, 5, Flavor::Qubit), RangeError);
    CHECK_THROWS_AS(basis_site(spec, 8), RangeError);
}

TEST_CASE("assemble_hr block structure") {
    const LatticeSpec pbc(4, Boundary::Periodic, 1.0);
    const ComplexMatrix h = assemble_hr(pbc, 1.0, 2.0);
    const int p1 = basis_index(pbc, 1, Flavor::Photon);
    CHECK(h(p1, basis_index(pbc, 1, Flavor::Qubit)) == Complex(1.0));
    CHECK(h(p1, basis_index(pbc, 2, Flavor::Photon)) == Complex(-2.0));
    CHECK(h(p1, basis_index(pbc, 4, Flavor::Photon)) == Complex(-2.0));
    CHECK(h(p1, p1) == Complex(1.0));
    // Hopping acts on photons only.
    CHECK(h(basis_index(pbc, 1, Flavor::Qubit), basis_index(pbc, 2, Flavor::Qubit)) == Complex(0.0));

    const LatticeSpec obc(4, Boundary::Open, 1.0);
    const ComplexMatrix ho = assemble_hr(obc, 1.0, 2.0);
    CHECK(ho(0, basis_index(obc, 4, Flavor::Photon)) == Complex(0.0));
    CHECK(ho(0, basis_index(obc, 2, Flavor::Photon)) == Complex(-2.0));

    const ComplexMatrix decoupled = assemble_hr(pbc, 0.0, 0.0);
    ComplexMatrix expected = ComplexMatrix::Zero(8, 8);
    for (int s = 0; s < 4; ++s) expected(2 * s, 2 * s) = 1.0;
    CHECK(max_abs(decoupled - expected) == 0.0);
}

TEST_CASE("assemble_hr invariants over random parameters") {
    for (int trial = 0; trial < 100; ++trial) {
        const Boundary bc = trial % 2 ? Boundary::Periodic : Boundary::Open;
        const int n = testing::uniform_int(3, 8);
        const LatticeSpec spec(n, bc, testing::uniform(-2, 2));
        const double g = testing::uniform(-3, 3);
        const double j = testing::uniform(-3, 3);
        const ComplexMatrix h = assemble_hr(spec, g, j);
        CHECK(is_hermitian(h, 1e-12));

        if (bc == Boundary::Periodic) {
            const ComplexMatrix p = testing::site_shift(n);
            CHECK(max_abs(p * h * p.transpose() - h) == 0.0);
        } else {
            // J = 0 leaves N copies of the single-site block.
            const ComplexMatrix h0 = assemble_hr(spec, g, 0.0);
            for (int s = 0; s < n; ++s) {
                CHECK(h0(2 * s, 2 * s) == Complex(spec.delta()));
                CHECK(h0(2 * s, 2 * s + 1) == Complex(g));
                CHECK(h0(2 * s + 1, 2 * s + 1) == Complex(0.0));
            }
            ComplexMatrix blocks = h0;
            for (int s = 0; s < n; ++s) blocks.block<2, 2>(2 * s, 2 * s).setZero();
            CHECK(max_abs(blocks) == 0.0);
        }
    }
}

TEST_CASE("V_g and V_J reproduce H_r") {
    const LatticeSpec spec(5, Boundary::Open, 0.7);
    const ComplexMatrix direct = assemble_hr(spec, 1.3, -0.4);
    ComplexMatrix rebuilt = (1.3 * coupling_operator(spec) - 0.4 * hopping_operator(spec)).cast<Complex>();
    for (int s = 0; s < 5; ++s) rebuilt(2 * s, 2 * s) += 0.7;
    CHECK(max_abs(direct - rebuilt) == 0.0);
}
