// lattice.hpp: geometry, coupling ramps and the single-excitation Hamiltonian
// of a one-dimensional Jaynes-Cummings lattice.
//
// Basis convention: the 2N-dimensional single-excitation space is ordered
// site by site, photon first: index 2(j-1) is "photon on site j", index
// 2(j-1)+1 is "qubit excited on site j". Site numbers in the public API are
// 1-based.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <utility>

namespace jclcd {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

enum class Boundary { Periodic, Open };

// b in the block matrix: 1 closes the ring, 0 leaves the chain open.
constexpr int boundary_index(Boundary b) noexcept { return b == Boundary::Periodic ? 1 : 0; }

const char* to_string(Boundary b) noexcept;
Boundary parse_boundary(const char* text);

enum class Flavor { Photon = 0, Qubit = 1 };

class LatticeSpec {
public:
    // Throws SizeError (N < 3 periodic, N < 2 open) or NonFiniteError.
    LatticeSpec(int n_sites, Boundary boundary, double delta);

    int n_sites() const noexcept { return n_sites_; }
    Boundary boundary() const noexcept { return boundary_; }
    double delta() const noexcept { return delta_; }
    int dim() const noexcept { return 2 * n_sites_; }

    friend bool operator==(const LatticeSpec&, const LatticeSpec&) = default;

private:
    int n_sites_;
    Boundary boundary_;
    double delta_;
};

inline LatticeSpec make_lattice_spec(int n, Boundary boundary, double delta) {
    return LatticeSpec(n, boundary, delta);
}

struct CouplingSample {
    double t;
    double g;
    double j;
    double dg;  // dg/dt
    double dj;  // dJ/dt
};

// Linear ramps g(t) = g0 + t (gf - g0)/T and J(t) = J0 + t (jf - j0)/T.
class RampSchedule {
public:
    RampSchedule(double g0, double gf, double j0, double jf, double total_time);

    double g0() const noexcept { return g0_; }
    double gf() const noexcept { return gf_; }
    double j0() const noexcept { return j0_; }
    double jf() const noexcept { return jf_; }
    double total_time() const noexcept { return total_time_; }
    double g_rate() const noexcept { return (gf_ - g0_) / total_time_; }
    double j_rate() const noexcept { return (jf_ - j0_) / total_time_; }

    // Same endpoints with a different duration.
    RampSchedule with_total_time(double total_time) const {
        return RampSchedule(g0_, gf_, j0_, jf_, total_time);
    }

    friend bool operator==(const RampSchedule&, const RampSchedule&) = default;

private:
    double g0_, gf_, j0_, jf_, total_time_;
};

// Throws RangeError for t outside [0, T].
CouplingSample couplings_at(const RampSchedule& schedule, double t);

// Linear basis index of (site, flavor); throws RangeError if site is not in [1, N].
int basis_index(const LatticeSpec& spec, int site, Flavor flavor);
std::pair<int, Flavor> basis_site(const LatticeSpec& spec, int index);

// Onsite qubit-cavity coupling operator V_g restricted to the single-excitation space.
RealMatrix coupling_operator(const LatticeSpec& spec);
// Photon hopping operator V_J (note the minus sign: H_r contains J * V_J).
RealMatrix hopping_operator(const LatticeSpec& spec);

// Adiabatic Hamiltonian H_r(g, J), 2N x 2N.
ComplexMatrix assemble_hr(const LatticeSpec& spec, double g, double j);

bool is_hermitian(const ComplexMatrix& m, double tol = 1e-12);

}  // namespace jclcd
