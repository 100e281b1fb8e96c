// evolve.hpp: closed-system (Schrödinger) and open-system (Lindblad)
// dynamics under a ramp schedule plus an optional CD drive.
//
// All integrators are classical RK4 on a uniform grid with the Hamiltonian
// rebuilt exactly at t, t + dt/2 and t + dt. States are never renormalized:
// norm and trace drift are left visible as the integration-error witness.

#pragma once

#include "jclcd/cd.hpp"
#include "jclcd/lattice.hpp"

#include <vector>

namespace jclcd {

struct IntegratorConfig {
    int steps = 1 << 14;
    // 0 selects steps / 512 (or 1 for fewer than 512 steps).
    int record_every = 0;
    // Repeat the run with twice the steps and require agreement within 1e-10.
    bool convergence_check = false;

    // Throws ConfigError unless steps >= 256 is a power of two and
    // record_every divides steps.
    void validate() const;
    int effective_record_every() const noexcept;
};

struct DecoherenceRates {
    double gamma = 0.0;  // qubit damping
    double kappa = 0.0;  // cavity decay

    bool closed() const noexcept { return gamma == 0.0 && kappa == 0.0; }
};

struct Trajectory {
    DrivePlan drive = DrivePlan::None;
    std::vector<double> times;
    std::vector<ComplexVector> states;
    std::vector<CouplingSample> couplings;
    std::vector<double> im_gl;  // Im g_CD^(0) at each recorded time (NaN where undefined)
    // Max |amplitude| difference against the double-step run; negative when not checked.
    double convergence_error = -1.0;
};

struct PositivityWarning {
    double t;
    double min_eigenvalue;
};

struct DensityTrajectory {
    DrivePlan drive = DrivePlan::None;
    DecoherenceRates rates;
    std::vector<double> times;
    std::vector<ComplexMatrix> states;  // (2N+1)x(2N+1), index 0 = vacuum
    std::vector<CouplingSample> couplings;
    std::vector<double> im_gl;
    std::vector<PositivityWarning> positivity_warnings;  // min eigenvalue < -1e-9
    double convergence_error = -1.0;
};

// w_{0,-} at the t = 0 couplings.
ComplexVector initial_ground_state(const LatticeSpec& spec, const RampSchedule& schedule);

// Dense 2N x 2N RK4 integration of dψ/dt = -i H_t(t) ψ.
Trajectory evolve_schrodinger(const LatticeSpec& spec, const RampSchedule& schedule, DrivePlan drive,
                              const ComplexVector& psi0, const IntegratorConfig& cfg = {});

// Same dynamics as N independent 2x2 systems in the fixed mode basis.
Trajectory evolve_blockwise(const LatticeSpec& spec, const RampSchedule& schedule, DrivePlan drive,
                            const ComplexVector& psi0, const IntegratorConfig& cfg = {});

// |ψ><ψ| embedded in the (2N+1)-dimensional space with the vacuum at index 0.
ComplexMatrix embed_pure_state(const ComplexVector& psi);
ComplexMatrix vacuum_state(const LatticeSpec& spec);

// Lindblad equation with rank-one jumps |vac><photon_j| (rate κ) and
// |vac><qubit_j| (rate γ) on every site.
DensityTrajectory evolve_lindblad(const LatticeSpec& spec, const RampSchedule& schedule, DrivePlan drive,
                                  const ComplexMatrix& rho0, const DecoherenceRates& rates,
                                  const IntegratorConfig& cfg = {});

// Master-equation right-hand side for a fixed Hamiltonian `h` already
// embedded in the (2N+1)-dimensional space.
ComplexMatrix lindblad_rhs(const ComplexMatrix& h, const RealVector& jump_rates, const ComplexMatrix& rho);

// H_t embedded with a zero vacuum row and column.
ComplexMatrix embed_hamiltonian(const ComplexMatrix& h_excitation);

// Per-basis-state decay rates (index 0 = vacuum, rate 0).
RealVector jump_rates(const LatticeSpec& spec, const DecoherenceRates& rates);

}  // namespace jclcd
