#pragma once

#include "jclcd/cd.hpp"
#include "jclcd/lattice.hpp"

#include <span>

namespace jclcd {

// Fidelities are clamped into [0, 1] when they overshoot by at most 1e-9;
// anything further out raises NumericalIntegrityError.
double clamp_fidelity(double f);

// |<w_{0,-}(g, J)|ψ>|².
double ground_fidelity_pure(const LatticeSpec& spec, double g, double j, const ComplexVector& psi);

// <w_{0,-}|ρ|w_{0,-}> with the ground state given zero vacuum amplitude.
double ground_fidelity_mixed(const LatticeSpec& spec, double g, double j, const ComplexMatrix& rho);

// Ground energy of H_r + H_drive from the per-mode 2x2 blocks; `drive_blocks`
// are the drive's blocks in each mode's eigenbasis (see drive_eigen_blocks).
double ground_energy_ht(const LatticeSpec& spec, double g, double j, std::span<const ModeBlock> drive_blocks);

struct EnergyCostSample {
    double t;
    double delta_e;
    double ground_energy;
};

// <ψ|H_t(t)|ψ> - E_G(t).
EnergyCostSample energy_cost(const LatticeSpec& spec, const RampSchedule& schedule, DrivePlan drive,
                             const ComplexVector& psi, double t);

// (1/√N) Σ_j |e>_j in the 2N basis; throws SizeError for n < 2.
ComplexVector w_state_reference(int n);

}  // namespace jclcd
