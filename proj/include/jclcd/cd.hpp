// cd.hpp: exact and local counterdiabatic (CD) Hamiltonians.
//
// The exact CD Hamiltonian only couples w_{k,+} and w_{k,-} of the same mode,
// with strength g_CD^(k). A purely onsite drive I_N ⊗ [[0, g_L],[g_L*, 0]]
// with Re g_L = 0 has the same 2x2 block in every mode's eigenbasis, so
// choosing g_L = g_CD^(0) reproduces the exact drive on the ground mode.

#pragma once

#include "jclcd/lattice.hpp"
#include "jclcd/spectrum.hpp"

#include <Eigen/Dense>

#include <vector>

namespace jclcd {

using ModeBlock = Eigen::Matrix2cd;

enum class DrivePlan { None, ExactCD, LocalCD };

const char* to_string(DrivePlan d) noexcept;
DrivePlan parse_drive(const char* text);

// g_CD^(k). The hopping term is evaluated as g (-2 cos angle_k) dJ / χ_k²,
// which equals g (Δ_k - Δ) dJ / (J χ_k²) and stays finite at J = 0.
Complex cd_strength(const LatticeSpec& spec, const CouplingSample& c, int k);

// H_CD^(k) = [[0, g_CD],[g_CD*, 0]] in the (w_{k,+}, w_{k,-}) eigenbasis.
ModeBlock exact_cd_eigen_block(const LatticeSpec& spec, const CouplingSample& c, int k);

enum class CdMethod { SpectralSum, ModeBlocks };
enum class EigenSource { Analytic, Jacobi };

// Exact CD Hamiltonian in the real-space basis. ModeBlocks rotates each
// H_CD^(k) into mode coordinates and transforms back to real space.
// SpectralSum evaluates i Σ_{m≠n} |m><m|∂_t H_r|n><n| / (λ_n - λ_m) over
// eigenpairs from `source`; pairs with a nonzero numerator and an energy gap
// below 1e-12 raise DegenerateSpectrumError.
ComplexMatrix exact_cd_matrix(const LatticeSpec& spec, const CouplingSample& c, CdMethod method,
                              EigenSource source = EigenSource::Analytic);

struct LocalCdParams {
    double delta_l = 0.0;
    Complex g_l = 0.0;
};

// I_N ⊗ [[δ, g_L],[g_L*, -δ]].
ComplexMatrix local_cd_matrix(const LatticeSpec& spec, const LocalCdParams& params);

// δ = 0, g_L = g_CD^(0) at the instantaneous couplings.
LocalCdParams local_cd_params_at(const LatticeSpec& spec, const RampSchedule& schedule, double t);
LocalCdParams local_cd_params(const LatticeSpec& spec, const CouplingSample& c);

// Closed-form G^(k) of an onsite drive in the eigenbasis of a doublet with angle θ_k.
ModeBlock local_cd_eigen_block(const LocalCdParams& params, double theta_k);

// G^(k) = W_k† h W_k with W_k = [w_{k,+}, w_{k,-}], for k = 0..N-1.
std::vector<ModeBlock> project_to_mode_blocks(const LatticeSpec& spec, double g, double j,
                                              const ComplexMatrix& h);

// Drive Hamiltonian blocks in each mode's eigenbasis (zero for DrivePlan::None).
std::vector<ModeBlock> drive_eigen_blocks(const LatticeSpec& spec, const CouplingSample& c, DrivePlan drive);

// Total Hamiltonian H_r + H_drive as 2x2 blocks in the fixed mode coordinates
// (R_k ⊗ photon, R_k ⊗ qubit).
std::vector<ModeBlock> total_mode_blocks(const LatticeSpec& spec, const CouplingSample& c, DrivePlan drive);

// Total Hamiltonian H_r + H_drive in the real-space basis.
ComplexMatrix total_hamiltonian(const LatticeSpec& spec, const CouplingSample& c, DrivePlan drive);

}  // namespace jclcd
