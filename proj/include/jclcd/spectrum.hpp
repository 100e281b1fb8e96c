// spectrum.hpp: closed-form eigensystem of the single-excitation JC lattice
// and an independent dense Jacobi eigensolver used to check it.
//
// Every eigenstate factorizes as w_{k,±} = R_k ⊗ v_{k,±}: R_k is a lattice
// Fourier (periodic) or sine (open) mode and v_{k,±} is the eigenvector of a
// single JC doublet with mode detuning Δ_k. The mode basis {R_k ⊗ e_photon,
// R_k ⊗ e_qubit} does not depend on g or J, so every Hamiltonian in this
// library is 2x2 block diagonal in it.

#pragma once

#include "jclcd/lattice.hpp"

#include <Eigen/Dense>

#include <vector>

namespace jclcd {

enum class Branch { Plus, Minus };

// Lattice momentum angle: 2πk/N (periodic) or π(k+1)/(N+1) (open).
double mode_angle(const LatticeSpec& spec, int k);

// Δ_k = Δ - 2J cos(angle_k).
double mode_detuning(const LatticeSpec& spec, double j, int k);

struct ModeSpectrum {
    int k;
    double delta_k;
    double chi_k;
    double theta_k;       // in [0, π/2]
    double lambda_plus;
    double lambda_minus;
    Eigen::Vector2d v_plus;   // (cos θ, sin θ)
    Eigen::Vector2d v_minus;  // (-sin θ, cos θ)

    double lambda(Branch b) const noexcept { return b == Branch::Plus ? lambda_plus : lambda_minus; }
    const Eigen::Vector2d& v(Branch b) const noexcept { return b == Branch::Plus ? v_plus : v_minus; }
    // Columns (v_plus, v_minus): maps eigen-coordinates of mode k to (photon, qubit) coordinates.
    Eigen::Matrix2d rotation() const {
        Eigen::Matrix2d r;
        r.col(0) = v_plus;
        r.col(1) = v_minus;
        return r;
    }
};

// Throws DegenerateModeError when χ_k = 0 and RangeError for g < 0 (the
// printed eigenvector signs assume a non-negative onsite coupling).
ModeSpectrum mode_spectrum(const LatticeSpec& spec, double g, double j, int k);

// All N modes in order k = 0..N-1.
std::vector<ModeSpectrum> mode_spectra(const LatticeSpec& spec, double g, double j);

// R_k as an N-vector (unit norm).
ComplexVector mode_vector(const LatticeSpec& spec, int k);

// w_{k,branch} = R_k ⊗ v_{k,branch} in the real-space basis.
ComplexVector eigenstate(const LatticeSpec& spec, double g, double j, int k, Branch branch);

// Unitary U whose column 2k+f is R_k ⊗ e_f (f = 0 photon, 1 qubit).
ComplexMatrix mode_transform(const LatticeSpec& spec);

// Coordinates in the mode basis: U† ψ. Throws DimensionError on size mismatch.
ComplexVector to_mode_basis(const LatticeSpec& spec, const ComplexVector& state);
ComplexVector from_mode_basis(const LatticeSpec& spec, const ComplexVector& modes);

struct EigenDecomposition {
    RealVector eigenvalues;     // ascending
    ComplexMatrix eigenvectors;  // columns, unitary
};

// Cyclic complex Jacobi rotations on a Hermitian matrix of dimension <= 64.
// Stops once the off-diagonal Frobenius norm is <= 1e-13 ||H||_F; throws
// ConvergenceError after 50 sweeps.
EigenDecomposition jacobi_eigensystem(const ComplexMatrix& h);

}  // namespace jclcd
