#include "jclcd/observables.hpp"

#include "jclcd/errors.hpp"
#include "jclcd/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace jclcd {

namespace {

constexpr double kFidelitySlack = 1e-9;

// Smaller eigenvalue of a 2x2 Hermitian matrix.
double min_eigenvalue(const ModeBlock& m) {
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    return 0.5 * (a + d) - std::hypot(0.5 * (a - d), std::abs(m(0, 1)));
}

}  // namespace

double clamp_fidelity(double f) {
    if (f >= 0.0 && f <= 1.0) return f;
    if (f < 0.0 && f >= -kFidelitySlack) return 0.0;
    if (f > 1.0 && f <= 1.0 + kFidelitySlack) return 1.0;
    throw NumericalIntegrityError("fidelity " + std::to_string(f) + " outside [0, 1]");
}

double ground_fidelity_pure(const LatticeSpec& spec, double g, double j, const ComplexVector& psi) {
    if (psi.size() != spec.dim()) throw DimensionError("state dimension does not match the lattice");
    const ComplexVector w = eigenstate(spec, g, j, 0, Branch::Minus);
    return clamp_fidelity(std::norm(w.dot(psi)));
}

double ground_fidelity_mixed(const LatticeSpec& spec, double g, double j, const ComplexMatrix& rho) {
    const Eigen::Index d = spec.dim();
    if (rho.rows() != d + 1 || rho.cols() != d + 1) {
        throw DimensionError("density matrix dimension does not match the lattice");
    }
    const ComplexVector w = eigenstate(spec, g, j, 0, Branch::Minus);
    const Complex f = w.dot(rho.bottomRightCorner(d, d) * w);
    return clamp_fidelity(f.real());
}

double ground_energy_ht(const LatticeSpec& spec, double g, double j, std::span<const ModeBlock> drive_blocks) {
    if (static_cast<int>(drive_blocks.size()) != spec.n_sites()) {
        throw DimensionError("expected one drive block per mode");
    }
    double lowest = std::numeric_limits<double>::infinity();
    for (int k = 0; k < spec.n_sites(); ++k) {
        const ModeSpectrum m = mode_spectrum(spec, g, j, k);
        ModeBlock block = drive_blocks[k];
        block(0, 0) += m.lambda_plus;
        block(1, 1) += m.lambda_minus;
        lowest = std::min(lowest, min_eigenvalue(block));
    }
    return lowest;
}

EnergyCostSample energy_cost(const LatticeSpec& spec, const RampSchedule& schedule, DrivePlan drive,
                             const ComplexVector& psi, double t) {
    const CouplingSample c = couplings_at(schedule, t);
    const ComplexMatrix h = total_hamiltonian(spec, c, drive);
    const double mean = psi.dot(h * psi).real();
    const std::vector<ModeBlock> blocks = drive_eigen_blocks(spec, c, drive);
    const double eg = ground_energy_ht(spec, c.g, c.j, blocks);
    return {t, mean - eg, eg};
}

ComplexVector w_state_reference(int n) {
    if (n < 2) throw SizeError("W state needs at least two qubits");
    ComplexVector w = ComplexVector::Zero(2 * n);
    const double amp = 1.0 / std::sqrt(static_cast<double>(n));
    for (int s = 0; s < n; ++s) w(2 * s + 1) = amp;
    return w;
}

}  // namespace jclcd
