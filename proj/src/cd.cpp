#include "jclcd/cd.hpp"

#include "jclcd/errors.hpp"

#include <cmath>
#include <cstring>
#include <string>

namespace jclcd {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kGapFloor = 1e-12;

ModeBlock off_diagonal(Complex value) {
    ModeBlock b;
    b << 0.0, value, std::conj(value), 0.0;
    return b;
}

// Eigen-basis block to (photon, qubit) mode coordinates.
ModeBlock to_mode_coordinates(const ModeSpectrum& m, const ModeBlock& eigen_block) {
    const Eigen::Matrix2cd rot = m.rotation().cast<Complex>();
    return rot * eigen_block * rot.transpose();
}

ComplexMatrix from_block_diagonal(const LatticeSpec& spec, const std::vector<ModeBlock>& blocks) {
    const ComplexMatrix u = mode_transform(spec);
    ComplexMatrix diag = ComplexMatrix::Zero(spec.dim(), spec.dim());
    for (int k = 0; k < spec.n_sites(); ++k) diag.block<2, 2>(2 * k, 2 * k) = blocks[k];
    return u * diag * u.adjoint();
}

struct Eigenpair {
    double energy;
    ComplexVector state;
};

std::vector<Eigenpair> eigenpairs(const LatticeSpec& spec, const CouplingSample& c, EigenSource source) {
    std::vector<Eigenpair> out;
    if (source == EigenSource::Analytic) {
        for (int k = 0; k < spec.n_sites(); ++k) {
            for (Branch b : {Branch::Plus, Branch::Minus}) {
                const ModeSpectrum m = mode_spectrum(spec, c.g, c.j, k);
                out.push_back({m.lambda(b), eigenstate(spec, c.g, c.j, k, b)});
            }
        }
    } else {
        const EigenDecomposition e = jacobi_eigensystem(assemble_hr(spec, c.g, c.j));
        for (Eigen::Index i = 0; i < e.eigenvalues.size(); ++i) {
            out.push_back({e.eigenvalues(i), e.eigenvectors.col(i)});
        }
    }
    return out;
}

}  // namespace

const char* to_string(DrivePlan d) noexcept {
    switch (d) {
        case DrivePlan::None: return "none";
        case DrivePlan::ExactCD: return "exact";
        case DrivePlan::LocalCD: return "local";
    }
    return "?";
}

DrivePlan parse_drive(const char* text) {
    if (std::strcmp(text, "none") == 0) return DrivePlan::None;
    if (std::strcmp(text, "exact") == 0) return DrivePlan::ExactCD;
    if (std::strcmp(text, "local") == 0) return DrivePlan::LocalCD;
    throw ConfigError(std::string("unknown drive '") + text + "' (expected none, exact or local)");
}

Complex cd_strength(const LatticeSpec& spec, const CouplingSample& c, int k) {
    const ModeSpectrum m = mode_spectrum(spec, c.g, c.j, k);
    const double chi2 = m.chi_k * m.chi_k;
    const double hopping_slope = -2.0 * std::cos(mode_angle(spec, k));  // dΔ_k/dJ
    return kI * ((-m.delta_k * c.dg + c.g * hopping_slope * c.dj) / chi2);
}

ModeBlock exact_cd_eigen_block(const LatticeSpec& spec, const CouplingSample& c, int k) {
    return off_diagonal(cd_strength(spec, c, k));
}

ComplexMatrix exact_cd_matrix(const LatticeSpec& spec, const CouplingSample& c, CdMethod method,
                              EigenSource source) {
    if (method == CdMethod::ModeBlocks) {
        std::vector<ModeBlock> blocks;
        blocks.reserve(spec.n_sites());
        for (int k = 0; k < spec.n_sites(); ++k) {
            blocks.push_back(to_mode_coordinates(mode_spectrum(spec, c.g, c.j, k),
                                                 exact_cd_eigen_block(spec, c, k)));
        }
        return from_block_diagonal(spec, blocks);
    }

    const ComplexMatrix dh =
        (c.dg * coupling_operator(spec) + c.dj * hopping_operator(spec)).cast<Complex>();
    const double numerator_floor = 1e-12 * std::max(1.0, dh.norm());
    const std::vector<Eigenpair> pairs = eigenpairs(spec, c, source);

    ComplexMatrix h = ComplexMatrix::Zero(spec.dim(), spec.dim());
    for (std::size_t m = 0; m < pairs.size(); ++m) {
        for (std::size_t n = 0; n < pairs.size(); ++n) {
            if (m == n) continue;
            const Complex numerator = pairs[m].state.dot(dh * pairs[n].state);
            const double gap = pairs[n].energy - pairs[m].energy;
            if (std::abs(gap) < kGapFloor) {
                if (std::abs(numerator) > numerator_floor) {
                    throw DegenerateSpectrumError("spectral sum: coupled eigenstates with gap " +
                                                  std::to_string(gap));
                }
                continue;
            }
            h += (kI * numerator / gap) * pairs[m].state * pairs[n].state.adjoint();
        }
    }
    return h;
}

ComplexMatrix local_cd_matrix(const LatticeSpec& spec, const LocalCdParams& params) {
    ComplexMatrix h = ComplexMatrix::Zero(spec.dim(), spec.dim());
    for (int s = 0; s < spec.n_sites(); ++s) {
        h(2 * s, 2 * s) = params.delta_l;
        h(2 * s, 2 * s + 1) = params.g_l;
        h(2 * s + 1, 2 * s) = std::conj(params.g_l);
        h(2 * s + 1, 2 * s + 1) = -params.delta_l;
    }
    return h;
}

LocalCdParams local_cd_params(const LatticeSpec& spec, const CouplingSample& c) {
    return {0.0, cd_strength(spec, c, 0)};
}

LocalCdParams local_cd_params_at(const LatticeSpec& spec, const RampSchedule& schedule, double t) {
    return local_cd_params(spec, couplings_at(schedule, t));
}

ModeBlock local_cd_eigen_block(const LocalCdParams& p, double theta_k) {
    const double c2 = std::cos(2.0 * theta_k);
    const double s2 = std::sin(2.0 * theta_k);
    const double re = p.g_l.real();
    const double im = p.g_l.imag();
    ModeBlock g;
    g(0, 0) = p.delta_l * c2 + re * s2;
    g(0, 1) = Complex(-p.delta_l * s2 + re * c2, im);
    g(1, 0) = Complex(-p.delta_l * s2 + re * c2, -im);
    g(1, 1) = -p.delta_l * c2 - re * s2;
    return g;
}

std::vector<ModeBlock> project_to_mode_blocks(const LatticeSpec& spec, double g, double j,
                                              const ComplexMatrix& h) {
    if (h.rows() != spec.dim() || h.cols() != spec.dim()) {
        throw DimensionError("project_to_mode_blocks: matrix is not " + std::to_string(spec.dim()) +
                             "x" + std::to_string(spec.dim()));
    }
    std::vector<ModeBlock> out;
    out.reserve(spec.n_sites());
    for (int k = 0; k < spec.n_sites(); ++k) {
        Eigen::Matrix<Complex, Eigen::Dynamic, 2> w(spec.dim(), 2);
        w.col(0) = eigenstate(spec, g, j, k, Branch::Plus);
        w.col(1) = eigenstate(spec, g, j, k, Branch::Minus);
        out.push_back(w.adjoint() * h * w);
    }
    return out;
}

std::vector<ModeBlock> drive_eigen_blocks(const LatticeSpec& spec, const CouplingSample& c, DrivePlan drive) {
    std::vector<ModeBlock> out(spec.n_sites(), ModeBlock::Zero());
    switch (drive) {
        case DrivePlan::None:
            break;
        case DrivePlan::ExactCD:
            for (int k = 0; k < spec.n_sites(); ++k) out[k] = exact_cd_eigen_block(spec, c, k);
            break;
        case DrivePlan::LocalCD: {
            const LocalCdParams p = local_cd_params(spec, c);
            for (int k = 0; k < spec.n_sites(); ++k) {
                out[k] = local_cd_eigen_block(p, mode_spectrum(spec, c.g, c.j, k).theta_k);
            }
            break;
        }
    }
    return out;
}

std::vector<ModeBlock> total_mode_blocks(const LatticeSpec& spec, const CouplingSample& c, DrivePlan drive) {
    std::vector<ModeBlock> out;
    out.reserve(spec.n_sites());
    const LocalCdParams local = drive == DrivePlan::LocalCD ? local_cd_params(spec, c) : LocalCdParams{};
    for (int k = 0; k < spec.n_sites(); ++k) {
        ModeBlock b;
        b << mode_detuning(spec, c.j, k), c.g, c.g, 0.0;
        if (drive == DrivePlan::ExactCD) {
            b += to_mode_coordinates(mode_spectrum(spec, c.g, c.j, k), exact_cd_eigen_block(spec, c, k));
        } else if (drive == DrivePlan::LocalCD) {
            // The onsite drive has the same form in mode coordinates as on each site.
            b(0, 0) += local.delta_l;
            b(0, 1) += local.g_l;
            b(1, 0) += std::conj(local.g_l);
            b(1, 1) -= local.delta_l;
        }
        out.push_back(b);
    }
    return out;
}

ComplexMatrix total_hamiltonian(const LatticeSpec& spec, const CouplingSample& c, DrivePlan drive) {
    ComplexMatrix h = assemble_hr(spec, c.g, c.j);
    switch (drive) {
        case DrivePlan::None:
            break;
        case DrivePlan::ExactCD:
            h += exact_cd_matrix(spec, c, CdMethod::ModeBlocks);
            break;
        case DrivePlan::LocalCD:
            h += local_cd_matrix(spec, local_cd_params(spec, c));
            break;
    }
    return h;
}

}  // namespace jclcd
