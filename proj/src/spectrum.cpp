#include "jclcd/spectrum.hpp"

#include "jclcd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace jclcd {

namespace {

void check_mode(const LatticeSpec& spec, int k) {
    if (k < 0 || k >= spec.n_sites()) {
        throw RangeError("mode index " + std::to_string(k) + " outside [0, " +
                         std::to_string(spec.n_sites() - 1) + "]");
    }
}

}  // namespace

double mode_angle(const LatticeSpec& spec, int k) {
    check_mode(spec, k);
    const double n = spec.n_sites();
    if (spec.boundary() == Boundary::Periodic) return 2.0 * std::numbers::pi * k / n;
    return std::numbers::pi * (k + 1) / (n + 1);
}

double mode_detuning(const LatticeSpec& spec, double j, int k) {
    return spec.delta() - 2.0 * j * std::cos(mode_angle(spec, k));
}

ModeSpectrum mode_spectrum(const LatticeSpec& spec, double g, double j, int k) {
    if (g < 0.0) {
        throw RangeError("onsite coupling g must be non-negative");
    }
    ModeSpectrum m;
    m.k = k;
    m.delta_k = mode_detuning(spec, j, k);
    m.chi_k = std::hypot(m.delta_k, 2.0 * g);
    if (m.chi_k == 0.0) {
        throw DegenerateModeError("mode " + std::to_string(k) + " is degenerate (g = 0 and Δ_k = 0)");
    }
    m.lambda_plus = 0.5 * (m.delta_k + m.chi_k);
    m.lambda_minus = 0.5 * (m.delta_k - m.chi_k);
    // max() guards against -0 from rounding when |Δ_k| = χ_k.
    const double c = std::sqrt(std::max(0.0, (m.chi_k + m.delta_k) / (2.0 * m.chi_k)));
    const double s = std::sqrt(std::max(0.0, (m.chi_k - m.delta_k) / (2.0 * m.chi_k)));
    m.theta_k = std::atan2(s, c);
    m.v_plus = {c, s};
    m.v_minus = {-s, c};
    return m;
}

std::vector<ModeSpectrum> mode_spectra(const LatticeSpec& spec, double g, double j) {
    std::vector<ModeSpectrum> out;
    out.reserve(spec.n_sites());
    for (int k = 0; k < spec.n_sites(); ++k) out.push_back(mode_spectrum(spec, g, j, k));
    return out;
}

ComplexVector mode_vector(const LatticeSpec& spec, int k) {
    const int n = spec.n_sites();
    const double angle = mode_angle(spec, k);
    ComplexVector r(n);
    if (spec.boundary() == Boundary::Periodic) {
        const double amp = 1.0 / std::sqrt(static_cast<double>(n));
        for (int s = 0; s < n; ++s) r(s) = std::polar(amp, angle * s);
    } else {
        const double amp = std::sqrt(2.0 / (n + 1));
        for (int s = 0; s < n; ++s) r(s) = amp * std::sin(angle * (s + 1));
    }
    return r;
}

ComplexVector eigenstate(const LatticeSpec& spec, double g, double j, int k, Branch branch) {
    const ModeSpectrum m = mode_spectrum(spec, g, j, k);
    const ComplexVector r = mode_vector(spec, k);
    const Eigen::Vector2d& v = m.v(branch);
    ComplexVector w(spec.dim());
    for (int s = 0; s < spec.n_sites(); ++s) {
        w(2 * s) = r(s) * v(0);
        w(2 * s + 1) = r(s) * v(1);
    }
    return w;
}

ComplexMatrix mode_transform(const LatticeSpec& spec) {
    const int n = spec.n_sites();
    ComplexMatrix u = ComplexMatrix::Zero(spec.dim(), spec.dim());
    for (int k = 0; k < n; ++k) {
        const ComplexVector r = mode_vector(spec, k);
        for (int s = 0; s < n; ++s) {
            u(2 * s, 2 * k) = r(s);
            u(2 * s + 1, 2 * k + 1) = r(s);
        }
    }
    return u;
}

ComplexVector to_mode_basis(const LatticeSpec& spec, const ComplexVector& state) {
    if (state.size() != spec.dim()) {
        throw DimensionError("state has dimension " + std::to_string(state.size()) + ", expected " +
                             std::to_string(spec.dim()));
    }
    return mode_transform(spec).adjoint() * state;
}

ComplexVector from_mode_basis(const LatticeSpec& spec, const ComplexVector& modes) {
    if (modes.size() != spec.dim()) {
        throw DimensionError("mode vector has dimension " + std::to_string(modes.size()) +
                             ", expected " + std::to_string(spec.dim()));
    }
    return mode_transform(spec) * modes;
}

EigenDecomposition jacobi_eigensystem(const ComplexMatrix& h) {
    constexpr int kMaxSweeps = 50;
    constexpr Eigen::Index kMaxDim = 64;
    const Eigen::Index d = h.rows();
    if (h.cols() != d) throw DimensionError("jacobi_eigensystem: matrix is not square");
    if (d > kMaxDim) throw DimensionError("jacobi_eigensystem: dimension above 64");
    if (!is_hermitian(h, 1e-12 * std::max(1.0, h.norm()))) {
        throw DimensionError("jacobi_eigensystem: matrix is not Hermitian");
    }

    ComplexMatrix a = h;
    ComplexMatrix v = ComplexMatrix::Identity(d, d);
    const double target = 1e-13 * h.norm();

    auto off_norm = [&] {
        double sum = 0.0;
        for (Eigen::Index r = 0; r < d; ++r)
            for (Eigen::Index c = 0; c < d; ++c)
                if (r != c) sum += std::norm(a(r, c));
        return std::sqrt(sum);
    };

    int sweep = 0;
    while (off_norm() > target) {
        if (sweep++ == kMaxSweeps) {
            throw ConvergenceError("jacobi_eigensystem: no convergence after 50 sweeps");
        }
        for (Eigen::Index p = 0; p < d - 1; ++p) {
            for (Eigen::Index q = p + 1; q < d; ++q) {
                const double mag = std::abs(a(p, q));
                if (mag == 0.0) continue;
                // Phase e^{-iφ} on q makes a(p,q) real, then a real rotation zeroes it.
                const Complex phase = std::conj(a(p, q)) / mag;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const Complex gpp = c;
                const Complex gpq = s;
                const Complex gqp = -s * phase;
                const Complex gqq = c * phase;

                for (Eigen::Index r = 0; r < d; ++r) {
                    const Complex arp = a(r, p);
                    const Complex arq = a(r, q);
                    a(r, p) = arp * gpp + arq * gqp;
                    a(r, q) = arp * gpq + arq * gqq;
                    const Complex vrp = v(r, p);
                    const Complex vrq = v(r, q);
                    v(r, p) = vrp * gpp + vrq * gqp;
                    v(r, q) = vrp * gpq + vrq * gqq;
                }
                for (Eigen::Index c2 = 0; c2 < d; ++c2) {
                    const Complex apc = a(p, c2);
                    const Complex aqc = a(q, c2);
                    a(p, c2) = std::conj(gpp) * apc + std::conj(gqp) * aqc;
                    a(q, c2) = std::conj(gpq) * apc + std::conj(gqq) * aqc;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = app - t * mag;
                a(q, q) = aqq + t * mag;
            }
        }
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index x, Eigen::Index y) { return a(x, x).real() < a(y, y).real(); });

    EigenDecomposition out{RealVector(d), ComplexMatrix(d, d)};
    for (Eigen::Index i = 0; i < d; ++i) {
        out.eigenvalues(i) = a(order[i], order[i]).real();
        out.eigenvectors.col(i) = v.col(order[i]);
    }
    return out;
}

}  // namespace jclcd
