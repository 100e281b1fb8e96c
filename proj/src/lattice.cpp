#include "jclcd/lattice.hpp"

#include "jclcd/errors.hpp"

#include <cmath>
#include <cstring>
#include <string>

namespace jclcd {

const char* to_string(Boundary b) noexcept {
    return b == Boundary::Periodic ? "pbc" : "obc";
}

Boundary parse_boundary(const char* text) {
    if (std::strcmp(text, "pbc") == 0 || std::strcmp(text, "PBC") == 0) return Boundary::Periodic;
    if (std::strcmp(text, "obc") == 0 || std::strcmp(text, "OBC") == 0) return Boundary::Open;
    throw ConfigError(std::string("unknown boundary condition '") + text + "' (expected pbc or obc)");
}

LatticeSpec::LatticeSpec(int n_sites, Boundary boundary, double delta)
    : n_sites_(n_sites), boundary_(boundary), delta_(delta) {
    // On a two-site ring both hopping bonds join the same pair of cavities.
    const int min_sites = boundary == Boundary::Periodic ? 3 : 2;
    if (n_sites < min_sites) {
        throw SizeError("lattice with " + std::to_string(n_sites) + " sites is too small for " +
                        to_string(boundary) + " (minimum " + std::to_string(min_sites) + ")");
    }
    if (!std::isfinite(delta)) {
        throw NonFiniteError("detuning must be finite");
    }
}

RampSchedule::RampSchedule(double g0, double gf, double j0, double jf, double total_time)
    : g0_(g0), gf_(gf), j0_(j0), jf_(jf), total_time_(total_time) {
    for (double v : {g0, gf, j0, jf, total_time}) {
        if (!std::isfinite(v)) throw NonFiniteError("ramp parameters must be finite");
    }
    if (!(total_time > 0.0)) {
        throw RangeError("ramp total time must be positive");
    }
}

CouplingSample couplings_at(const RampSchedule& schedule, double t) {
    if (!(t >= 0.0 && t <= schedule.total_time())) {
        throw RangeError("time " + std::to_string(t) + " outside the ramp [0, " +
                         std::to_string(schedule.total_time()) + "]");
    }
    const double dg = schedule.g_rate();
    const double dj = schedule.j_rate();
    return {t, schedule.g0() + t * dg, schedule.j0() + t * dj, dg, dj};
}

int basis_index(const LatticeSpec& spec, int site, Flavor flavor) {
    if (site < 1 || site > spec.n_sites()) {
        throw RangeError("site " + std::to_string(site) + " outside [1, " +
                         std::to_string(spec.n_sites()) + "]");
    }
    return 2 * (site - 1) + static_cast<int>(flavor);
}

std::pair<int, Flavor> basis_site(const LatticeSpec& spec, int index) {
    if (index < 0 || index >= spec.dim()) {
        throw RangeError("basis index " + std::to_string(index) + " outside [0, " +
                         std::to_string(spec.dim() - 1) + "]");
    }
    return {index / 2 + 1, index % 2 == 0 ? Flavor::Photon : Flavor::Qubit};
}

RealMatrix coupling_operator(const LatticeSpec& spec) {
    const int d = spec.dim();
    RealMatrix v = RealMatrix::Zero(d, d);
    for (int s = 0; s < spec.n_sites(); ++s) {
        v(2 * s, 2 * s + 1) = 1.0;
        v(2 * s + 1, 2 * s) = 1.0;
    }
    return v;
}

RealMatrix hopping_operator(const LatticeSpec& spec) {
    const int n = spec.n_sites();
    const int d = spec.dim();
    RealMatrix v = RealMatrix::Zero(d, d);
    const int bonds = spec.boundary() == Boundary::Periodic ? n : n - 1;
    for (int s = 0; s < bonds; ++s) {
        const int a = 2 * s;
        const int b = 2 * ((s + 1) % n);
        v(a, b) -= 1.0;
        v(b, a) -= 1.0;
    }
    return v;
}

ComplexMatrix assemble_hr(const LatticeSpec& spec, double g, double j) {
    RealMatrix h = g * coupling_operator(spec) + j * hopping_operator(spec);
    for (int s = 0; s < spec.n_sites(); ++s) h(2 * s, 2 * s) = spec.delta();
    return h.cast<Complex>();
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = r; c < m.cols(); ++c) {
            if (std::abs(m(r, c) - std::conj(m(c, r))) > tol) return false;
        }
    }
    return true;
}

}  // namespace jclcd
