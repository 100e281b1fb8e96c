#include "jclcd/evolve.hpp"

#include "jclcd/errors.hpp"
#include "jclcd/spectrum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace jclcd {

namespace {

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
}

constexpr Complex kMinusI{0.0, -1.0};
constexpr double kConvergenceTol = 1e-10;
constexpr double kPositivityTol = 1e-9;

// Classical RK4 on the uniform grid t_n = n T / steps. `build(t)` returns the
// generator at time t, `apply(op, y)` the time derivative, and `record` is
// called at n = 0 and every `record_every` steps (always including n = steps).
template <class State, class Build, class Apply, class Record>
void rk4(double total_time, int steps, int record_every, State y, Build build, Apply apply, Record record) {
    const double dt = total_time / steps;
    auto h0 = build(0.0);
    record(0.0, y);
    for (int n = 0; n < steps; ++n) {
        const double t = n * dt;
        const double t1 = n + 1 == steps ? total_time : (n + 1) * dt;
        const auto hm = build(t + 0.5 * dt);
        auto h1 = build(t1);
        const State k1 = apply(h0, y);
        const State k2 = apply(hm, State(y + (0.5 * dt) * k1));
        const State k3 = apply(hm, State(y + (0.5 * dt) * k2));
        const State k4 = apply(h1, State(y + dt * k3));
        y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        h0 = std::move(h1);
        if ((n + 1) % record_every == 0) record(t1, y);
    }
}

double im_gl_or_nan(const LatticeSpec& spec, const CouplingSample& c) {
    try {
        return cd_strength(spec, c, 0).imag();
    } catch (const DegenerateModeError&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

void check_initial_state(const LatticeSpec& spec, const ComplexVector& psi0) {
    if (psi0.size() != spec.dim()) {
        throw DimensionError("initial state has dimension " + std::to_string(psi0.size()) + ", expected " +
                             std::to_string(spec.dim()));
    }
    if (std::abs(psi0.norm() - 1.0) > 1e-10) {
        throw RangeError("initial state is not normalized");
    }
}

enum class PurePath { Dense, Blockwise };

Trajectory integrate_pure(const LatticeSpec& spec, const RampSchedule& schedule, DrivePlan drive,
                          const ComplexVector& psi0, int steps, int record_every, PurePath path) {
    Trajectory traj;
    traj.drive = drive;
    auto sample = [&](double t) { return couplings_at(schedule, t); };
    auto note = [&](double t) {
        const CouplingSample c = sample(t);
        traj.times.push_back(t);
        traj.couplings.push_back(c);
        traj.im_gl.push_back(im_gl_or_nan(spec, c));
    };

    if (path == PurePath::Dense) {
        rk4(
            schedule.total_time(), steps, record_every, ComplexVector(psi0),
            [&](double t) { return total_hamiltonian(spec, sample(t), drive); },
            [](const ComplexMatrix& h, const ComplexVector& y) -> ComplexVector { return kMinusI * (h * y); },
            [&](double t, const ComplexVector& y) {
                note(t);
                traj.states.push_back(y);
            });
    } else {
        const ComplexMatrix u = mode_transform(spec);
        const int n_modes = spec.n_sites();
        rk4(
            schedule.total_time(), steps, record_every, ComplexVector(u.adjoint() * psi0),
            [&](double t) { return total_mode_blocks(spec, sample(t), drive); },
            [n_modes](const std::vector<ModeBlock>& blocks, const ComplexVector& y) -> ComplexVector {
                ComplexVector out(y.size());
                for (int k = 0; k < n_modes; ++k) {
                    out.segment<2>(2 * k) = kMinusI * (blocks[k] * y.segment<2>(2 * k));
                }
                return out;
            },
            [&](double t, const ComplexVector& y) {
                note(t);
                traj.states.push_back(u * y);
            });
    }
    return traj;
}

Trajectory evolve_pure(const LatticeSpec& spec, const RampSchedule& schedule, DrivePlan drive,
                       const ComplexVector& psi0, const IntegratorConfig& cfg, PurePath path) {
    cfg.validate();
    check_initial_state(spec, psi0);
    const int every = cfg.effective_record_every();
    Trajectory traj = integrate_pure(spec, schedule, drive, psi0, cfg.steps, every, path);
    if (cfg.convergence_check) {
        const Trajectory fine = integrate_pure(spec, schedule, drive, psi0, 2 * cfg.steps, 2 * every, path);
        double worst = 0.0;
        for (std::size_t i = 0; i < traj.states.size(); ++i) {
            worst = std::max(worst, (traj.states[i] - fine.states[i]).cwiseAbs().maxCoeff());
        }
        traj.convergence_error = worst;
        const double norm_drift = std::abs(traj.states.back().norm() - 1.0);
        if (worst > kConvergenceTol || norm_drift > kConvergenceTol) {
            throw ConvergenceError("RK4 with " + std::to_string(cfg.steps) + " steps over T = " +
                                   sci(schedule.total_time()) +
                                   " is not converged: step-halving change " + sci(worst) +
                                   ", norm drift " + sci(norm_drift) + " (tolerance 1e-10)");
        }
    }
    return traj;
}

DensityTrajectory integrate_density(const LatticeSpec& spec, const RampSchedule& schedule, DrivePlan drive,
                                    const ComplexMatrix& rho0, const DecoherenceRates& rates, int steps,
                                    int record_every) {
    DensityTrajectory traj;
    traj.drive = drive;
    traj.rates = rates;
    const RealVector gammas = jump_rates(spec, rates);
    auto sample = [&](double t) { return couplings_at(schedule, t); };
    rk4(
        schedule.total_time(), steps, record_every, ComplexMatrix(rho0),
        [&](double t) { return embed_hamiltonian(total_hamiltonian(spec, sample(t), drive)); },
        [&](const ComplexMatrix& h, const ComplexMatrix& rho) -> ComplexMatrix {
            return lindblad_rhs(h, gammas, rho);
        },
        [&](double t, const ComplexMatrix& rho) {
            const CouplingSample c = sample(t);
            traj.times.push_back(t);
            traj.couplings.push_back(c);
            traj.im_gl.push_back(im_gl_or_nan(spec, c));
            traj.states.push_back(rho);
        });
    return traj;
}

}  // namespace

void IntegratorConfig::validate() const {
    if (steps < 256 || !std::has_single_bit(static_cast<unsigned>(steps))) {
        throw ConfigError("integrator steps must be a power of two >= 256 (got " + std::to_string(steps) + ")");
    }
    if (record_every < 0 || (record_every > 0 && steps % record_every != 0)) {
        throw ConfigError("record_every must divide steps (got " + std::to_string(record_every) + ")");
    }
}

int IntegratorConfig::effective_record_every() const noexcept {
    if (record_every > 0) return record_every;
    return std::max(1, steps / 512);
}

ComplexVector initial_ground_state(const LatticeSpec& spec, const RampSchedule& schedule) {
    const CouplingSample c = couplings_at(schedule, 0.0);
    return eigenstate(spec, c.g, c.j, 0, Branch::Minus);
}

Trajectory evolve_schrodinger(const LatticeSpec& spec, const RampSchedule& schedule, DrivePlan drive,
                              const ComplexVector& psi0, const IntegratorConfig& cfg) {
    return evolve_pure(spec, schedule, drive, psi0, cfg, PurePath::Dense);
}

Trajectory evolve_blockwise(const LatticeSpec& spec, const RampSchedule& schedule, DrivePlan drive,
                            const ComplexVector& psi0, const IntegratorConfig& cfg) {
    return evolve_pure(spec, schedule, drive, psi0, cfg, PurePath::Blockwise);
}

ComplexMatrix embed_pure_state(const ComplexVector& psi) {
    ComplexMatrix rho = ComplexMatrix::Zero(psi.size() + 1, psi.size() + 1);
    rho.bottomRightCorner(psi.size(), psi.size()) = psi * psi.adjoint();
    return rho;
}

ComplexMatrix vacuum_state(const LatticeSpec& spec) {
    ComplexMatrix rho = ComplexMatrix::Zero(spec.dim() + 1, spec.dim() + 1);
    rho(0, 0) = 1.0;
    return rho;
}

ComplexMatrix embed_hamiltonian(const ComplexMatrix& h_excitation) {
    const Eigen::Index d = h_excitation.rows();
    ComplexMatrix h = ComplexMatrix::Zero(d + 1, d + 1);
    h.bottomRightCorner(d, d) = h_excitation;
    return h;
}

RealVector jump_rates(const LatticeSpec& spec, const DecoherenceRates& rates) {
    if (!(rates.gamma >= 0.0) || !(rates.kappa >= 0.0)) {
        throw RangeError("decoherence rates must be non-negative");
    }
    RealVector r = RealVector::Zero(spec.dim() + 1);
    for (int s = 0; s < spec.n_sites(); ++s) {
        r(1 + 2 * s) = rates.kappa;
        r(2 + 2 * s) = rates.gamma;
    }
    return r;
}

ComplexMatrix lindblad_rhs(const ComplexMatrix& h, const RealVector& rates, const ComplexMatrix& rho) {
    ComplexMatrix hr = h * rho;
    ComplexMatrix out = kMinusI * (hr - hr.adjoint());
    // Jump |0><i| at rate r_i: r_i (ρ_ii |0><0| - ½{|i><i|, ρ}).
    const Eigen::Index d = rho.rows();
    for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = 0; b < d; ++b) {
            const double decay = 0.5 * (rates(a) + rates(b));
            if (decay != 0.0) out(a, b) -= decay * rho(a, b);
        }
    }
    for (Eigen::Index i = 1; i < d; ++i) out(0, 0) += rates(i) * rho(i, i);
    return out;
}

DensityTrajectory evolve_lindblad(const LatticeSpec& spec, const RampSchedule& schedule, DrivePlan drive,
                                  const ComplexMatrix& rho0, const DecoherenceRates& rates,
                                  const IntegratorConfig& cfg) {
    cfg.validate();
    const Eigen::Index d = spec.dim() + 1;
    if (rho0.rows() != d || rho0.cols() != d) {
        throw DimensionError("density matrix must be " + std::to_string(d) + "x" + std::to_string(d));
    }
    if (!is_hermitian(rho0, 1e-10) || std::abs(rho0.trace() - 1.0) > 1e-9) {
        throw RangeError("initial density matrix must be Hermitian with unit trace");
    }
    const int every = cfg.effective_record_every();
    DensityTrajectory traj = integrate_density(spec, schedule, drive, rho0, rates, cfg.steps, every);

    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const ComplexMatrix& rho = traj.states[i];
        const ComplexMatrix sym = 0.5 * (rho + rho.adjoint());
        const double min_eig = jacobi_eigensystem(sym).eigenvalues(0);
        if (min_eig < -kPositivityTol) traj.positivity_warnings.push_back({traj.times[i], min_eig});
    }

    if (cfg.convergence_check) {
        const DensityTrajectory fine =
            integrate_density(spec, schedule, drive, rho0, rates, 2 * cfg.steps, 2 * every);
        double worst = 0.0;
        for (std::size_t i = 0; i < traj.states.size(); ++i) {
            worst = std::max(worst, (traj.states[i] - fine.states[i]).cwiseAbs().maxCoeff());
        }
        traj.convergence_error = worst;
        if (worst > kConvergenceTol) {
            throw ConvergenceError("master equation with " + std::to_string(cfg.steps) +
                                   " steps is not converged: step-halving change " + sci(worst) +
                                   " (tolerance 1e-10)");
        }
    }
    return traj;
}

}  // namespace jclcd
