// Copyright 2026 The qbatt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qbatt/trajectories.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <random>
#include <string>
#include <thread>

namespace qbatt {

std::string_view to_string(TrajectoryScheme scheme) noexcept {
    return scheme == TrajectoryScheme::ConditionalKraus ? "conditional_kraus" : "measure_then_act";
}

std::uint64_t trajectory_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::string_view rng_name() noexcept {
    return "mt19937_64+splitmix64 substreams, std::normal_distribution";
}

namespace {

// Fixed 4x4 kernel; the trajectory loop dominates ensemble runtime.
using Mat4 = std::array<cplx, 16>;

Mat4 to_mat4(const ComplexMatrix& m) {
    Mat4 out{};
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) out[4 * i + j] = m(i, j);
    }
    return out;
}

ComplexMatrix from_mat4(const Mat4& m) {
    return ComplexMatrix(4, 4, std::vector<cplx>(m.begin(), m.end()));
}

inline void mul(const Mat4& a, const Mat4& b, Mat4& out) {
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            out[4 * i + j] = a[4 * i] * b[j] + a[4 * i + 1] * b[4 + j] + a[4 * i + 2] * b[8 + j] +
                             a[4 * i + 3] * b[12 + j];
        }
    }
}

// out = a * b^dagger
inline void mul_adj(const Mat4& a, const Mat4& b, Mat4& out) {
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            out[4 * i + j] = a[4 * i] * std::conj(b[4 * j]) + a[4 * i + 1] * std::conj(b[4 * j + 1]) +
                             a[4 * i + 2] * std::conj(b[4 * j + 2]) +
                             a[4 * i + 3] * std::conj(b[4 * j + 3]);
        }
    }
}

inline double expect(const Mat4& x, const Mat4& rho) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i) {
        for (int k = 0; k < 4; ++k) s += (x[4 * i + k] * rho[4 * k + i]).real();
    }
    return s;
}

struct JumpTerm {
    int out;
    int in;
    cplx coeff;
};

// rate * L rho L^dagger as a sparse list of (out, in) contributions.
void append_jump(std::vector<JumpTerm>& terms, const ComplexMatrix& l, double rate) {
    if (rate == 0.0) return;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (l(i, j) == cplx{}) continue;
            for (int m = 0; m < 4; ++m) {
                for (int k = 0; k < 4; ++k) {
                    if (l(m, k) == cplx{}) continue;
                    terms.push_back({4 * i + m, 4 * j + k, rate * l(i, j) * std::conj(l(m, k))});
                }
            }
        }
    }
}

struct StepKernel {
    // Measurement Kraus operator M(dy) = a + b dy + c dy^2.
    Mat4 a{}, b{}, c{};
    Mat4 record_op{};  // <c' + c'^dagger> enters dy
    std::vector<JumpTerm> jumps;
    bool rotate = false;  // MeasureThenAct feedback rotation
    double rotation_rate = 0.0;
    Mat4 charger_y{};
    double inv_sqrt_gc = 0.0;
};

StepKernel build_kernel(const TrajectoryConfig& cfg) {
    const SystemParams& p = cfg.params;
    const ModelOperators ops = build_operators(p, BasisSpec::two_qubit());
    const double dt = cfg.dt;
    const double s = static_cast<double>(cfg.convention.feedback_sign);
    const double sqrt_gc = std::sqrt(p.gammaC);
    const ComplexMatrix id = ComplexMatrix::identity(4);
    const ComplexMatrix c = sqrt_gc * ops.charger_lower;
    const ComplexMatrix lb = ops.battery_lower;
    const ComplexMatrix lb_dag = lb.adjoint();
    using namespace std::complex_literals;

    StepKernel k;
    k.inv_sqrt_gc = 1.0 / sqrt_gc;
    k.charger_y = to_mat4(ops.charger_y);
    ComplexMatrix meas = c;
    ComplexMatrix h = ops.hamiltonian;
    if (cfg.scheme == TrajectoryScheme::ConditionalKraus) {
        const ComplexMatrix f_op = (-s * p.feedback() / sqrt_gc) * ops.charger_y;
        meas = c - 1i * f_op;
        h += 0.5 * (f_op * c + c.adjoint() * f_op);
    } else {
        k.rotate = true;
        k.rotation_rate = s * p.feedback();
    }
    const ComplexMatrix meas_dag = meas.adjoint();
    const ComplexMatrix kk = 1i * h + 0.5 * (meas_dag * meas + p.gamma_down() * (lb_dag * lb) +
                                             p.gamma_up() * (lb * lb_dag));
    k.record_op = to_mat4(meas + meas_dag);
    append_jump(k.jumps, lb, p.gamma_down() * dt);
    append_jump(k.jumps, lb_dag, p.gamma_up() * dt);

    if (cfg.noise == NoiseMode::Zero) {
        // Averaged measured channel: deterministic Kraus pair {M0, sqrt(dt) c'}.
        k.a = to_mat4(id - dt * kk + (0.5 * dt * dt) * (kk * kk));
        append_jump(k.jumps, meas, dt);
        return k;
    }
    if (cfg.scheme == TrajectoryScheme::ConditionalKraus) {
        // Second-order terms of the Ito-Taylor expansion of the linear filter.
        const ComplexMatrix m2 = meas * meas;
        k.a = to_mat4(id - dt * kk + (0.5 * dt * dt) * (kk * kk) - (0.5 * dt) * m2);
        k.b = to_mat4(meas - (0.5 * dt) * (kk * meas + meas * kk));
        k.c = to_mat4(0.5 * m2);
    } else {
        k.a = to_mat4(id - dt * kk);
        k.b = to_mat4(meas);
    }
    return k;
}

void validate(const TrajectoryConfig& cfg) {
    cfg.params.validate();
    if (cfg.params.N != 1) {
        throw Error(ErrorCode::UnsupportedN, "trajectories: only the single-cell model is supported");
    }
    if (cfg.tau != 0.0) {
        throw Error(ErrorCode::InvalidArgument, "trajectories: only zero feedback delay is supported");
    }
    if (cfg.params.eta != 1.0) {
        throw Error(ErrorCode::InvalidArgument, "trajectories: only eta = 1 is supported");
    }
    if (!(cfg.params.gammaC > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "trajectories: measured channel needs gammaC > 0");
    }
    if (!(cfg.dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "trajectories: dt must be > 0");
    if (cfg.ensemble_size < 1) {
        throw Error(ErrorCode::InvalidArgument, "trajectories: ensemble_size must be >= 1");
    }
    if (cfg.rho0 && (cfg.rho0->rows() != 4 || cfg.rho0->cols() != 4)) {
        throw Error(ErrorCode::DimensionMismatch, "trajectories: rho0 must be 4x4");
    }
}

constexpr std::size_t kPositivityEvery = 256;
constexpr double kPositivityFloor = -1e-4;

// Per-record-point observer for the core loop.
template <typename Observer>
Mat4 integrate(const TrajectoryConfig& cfg, const StepKernel& k, std::uint64_t stream_seed,
               double& min_eig, Observer&& observe) {
    std::mt19937_64 rng(stream_seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double dt = cfg.dt;
    const double sqrt_dt = std::sqrt(dt);
    const std::size_t every = std::max<std::size_t>(cfg.record_every, 1);
    const bool noisy = cfg.noise == NoiseMode::Gaussian;

    Mat4 rho = to_mat4(cfg.rho0 ? *cfg.rho0 : ground_state(BasisSpec::two_qubit()));
    Mat4 m{}, t{}, next{};
    double window_current = 0.0;
    observe(std::size_t{0}, rho, 0.0);
    min_eig = 0.0;

    for (std::size_t step = 1; step <= cfg.steps; ++step) {
        const double dw = noisy ? normal(rng) * sqrt_dt : 0.0;
        const double dy = expect(k.record_op, rho) * dt + dw;
        const double dy2 = dy * dy;
        for (int i = 0; i < 16; ++i) m[i] = k.a[i] + k.b[i] * dy + k.c[i] * dy2;
        mul(m, rho, t);
        mul_adj(t, m, next);
        for (const JumpTerm& j : k.jumps) next[j.out] += j.coeff * rho[j.in];
        if (k.rotate) {
            const double theta = k.rotation_rate * dy * k.inv_sqrt_gc;
            const double cs = std::cos(theta);
            const double sn = std::sin(theta);
            for (int i = 0; i < 16; ++i) {
                m[i] = cplx(0.0, sn) * k.charger_y[i];
            }
            for (int i = 0; i < 4; ++i) m[5 * i] += cs;
            mul(m, next, t);
            mul_adj(t, m, next);
        }
        double tr = 0.0;
        for (int i = 0; i < 4; ++i) tr += next[5 * i].real();
        if (!(tr > 0.0) || !std::isfinite(tr)) {
            throw Error(ErrorCode::NonPhysicalState, "trajectory: trace lost at step " +
                                                         std::to_string(step));
        }
        const double inv = 1.0 / tr;
        for (int i = 0; i < 4; ++i) {
            for (int j = i; j < 4; ++j) {
                const cplx v = 0.5 * (next[4 * i + j] + std::conj(next[4 * j + i])) * inv;
                rho[4 * i + j] = v;
                rho[4 * j + i] = std::conj(v);
            }
        }
        window_current += dy * k.inv_sqrt_gc;
        if (step % kPositivityEvery == 0 || step == cfg.steps) {
            const double e = hermitian_eigenvalues(from_mat4(rho)).front();
            min_eig = std::min(min_eig, e);
            if (e < kPositivityFloor) {
                throw Error(ErrorCode::NonPhysicalState,
                            "trajectory: eigenvalue " + std::to_string(e) + " at step " +
                                std::to_string(step) + "; reduce dt");
            }
        }
        if (step % every == 0 || step == cfg.steps) {
            const std::size_t window = step % every == 0 ? every : step % every;
            observe(step, rho, window_current / (static_cast<double>(window) * dt));
            window_current = 0.0;
        }
    }
    return rho;
}

inline double charger_excited(const Mat4& rho) { return rho[0].real() + rho[5].real(); }
inline double battery_excited(const Mat4& rho) { return rho[0].real() + rho[10].real(); }

std::vector<std::size_t> record_steps(const TrajectoryConfig& cfg) {
    const std::size_t every = std::max<std::size_t>(cfg.record_every, 1);
    std::vector<std::size_t> out{0};
    for (std::size_t s = every; s <= cfg.steps; s += every) out.push_back(s);
    if (out.back() != cfg.steps) out.push_back(cfg.steps);
    return out;
}

}  // namespace

TrajectoryRecord run_trajectory(const TrajectoryConfig& cfg, std::uint64_t stream_seed) {
    validate(cfg);
    const StepKernel k = build_kernel(cfg);
    TrajectoryRecord rec;
    const Mat4 final_state =
        integrate(cfg, k, stream_seed, rec.min_eigenvalue,
                  [&](std::size_t step, const Mat4& rho, double current) {
                      rec.times.push_back(static_cast<double>(step) * cfg.dt);
                      rec.photocurrent.push_back(step == 0 ? 0.0 : current);
                      rec.populations.emplace_back(charger_excited(rho), battery_excited(rho));
                  });
    rec.final_state = from_mat4(final_state);
    return rec;
}

TrajectoryRecord run_trajectory(const TrajectoryConfig& cfg) {
    return run_trajectory(cfg, trajectory_seed(cfg.seed, 0));
}

EnsembleResult ensemble_average(const TrajectoryConfig& cfg) {
    validate(cfg);
    if (cfg.ensemble_size < 2) {
        throw Error(ErrorCode::InvalidArgument, "ensemble_average: ensemble_size must be >= 2");
    }
    const StepKernel k = build_kernel(cfg);
    const std::vector<std::size_t> steps = record_steps(cfg);
    const std::size_t npts = steps.size();

    // Shifted sums keep the variance well conditioned for populations near 1.
    constexpr double kShift = 0.5;
    struct Sums {
        std::vector<double> c, c2, b, b2, r, r2;
        explicit Sums(std::size_t n) : c(n), c2(n), b(n), b2(n), r(n), r2(n) {}
        void add(const Sums& o) {
            for (std::size_t i = 0; i < c.size(); ++i) {
                c[i] += o.c[i];
                c2[i] += o.c2[i];
                b[i] += o.b[i];
                b2[i] += o.b2[i];
                r[i] += o.r[i];
                r2[i] += o.r2[i];
            }
        }
    };

    constexpr std::size_t kBlock = 64;
    const std::size_t m = cfg.ensemble_size;
    const std::size_t nblocks = (m + kBlock - 1) / kBlock;
    std::vector<Sums> blocks(nblocks, Sums(npts));
    std::vector<std::exception_ptr> errors(nblocks);

    auto run_block = [&](std::size_t blk) {
        try {
            Sums& s = blocks[blk];
            const std::size_t end = std::min(m, (blk + 1) * kBlock);
            for (std::size_t traj = blk * kBlock; traj < end; ++traj) {
                std::size_t idx = 0;
                double min_eig = 0.0;
                integrate(cfg, k, trajectory_seed(cfg.seed, traj), min_eig,
                          [&](std::size_t, const Mat4& rho, double current) {
                              const double c = charger_excited(rho) - kShift;
                              const double b = battery_excited(rho) - kShift;
                              const double r = idx == 0 ? 0.0 : current;
                              s.c[idx] += c;
                              s.c2[idx] += c * c;
                              s.b[idx] += b;
                              s.b2[idx] += b * b;
                              s.r[idx] += r;
                              s.r2[idx] += r * r;
                              ++idx;
                          });
            }
        } catch (...) {
            errors[blk] = std::current_exception();
        }
    };

    unsigned nthreads = cfg.threads == 0 ? std::max(1U, std::thread::hardware_concurrency())
                                         : cfg.threads;
    nthreads = static_cast<unsigned>(std::min<std::size_t>(nthreads, nblocks));
    if (nthreads <= 1) {
        for (std::size_t blk = 0; blk < nblocks; ++blk) run_block(blk);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nthreads; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t blk = t; blk < nblocks; blk += nthreads) run_block(blk);
            });
        }
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    Sums total(npts);
    for (const Sums& s : blocks) total.add(s);

    EnsembleResult out;
    out.ensemble_size = m;
    const double dm = static_cast<double>(m);
    auto stats = [&](double sum, double sum2, double shift, double& mean, double& se) {
        const double mu = sum / dm;
        const double var = std::max(0.0, (sum2 - dm * mu * mu) / (dm - 1.0));
        mean = mu + shift;
        se = std::sqrt(var / dm);
    };
    for (std::size_t i = 0; i < npts; ++i) {
        double mean = 0.0;
        double se = 0.0;
        out.times.push_back(static_cast<double>(steps[i]) * cfg.dt);
        stats(total.c[i], total.c2[i], kShift, mean, se);
        out.mean_charger.push_back(mean);
        out.se_charger.push_back(se);
        stats(total.b[i], total.b2[i], kShift, mean, se);
        out.mean_battery.push_back(mean);
        out.se_battery.push_back(se);
        stats(total.r[i], total.r2[i], 0.0, mean, se);
        out.mean_photocurrent.push_back(mean);
        out.se_photocurrent.push_back(se);
    }
    return out;
}

}  // namespace qbatt
