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

#include "qbatt/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qbatt {

namespace {

ComplexMatrix rk4_propagator(const ComplexMatrix& l, double h) {
    const std::size_t n = l.rows();
    const ComplexMatrix hl = h * l;
    // Horner form: I + hL (I + hL/2 (I + hL/3 (I + hL/4))).
    ComplexMatrix acc = ComplexMatrix::identity(n) + hl * (1.0 / 4.0);
    acc = ComplexMatrix::identity(n) + (hl * acc) * (1.0 / 3.0);
    acc = ComplexMatrix::identity(n) + (hl * acc) * (1.0 / 2.0);
    return ComplexMatrix::identity(n) + hl * acc;
}

void check_initial(const Liouvillian& l, const ComplexMatrix& rho0, double dt, double t_max) {
    const std::size_t d = l.dim();
    if (rho0.rows() != d || rho0.cols() != d) {
        throw Error(ErrorCode::DimensionMismatch, "evolve: rho0 dimension does not match basis");
    }
    if (!(dt > 0.0) || !(t_max >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "evolve: need dt > 0 and t_max >= 0");
    }
    if (dt > max_stable_dt(l) * (1.0 + 1e-12)) {
        throw Error(ErrorCode::StepTooLarge,
                    "evolve: dt = " + std::to_string(dt) + " exceeds 0.05/||L||_inf = " +
                        std::to_string(max_stable_dt(l)));
    }
    check_density_matrix(rho0);
}

double norm2(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const cplx& z : v) s += std::norm(z);
    return std::sqrt(s);
}

}  // namespace

double spectral_bound(const Liouvillian& liouvillian) { return liouvillian.matrix.inf_norm(); }

double max_stable_dt(const Liouvillian& liouvillian) {
    const double b = spectral_bound(liouvillian);
    return b > 0.0 ? 0.05 / b : std::numeric_limits<double>::infinity();
}

double default_dt(const SystemParams& params, const Liouvillian& liouvillian) {
    const double rate = std::max({params.gammaC, params.gammaB * (1.0 + 2.0 * params.occupation()),
                                  params.g, params.feedback(), params.J});
    const double by_rate = rate > 0.0 ? 0.01 / rate : std::numeric_limits<double>::infinity();
    const double dt = std::min(by_rate, max_stable_dt(liouvillian));
    return std::isfinite(dt) ? dt : 1.0;
}

EvolutionRecord evolve(const Liouvillian& liouvillian, const ComplexMatrix& rho0, double dt,
                       double t_max, const EvolveOptions& opts) {
    check_initial(liouvillian, rho0, dt, t_max);
    const std::size_t d = liouvillian.dim();
    const std::size_t every = std::max<std::size_t>(opts.record_every, 1);
    const auto steps = static_cast<std::size_t>(std::llround(std::ceil(t_max / dt - 1e-9)));
    const ComplexMatrix prop = rk4_propagator(liouvillian.matrix, dt);

    EvolutionRecord rec;
    auto record = [&](double t, const std::vector<cplx>& v) {
        rec.times.push_back(t);
        ComplexMatrix rho = unvec(v, d);
        if (opts.metrics_params) {
            rec.observables.push_back(
                battery_metrics(rho, *opts.metrics_params, liouvillian.basis));
        }
        if (opts.store_states) rec.states.push_back(std::move(rho));
    };

    std::vector<cplx> v = vec(rho0);
    std::vector<cplx> next(v.size());
    record(0.0, v);
    for (std::size_t k = 1; k <= steps; ++k) {
        multiply(prop, v, next);
        v.swap(next);
        if (k % every == 0 || k == steps) record(static_cast<double>(k) * dt, v);
    }
    return rec;
}

SteadyReport evolve_to_steady(const Liouvillian& liouvillian, const ComplexMatrix& rho0,
                              double dt, double tol, double t_cap) {
    check_initial(liouvillian, rho0, dt, t_cap);
    const ComplexMatrix prop = rk4_propagator(liouvillian.matrix, dt);
    std::vector<cplx> v = vec(rho0);
    std::vector<cplx> next(v.size());
    std::vector<cplx> rate(v.size());
    constexpr std::size_t kCheckEvery = 16;
    const auto max_steps = static_cast<std::size_t>(std::ceil(t_cap / dt));
    for (std::size_t k = 0;; ++k) {
        if (k % kCheckEvery == 0 || k == max_steps) {
            multiply(liouvillian.matrix, v, rate);
            const double res = norm2(rate);
            if (res <= tol) {
                SteadyReport report;
                ComplexMatrix rho = unvec(v, liouvillian.dim());
                rho = 0.5 * (rho + rho.adjoint());
                rho *= 1.0 / rho.trace().real();
                report.rho_inf = std::move(rho);
                report.method = SteadyMethod::NumericKernel;
                report.residual = res;
                report.basis = liouvillian.basis;
                return report;
            }
            if (k >= max_steps) {
                throw Error(ErrorCode::NotConverged,
                            "evolve_to_steady: ||L rho|| = " + std::to_string(res) +
                                " > tol at t_cap = " + std::to_string(t_cap));
            }
        }
        multiply(prop, v, next);
        v.swap(next);
    }
}

}  // namespace qbatt
