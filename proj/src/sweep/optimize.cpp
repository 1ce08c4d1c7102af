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

#include "qbatt/sweep/optimize.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "qbatt/steady.hpp"

namespace qbatt::sweep {

BatteryMetrics steady_metrics(const SystemParams& params, const BasisSpec& basis,
                              const ModelConvention& conv) {
    const SteadyReport report = steady_state(params, basis, conv);
    return battery_metrics(report.rho_inf, params, basis);
}

double objective_value(const BatteryMetrics& m, Objective objective) {
    return objective == Objective::E ? m.stored_energy : m.ergotropy;
}

namespace {

struct Best {
    double value = -std::numeric_limits<double>::infinity();
    double low = std::numeric_limits<double>::infinity();
    std::size_t index = 0;
    BatteryMetrics metrics;
};

// Evaluates every (gammaC, delta) pair, gammaC outermost.
Best scan(const SystemParams& base, const std::vector<double>& gcs,
          const std::vector<double>& deltas, Objective objective, const BasisSpec& basis,
          const ModelConvention& conv) {
    Best best;
    std::size_t idx = 0;
    for (double gc : gcs) {
        for (double d : deltas) {
            SystemParams p = base;
            p.gammaC = gc;
            p.delta = d;
            const BatteryMetrics m = steady_metrics(p, basis, conv);
            const double v = objective_value(m, objective);
            if (v > best.value) {
                best.value = v;
                best.index = idx;
                best.metrics = m;
            }
            best.low = std::min(best.low, v);
            ++idx;
        }
    }
    return best;
}

std::vector<double> log_points(double lo, double hi, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        v[static_cast<std::size_t>(i)] =
            i == 0 ? lo : (i == n - 1 ? hi : lo * std::pow(hi / lo, double(i) / (n - 1)));
    }
    return v;
}

std::vector<double> coarse_deltas() {
    std::vector<double> v;
    for (int i = 0; i < kDeltaPoints; ++i) v.push_back(2.0 * i / (kDeltaPoints - 1));
    return v;
}

std::vector<double> fine_deltas(double center) {
    std::vector<double> v;
    for (int j = 0; j < kRefinePoints; ++j) {
        const double d = center + (j - kRefinePoints / 2) * kDeltaFineStep;
        if (d >= -1e-12 && d <= 2.0 + 1e-12) v.push_back(std::clamp(d, 0.0, 2.0));
    }
    return v;
}

void require_flat_check(const Best& b) {
    if (!(b.value - b.low >= 1e-12)) {
        throw Error(ErrorCode::FlatObjective,
                    "optimize: objective varies by less than 1e-12 over the coarse grid");
    }
}

}  // namespace

OptimizeResult optimize(const SystemParams& base, bool free_delta, Objective objective,
                        const BasisSpec& basis, const ModelConvention& conv) {
    base.validate();
    if (!(base.g > 0.0)) throw Error(ErrorCode::DomainError, "optimize: g must be > 0");
    const std::vector<double> gcs =
        log_points(kGammaCMin * base.g, kGammaCMax * base.g, kGammaCPoints);
    const std::vector<double> ds = free_delta ? coarse_deltas() : std::vector<double>{base.delta};
    const Best coarse = scan(base, gcs, ds, objective, basis, conv);
    require_flat_check(coarse);

    const std::size_t k = coarse.index / ds.size();
    const double d0 = ds[coarse.index % ds.size()];
    const double lo = gcs[k == 0 ? 0 : k - 1];
    const double hi = gcs[std::min(k + 1, gcs.size() - 1)];
    const std::vector<double> fine_gc = log_points(lo, hi, kRefinePoints);
    const std::vector<double> fine_d = free_delta ? fine_deltas(d0) : ds;
    const Best fine = scan(base, fine_gc, fine_d, objective, basis, conv);

    OptimizeResult r;
    r.evaluations = gcs.size() * ds.size() + fine_gc.size() * fine_d.size();
    if (fine.value >= coarse.value) {
        r.gammaC = fine_gc[fine.index / fine_d.size()];
        r.delta = fine_d[fine.index % fine_d.size()];
        r.value = fine.value;
        r.metrics = fine.metrics;
    } else {
        r.gammaC = gcs[k];
        r.delta = d0;
        r.value = coarse.value;
        r.metrics = coarse.metrics;
    }
    return r;
}

OptimizeResult optimize(const SystemParams& base, bool free_delta, Objective objective) {
    return optimize(base, free_delta, objective, default_basis(base));
}

OptimizeResult optimize_delta(const SystemParams& base, Objective objective,
                              const BasisSpec& basis, const ModelConvention& conv) {
    base.validate();
    const std::vector<double> gc{base.gammaC};
    const std::vector<double> ds = coarse_deltas();
    const Best coarse = scan(base, gc, ds, objective, basis, conv);
    require_flat_check(coarse);
    const std::vector<double> fd = fine_deltas(ds[coarse.index]);
    const Best fine = scan(base, gc, fd, objective, basis, conv);
    OptimizeResult r;
    r.gammaC = base.gammaC;
    r.evaluations = ds.size() + fd.size();
    if (fine.value >= coarse.value) {
        r.delta = fd[fine.index];
        r.value = fine.value;
        r.metrics = fine.metrics;
    } else {
        r.delta = ds[coarse.index];
        r.value = coarse.value;
        r.metrics = coarse.metrics;
    }
    return r;
}

}  // namespace qbatt::sweep
