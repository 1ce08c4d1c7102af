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

#pragma once

#include <string_view>

#include "qbatt/linalg.hpp"
#include "qbatt/model.hpp"

namespace qbatt {

enum class SteadyMethod { NumericKernel, AnalyticBoson, AnalyticFermion };

std::string_view to_string(SteadyMethod method) noexcept;

struct SteadyReport {
    ComplexMatrix rho_inf;
    SteadyMethod method = SteadyMethod::NumericKernel;
    double residual = 0.0;  // max |L vec(rho)|
    SystemParams params;
    BasisSpec basis;
};

struct SteadyOptions {
    // Pivot ratio of the bordered system below which the kernel is treated
    // as more than one-dimensional.
    double degeneracy_threshold = 1e-13;
    // Residual bound relative to the max-abs entry of L.
    double residual_tolerance = 1e-9;
    // Eigenvalue floor for the returned state.
    double positivity_tolerance = 1e-9;
};

/// Unique trace-one kernel element of L. Solves L x = 0 with the first row
/// replaced by the trace functional (a bordered system), which is
/// nonsingular exactly when the kernel is one-dimensional.
SteadyReport steady_numeric(const Liouvillian& liouvillian, const SteadyOptions& opts = {});
SteadyReport steady_numeric(const SystemParams& params, const BasisSpec& basis,
                            const ModelConvention& conv = {}, const SteadyOptions& opts = {});
SteadyReport steady_numeric(const SystemParams& params);

/// Stationary state reached from rho0: the zero-eigenvalue spectral
/// projection of rho0, computed by shifted inverse iteration. Well defined
/// when the kernel is degenerate (e.g. the FullProduct basis, where
/// collective operators conserve total spin).
SteadyReport steady_from_initial(const Liouvillian& liouvillian, const ComplexMatrix& rho0,
                                 const SteadyOptions& opts = {});

/// Steady state for a basis: the unique kernel element for TwoQubitGlobal
/// and DickeReduced; the state reached from ground_state() for FullProduct.
SteadyReport steady_state(const SystemParams& params, const BasisSpec& basis,
                          const ModelConvention& conv = {});

/// Closed-form two-qubit steady state (global basis |ee>, |eg>, |ge>, |gg>).
/// Only rho_11..rho_44, rho_14/41 and rho_23/32 are nonzero.
SteadyReport steady_analytic(const SystemParams& params);

struct ClosedFormAux {
    double S = 0.0;
    double Qb = 0.0;
    double Wb = 0.0;
    double Qf = 0.0;
    double Wf = 0.0;
    double beta_b = 0.0;
    double beta_f = 0.0;
};

/// Auxiliary combinations of the closed forms. Both reservoir flavours are
/// evaluated with the occupation of `params`.
ClosedFormAux closed_form_aux(const SystemParams& params);

/// Steady stored energy (absolute units, i.e. multiplied by omega0) from the
/// reservoir-specific closed form.
double stored_energy_closed(const SystemParams& params);

/// Stored energy at Gamma_C = 2g, delta = 1, eta = 1 (other fields of
/// `params` supply g, Gamma_B, occupation and omega0).
double stored_energy_optimal(const SystemParams& params);

/// Ergotropy at the optimal point. Closed forms exist only there, so
/// `optimal = false` throws InvalidArgument. Exactly zero past the critical
/// dissipation rate.
double ergotropy_closed(const SystemParams& params, bool optimal = true);

/// Battery dissipation rate (in units of g) above which the optimal-point
/// ergotropy vanishes.
double critical_gammaB(ReservoirKind kind, double n);

struct ReferenceParams {
    double F = 0.04;
    double gammaC = 0.04;
    double g = 0.01;
    double n_f = 0.0;
    double omega0 = 1.0;
};

struct ReferenceResult {
    double stored_energy = 0.0;
    double ergotropy = 0.0;
};

/// Steady stored energy and ergotropy of the coherently driven reference
/// charger in a fermionic reservoir.
ReferenceResult reference_scheme(const ReferenceParams& params);

}  // namespace qbatt
