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

#include "qbatt/steady.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qbatt {

std::string_view to_string(SteadyMethod method) noexcept {
    switch (method) {
        case SteadyMethod::NumericKernel: return "numeric_kernel";
        case SteadyMethod::AnalyticBoson: return "analytic_boson";
        case SteadyMethod::AnalyticFermion: return "analytic_fermion";
    }
    return "unknown";
}

namespace {

double residual_of(const Liouvillian& l, const ComplexMatrix& rho) {
    const std::vector<cplx> v = vec(rho);
    std::vector<cplx> out(v.size());
    multiply(l.matrix, v, out);
    double r = 0.0;
    for (const cplx& z : out) r = std::max(r, std::abs(z));
    return r;
}

void require_single_cell(const SystemParams& p, const char* what) {
    if (p.N != 1) {
        throw Error(ErrorCode::UnsupportedN,
                    std::string(what) + ": closed forms exist for N = 1 only (got N = " +
                        std::to_string(p.N) + ")");
    }
}

void require_perfect_detection(const SystemParams& p, const char* what) {
    if (p.eta != 1.0) {
        throw Error(ErrorCode::DomainError,
                    std::string(what) + ": optimal-point closed forms assume eta = 1");
    }
}

}  // namespace

SteadyReport steady_numeric(const Liouvillian& liouvillian, const SteadyOptions& opts) {
    const std::size_t d = liouvillian.dim();
    const std::size_t d2 = d * d;
    if (liouvillian.matrix.rows() != d2 || liouvillian.matrix.cols() != d2) {
        throw Error(ErrorCode::DimensionMismatch, "steady_numeric: superoperator size mismatch");
    }
    // Trace is preserved, so row sums of the trace functional vanish and one
    // equation is redundant; replace it with Tr(rho) = 1.
    ComplexMatrix bordered = liouvillian.matrix;
    std::size_t trace_row = 0;
    for (std::size_t k = 0; k < d2; ++k) bordered(trace_row, k) = 0.0;
    for (std::size_t i = 0; i < d; ++i) bordered(trace_row, i * d + i) = 1.0;

    const LuDecomposition lu(std::move(bordered));
    if (lu.pivot_ratio() < opts.degeneracy_threshold) {
        throw Error(ErrorCode::DegenerateSteadyState,
                    "steady_numeric: kernel is not one-dimensional (pivot ratio " +
                        std::to_string(lu.pivot_ratio()) + ")");
    }
    std::vector<cplx> rhs(d2);
    rhs[trace_row] = 1.0;
    const std::vector<cplx> x = lu.solve(rhs);
    ComplexMatrix rho = unvec(x, d);
    rho = 0.5 * (rho + rho.adjoint());
    const cplx tr = rho.trace();
    if (std::abs(tr) == 0.0 || !std::isfinite(std::abs(tr))) {
        throw Error(ErrorCode::NoSteadyState, "steady_numeric: solution has zero trace");
    }
    rho *= 1.0 / tr.real();

    SteadyReport report;
    report.basis = liouvillian.basis;
    report.method = SteadyMethod::NumericKernel;
    report.residual = residual_of(liouvillian, rho);
    const double scale = std::max(liouvillian.matrix.max_abs(), 1e-300);
    if (report.residual > opts.residual_tolerance * scale) {
        throw Error(ErrorCode::NoSteadyState,
                    "steady_numeric: residual " + std::to_string(report.residual) +
                        " exceeds tolerance");
    }
    const std::vector<double> ev = hermitian_eigenvalues(rho);
    if (ev.front() < -opts.positivity_tolerance) {
        throw Error(ErrorCode::NoSteadyState,
                    "steady_numeric: kernel element is not positive (min eigenvalue " +
                        std::to_string(ev.front()) + ")");
    }
    report.rho_inf = std::move(rho);
    return report;
}

SteadyReport steady_numeric(const SystemParams& params, const BasisSpec& basis,
                            const ModelConvention& conv, const SteadyOptions& opts) {
    SteadyReport report = steady_numeric(build_liouvillian(params, basis, conv), opts);
    report.params = params;
    return report;
}

SteadyReport steady_numeric(const SystemParams& params) {
    return steady_numeric(params, default_basis(params));
}

SteadyReport steady_from_initial(const Liouvillian& liouvillian, const ComplexMatrix& rho0,
                                 const SteadyOptions& opts) {
    const std::size_t d = liouvillian.dim();
    const std::size_t d2 = d * d;
    if (rho0.rows() != d || rho0.cols() != d) {
        throw Error(ErrorCode::DimensionMismatch, "steady_from_initial: rho0 dimension mismatch");
    }
    // T = s (s - L)^{-1} fixes the kernel and contracts every decaying mode by
    // s / |s - lambda|. The shift trades contraction speed against roundoff
    // mixing inside a degenerate kernel, which grows like eps ||L|| / s.
    const double scale = std::max(liouvillian.matrix.max_abs(), 1e-300);
    const double shift = 1e-4 * scale;
    ComplexMatrix a = -1.0 * liouvillian.matrix;
    for (std::size_t i = 0; i < d2; ++i) a(i, i) += shift;
    const LuDecomposition lu(std::move(a));

    std::vector<cplx> x = vec(rho0);
    constexpr int kMaxIter = 200;
    for (int it = 0; it < kMaxIter; ++it) {
        std::vector<cplx> y = lu.solve(x);
        cplx tr = 0.0;
        for (std::size_t i = 0; i < d; ++i) tr += y[i * d + i];
        double change = 0.0;
        for (std::size_t k = 0; k < d2; ++k) {
            y[k] /= tr;
            change = std::max(change, std::abs(y[k] - x[k]));
        }
        x.swap(y);
        if (change < 1e-12) break;
    }
    ComplexMatrix rho = unvec(x, d);
    rho = 0.5 * (rho + rho.adjoint());
    rho *= 1.0 / rho.trace().real();

    SteadyReport report;
    report.basis = liouvillian.basis;
    report.method = SteadyMethod::NumericKernel;
    report.residual = residual_of(liouvillian, rho);
    if (report.residual > opts.residual_tolerance * scale) {
        throw Error(ErrorCode::NoSteadyState,
                    "steady_from_initial: residual " + std::to_string(report.residual) +
                        " exceeds tolerance");
    }
    if (hermitian_eigenvalues(rho).front() < -opts.positivity_tolerance) {
        throw Error(ErrorCode::NoSteadyState, "steady_from_initial: state is not positive");
    }
    report.rho_inf = std::move(rho);
    return report;
}

SteadyReport steady_state(const SystemParams& params, const BasisSpec& basis,
                          const ModelConvention& conv) {
    if (basis.kind != BasisKind::FullProduct) return steady_numeric(params, basis, conv);
    SteadyReport report =
        steady_from_initial(build_liouvillian(params, basis, conv), ground_state(basis));
    report.params = params;
    return report;
}

SteadyReport steady_analytic(const SystemParams& params) {
    params.validate();
    require_single_cell(params, "steady_analytic");
    using namespace std::complex_literals;
    const double g = params.g;
    const double gc = params.gammaC;
    const double gb = params.gammaB;
    const double d = params.delta;
    const double eta = params.eta;
    const double n = params.occupation();
    const ClosedFormAux aux = closed_form_aux(params);
    const double S = aux.S;
    const double sd = S - d * d;
    const double g4 = 4.0 * g * g;

    double r11, r22, r33, r44;
    cplx r14, r23;
    if (params.reservoir == ReservoirKind::Bosonic) {
        const double Q = aux.Qb;
        const double W = aux.Wb;
        const double lin = 2.0 * Q + (gc + gb - 2.0 * gc * d) * eta;
        const double den = (1.0 + 2.0 * n) * W * S + g4 * lin * lin;
        r11 = (g4 * Q * Q + n * d * d * W) / den;
        r22 = (g4 * Q * gc * sd + (1.0 + n) * (d * d * W + g4 * Q * gb * eta)) / den;
        r33 = (g4 * Q * ((1.0 + n) * gb * eta + gc * sd) + n * W * sd) / den;
        const double u = gc * sd + (1.0 + n) * gb * eta;
        r44 = (g4 * u * u + (1.0 + n) * W * sd) / den;
        const double coh = d * d + n * (2.0 * d - 1.0) * eta;
        r14 = 4i * g * d * (d - eta) * gc * gc * gb * coh / den;
        r23 = 2i * g * gc * gb * coh * (2.0 * Q + (gc * (1.0 - 2.0 * d) + gb) * eta) / den;
    } else {
        const double Q = aux.Qf;
        const double W = aux.Wf;
        const double lin = gb * eta + gc * S;
        const double den = g4 * lin * lin + W * S;
        const double u = (1.0 - n) * gb * eta + gc * sd;
        r11 = (g4 * Q * Q + n * d * d * W) / den;
        r22 = ((1.0 - n) * d * d * W + g4 * Q * u) / den;
        r33 = (n * sd * W + g4 * Q * u) / den;
        r44 = ((1.0 - n) * sd * W + g4 * u * u) / den;
        const double coh = (2.0 * n - 1.0) * d * d + n * eta * (1.0 - 2.0 * d);
        r14 = -4i * g * gc * gc * d * gb * (d - eta) * coh / den;
        r23 = -2i * g * gc * gb * coh * lin / den;
    }
    ComplexMatrix rho(4, 4);
    rho(0, 0) = r11;
    rho(1, 1) = r22;
    rho(2, 2) = r33;
    rho(3, 3) = r44;
    rho(0, 3) = r14;
    rho(3, 0) = std::conj(r14);
    rho(1, 2) = r23;
    rho(2, 1) = std::conj(r23);
    if (!std::isfinite(rho.max_abs())) {
        throw Error(ErrorCode::DegenerateSteadyState,
                    "steady_analytic: closed form is singular at these parameters");
    }

    SteadyReport report;
    report.rho_inf = std::move(rho);
    report.method = params.reservoir == ReservoirKind::Bosonic ? SteadyMethod::AnalyticBoson
                                                               : SteadyMethod::AnalyticFermion;
    report.params = params;
    report.basis = BasisSpec::two_qubit();
    report.residual = residual_of(build_liouvillian(params, report.basis), report.rho_inf);
    return report;
}

ClosedFormAux closed_form_aux(const SystemParams& params) {
    const double g = params.g;
    const double gc = params.gammaC;
    const double gb = params.gammaB;
    const double d = params.delta;
    const double eta = params.eta;
    const double n = params.occupation();
    ClosedFormAux a;
    a.S = 2.0 * d * (d - eta) + eta;
    a.Qb = gc * d * d + n * gb * eta;
    a.Wb = gc * gb * (gc + gb + 2.0 * n * gb) *
           (4.0 * a.Qb + (gc + gb - 4.0 * gc * d - 2.0 * n * gb) * eta);
    a.Qf = a.Qb;
    a.Wf = gc * gb * (gc + gb) * (gb * eta + gc * (2.0 * a.S - eta));
    a.beta_b = -4.0 * g * g + 4.0 * g * gb + (1.0 + 2.0 * n) * gb * gb;
    a.beta_f = 4.0 * g * g + 4.0 * g * (2.0 * n - 1.0) * gb + (2.0 * n - 1.0) * gb * gb;
    return a;
}

double stored_energy_closed(const SystemParams& params) {
    params.validate();
    require_single_cell(params, "stored_energy_closed");
    const ClosedFormAux a = closed_form_aux(params);
    const double g4 = 4.0 * params.g * params.g;
    const double gc = params.gammaC;
    const double gb = params.gammaB;
    const double eta = params.eta;
    const double n = params.occupation();
    if (params.reservoir == ReservoirKind::Bosonic) {
        const double lin = 2.0 * a.Qb + gc * (1.0 - 2.0 * params.delta) * eta + gb * eta;
        return params.omega0 * (n * a.Wb * a.S + g4 * a.Qb * lin) /
               ((1.0 + 2.0 * n) * a.Wb * a.S + g4 * lin * lin);
    }
    const double lin = gb * eta + gc * a.S;
    return params.omega0 * (g4 * a.Qf * lin + n * a.Wf * a.S) / (g4 * lin * lin + a.Wf * a.S);
}

double stored_energy_optimal(const SystemParams& params) {
    params.validate();
    require_single_cell(params, "stored_energy_optimal");
    require_perfect_detection(params, "stored_energy_optimal");
    const double g = params.g;
    const double gb = params.gammaB;
    const double n = params.occupation();
    if (params.reservoir == ReservoirKind::Bosonic) {
        const double den = 2.0 * g + gb + 2.0 * n * gb;
        return params.omega0 * (4.0 * g * g + 4.0 * g * n * gb + n * (1.0 + 2.0 * n) * gb * gb) /
               (den * den);
    }
    const double den = 2.0 * g + gb;
    return params.omega0 * (4.0 * g * g + n * (gb * gb + 4.0 * g * gb)) / (den * den);
}

double ergotropy_closed(const SystemParams& params, bool optimal) {
    if (!optimal) {
        throw Error(ErrorCode::InvalidArgument,
                    "ergotropy_closed: closed forms exist only at the optimal point; "
                    "use the numeric steady state and metrics::ergotropy");
    }
    params.validate();
    require_single_cell(params, "ergotropy_closed");
    require_perfect_detection(params, "ergotropy_closed");
    const ClosedFormAux a = closed_form_aux(params);
    const double g = params.g;
    const double gb = params.gammaB;
    const double n = params.occupation();
    if (params.reservoir == ReservoirKind::Bosonic) {
        if (a.beta_b >= 0.0) return 0.0;
        const double den = 2.0 * g + gb * (1.0 + 2.0 * n);
        return params.omega0 * (-a.beta_b) / (den * den);
    }
    if (a.beta_f <= 0.0) return 0.0;
    const double den = 2.0 * g + gb;
    return params.omega0 * a.beta_f / (den * den);
}

double critical_gammaB(ReservoirKind kind, double n) {
    if (!(n >= 0.0)) throw Error(ErrorCode::DomainError, "critical_gammaB: n must be >= 0");
    if (kind == ReservoirKind::Bosonic) {
        return 2.0 * (-1.0 + std::sqrt(2.0) * std::sqrt(1.0 + n)) / (1.0 + 2.0 * n);
    }
    if (n >= 0.5) {
        throw Error(ErrorCode::DomainError, "critical_gammaB: fermionic occupation must be < 1/2");
    }
    return 2.0 / (1.0 - 2.0 * n + std::sqrt(4.0 * n * n - 6.0 * n + 2.0));
}

ReferenceResult reference_scheme(const ReferenceParams& p) {
    if (!(p.F > 0.0 && p.gammaC > 0.0 && p.g > 0.0)) {
        throw Error(ErrorCode::DomainError, "reference_scheme: F, gammaC and g must be > 0");
    }
    if (!(p.n_f >= 0.0 && p.n_f < 0.5)) {
        throw Error(ErrorCode::DomainError, "reference_scheme: n_f must lie in [0, 1/2)");
    }
    const double n = p.n_f;
    const double g2 = p.g * p.g;
    const double g4 = g2 * g2;
    const double F2 = p.F * p.F;
    const double F4 = F2 * F2;
    const double G2 = p.gammaC * p.gammaC;
    const double G4 = G2 * G2;
    const double m = 1.0 - 2.0 * n;
    const double A = F2 * g2 * (1.0 - 8.0 * (n - 1.0) * n) + F4 * m * m + 4.0 * g4 * n;
    const double B = F2 * m * m + 4.0 * g2 * n;
    const double P = 4.0 * F4 * g2 + 2.0 * A * G2 + B * G4;
    const double den = 4.0 * F4 * g2 + 2.0 * (A + 2.0 * g4 * m) * G2 + (B + 2.0 * g2 * m) * G4;
    ReferenceResult r;
    r.stored_energy = p.omega0 * P / (2.0 * den);
    const double s = 2.0 * g2 + G2;
    const double radicand = g2 * (B + g2 * (1.0 - 4.0 * n)) * m * m * G4 * s * s;
    const double erg = 0.5 * p.omega0 * (-1.0 + 2.0 * std::sqrt(std::max(radicand, 0.0)) / den + P / den);
    r.ergotropy = erg > 0.0 ? erg : 0.0;
    return r;
}

}  // namespace qbatt
