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

#include "qbatt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace qbatt {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols() || !a.is_square()) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(what) + ": " + std::to_string(a.rows()) + "x" +
                        std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                        std::to_string(b.cols()));
    }
}

double expectation(const ComplexMatrix& h, const ComplexMatrix& rho) {
    // Tr[H rho] without forming the product.
    cplx acc = 0.0;
    for (std::size_t i = 0; i < h.rows(); ++i) {
        for (std::size_t k = 0; k < h.cols(); ++k) acc += h(i, k) * rho(k, i);
    }
    return acc.real();
}

// Eigenvalues of rho in descending order, after clamping numerical noise.
std::vector<double> populations_descending(const ComplexMatrix& rho, double tol) {
    std::vector<double> r = hermitian_eigenvalues(rho);
    if (r.front() < -tol) {
        throw Error(ErrorCode::NotDensityMatrix,
                    "negative eigenvalue " + std::to_string(r.front()));
    }
    double sum = 0.0;
    for (double& x : r) {
        x = std::max(x, 0.0);
        sum += x;
    }
    for (double& x : r) x /= sum;
    std::stable_sort(r.begin(), r.end(), std::greater<>());
    return r;
}

}  // namespace

void check_density_matrix(const ComplexMatrix& rho, double tol) {
    if (!rho.is_square() || rho.empty()) {
        throw Error(ErrorCode::NotDensityMatrix, "density matrix must be square and non-empty");
    }
    if (rho.hermiticity_defect() > tol) {
        throw Error(ErrorCode::NotDensityMatrix, "density matrix is not Hermitian");
    }
    const cplx tr = rho.trace();
    if (std::abs(tr - 1.0) > tol) {
        throw Error(ErrorCode::NotDensityMatrix,
                    "density matrix trace " + std::to_string(tr.real()) + " != 1");
    }
    if (hermitian_eigenvalues(rho).front() < -tol) {
        throw Error(ErrorCode::NotDensityMatrix, "density matrix is not positive semidefinite");
    }
}

double stored_energy(const ComplexMatrix& rho_b, const ComplexMatrix& h_b,
                     const ComplexMatrix& rho_b0) {
    require_same_shape(rho_b, h_b, "stored_energy");
    require_same_shape(rho_b0, h_b, "stored_energy");
    return expectation(h_b, rho_b) - expectation(h_b, rho_b0);
}

double ergotropy_with_spectrum(const ComplexMatrix& rho_b, const ComplexMatrix& h_b,
                               std::vector<double> levels) {
    require_same_shape(rho_b, h_b, "ergotropy");
    constexpr double tol = 1e-8;
    if (std::abs(rho_b.trace() - 1.0) > tol || rho_b.hermiticity_defect() > tol) {
        throw Error(ErrorCode::NotDensityMatrix, "ergotropy: input is not a unit-trace Hermitian matrix");
    }
    if (levels.size() < rho_b.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "ergotropy: fewer energy levels than states");
    }
    std::stable_sort(levels.begin(), levels.end());
    const std::vector<double> r = populations_descending(rho_b, tol);
    double passive = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) passive += r[j] * levels[j];
    const double erg = expectation(h_b, rho_b) - passive;
    // The passive energy is a lower bound; tiny negatives are roundoff.
    return erg > 0.0 ? erg : 0.0;
}

double ergotropy(const ComplexMatrix& rho_b, const ComplexMatrix& h_b) {
    require_same_shape(rho_b, h_b, "ergotropy");
    return ergotropy_with_spectrum(rho_b, h_b, hermitian_eigenvalues(h_b));
}

std::vector<double> full_battery_spectrum(int n, double omega0) {
    if (n < 1 || n > 60) throw Error(ErrorCode::InvalidArgument, "full_battery_spectrum: bad N");
    // Only the lowest N + 1 levels can ever be paired with a Dicke state, so
    // the list is truncated there instead of materializing 2^N entries.
    std::vector<double> levels;
    const std::size_t want = static_cast<std::size_t>(n) + 1;
    double binom = 1.0;
    for (int k = 0; k <= n && levels.size() < want; ++k) {
        for (double c = 0; c < binom && levels.size() < want; c += 1.0) {
            levels.push_back(omega0 * k);
        }
        binom = binom * (n - k) / (k + 1);
    }
    return levels;
}

double ergotropy_dicke(const ComplexMatrix& rho_b, int n, double omega0, ErgotropyScope scope) {
    const BasisSpec basis = BasisSpec::dicke(n);
    const ComplexMatrix h = battery_hamiltonian(basis, omega0);
    if (scope == ErgotropyScope::SymmetricSector) return ergotropy(rho_b, h);
    return ergotropy_with_spectrum(rho_b, h, full_battery_spectrum(n, omega0));
}

double efficiency(double stored, double erg) {
    if (!(stored > 0.0)) {
        throw Error(ErrorCode::ZeroStoredEnergy, "efficiency: stored energy must be > 0");
    }
    return erg / stored;
}

ComplexMatrix partial_trace_charger(const ComplexMatrix& rho, const BasisSpec& basis) {
    const std::size_t d = basis.dimension();
    if (rho.rows() != d || rho.cols() != d) {
        throw Error(ErrorCode::DimensionMismatch,
                    "partial_trace_charger: rho is " + std::to_string(rho.rows()) +
                        "-dimensional, basis needs " + std::to_string(d));
    }
    const std::size_t db = basis.battery_dimension();
    ComplexMatrix out(db, db);
    for (std::size_t c = 0; c < 2; ++c) {
        for (std::size_t i = 0; i < db; ++i) {
            for (std::size_t j = 0; j < db; ++j) out(i, j) += rho(c * db + i, c * db + j);
        }
    }
    return out;
}

ComplexMatrix battery_hamiltonian(const BasisSpec& basis, double omega0) {
    const std::size_t db = basis.battery_dimension();
    ComplexMatrix h(db, db);
    for (std::size_t k = 0; k < db; ++k) {
        double excitations = 0.0;
        if (basis.kind == BasisKind::DickeReduced) {
            excitations = static_cast<double>(k);
        } else {
            // Qubit index bit 0 means |e>; count zero bits over n qubits.
            for (int q = 0; q < basis.n; ++q) excitations += ((k >> q) & 1U) ? 0.0 : 1.0;
        }
        h(k, k) = omega0 * excitations;
    }
    return h;
}

ComplexMatrix battery_ground(const BasisSpec& basis) {
    const std::size_t db = basis.battery_dimension();
    ComplexMatrix rho(db, db);
    const std::size_t k = basis.kind == BasisKind::DickeReduced ? 0 : db - 1;
    rho(k, k) = 1.0;
    return rho;
}

BatteryMetrics battery_metrics(const ComplexMatrix& rho, const SystemParams& params,
                               const BasisSpec& basis, ErgotropyScope scope) {
    if (basis.n != params.N) {
        throw Error(ErrorCode::DimensionMismatch, "battery_metrics: basis and params.N differ");
    }
    const ComplexMatrix rho_b = partial_trace_charger(rho, basis);
    const ComplexMatrix h_b = battery_hamiltonian(basis, params.omega0);
    BatteryMetrics m;
    m.stored_energy = stored_energy(rho_b, h_b, battery_ground(basis));
    m.ergotropy = basis.kind == BasisKind::DickeReduced
                      ? ergotropy_dicke(rho_b, basis.n, params.omega0, scope)
                      : ergotropy(rho_b, h_b);
    m.efficiency_R = m.stored_energy > 0.0 ? efficiency(m.stored_energy, m.ergotropy) : 0.0;
    m.energy_density = m.stored_energy / basis.n;
    m.avg_ergotropy = m.ergotropy / basis.n;
    return m;
}

BatteryMetrics multiparticle_metrics(const ComplexMatrix& rho, const SystemParams& params,
                                     ErgotropyScope scope) {
    return battery_metrics(rho, params, BasisSpec::dicke(params.N), scope);
}

}  // namespace qbatt
