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

#include <vector>

#include "qbatt/hilbert.hpp"
#include "qbatt/linalg.hpp"
#include "qbatt/model.hpp"

namespace qbatt {

struct BatteryMetrics {
    double stored_energy = 0.0;  // omega0 units when omega0 = 1
    double ergotropy = 0.0;
    double efficiency_R = 0.0;
    double energy_density = 0.0;  // per particle
    double avg_ergotropy = 0.0;   // per particle
};

/// Which unitaries the ergotropy optimizes over for a Dicke-reduced state.
enum class ErgotropyScope {
    FullSpace,        // all unitaries on the 2^N battery space
    SymmetricSector,  // unitaries restricted to the (N+1)-dim multiplet
};

/// Tr[H rho] - Tr[H rho0].
double stored_energy(const ComplexMatrix& rho_b, const ComplexMatrix& h_b,
                     const ComplexMatrix& rho_b0);

/// Tr[H rho] minus the passive-state energy for the spectrum of h_b.
double ergotropy(const ComplexMatrix& rho_b, const ComplexMatrix& h_b);

/// Ergotropy against an explicit ascending energy list. `levels` may be
/// longer than rho's dimension; rho's spectrum is then zero-padded.
double ergotropy_with_spectrum(const ComplexMatrix& rho_b, const ComplexMatrix& h_b,
                               std::vector<double> levels);

/// Ergotropy of a symmetric-multiplet battery state (basis m ascending).
double ergotropy_dicke(const ComplexMatrix& rho_b, int n, double omega0,
                       ErgotropyScope scope = ErgotropyScope::FullSpace);

/// Ascending spectrum {k omega0 with multiplicity C(N, k)}.
std::vector<double> full_battery_spectrum(int n, double omega0);

/// R = erg / E. Throws ZeroStoredEnergy for E <= 0.
double efficiency(double stored, double erg);

/// Tr_C of a charger (x) battery state (charger is the leading factor).
ComplexMatrix partial_trace_charger(const ComplexMatrix& rho, const BasisSpec& basis);

/// Battery Hamiltonian on the battery factor alone, ground energy 0.
ComplexMatrix battery_hamiltonian(const BasisSpec& basis, double omega0);

/// Ground state of the battery factor alone.
ComplexMatrix battery_ground(const BasisSpec& basis);

/// Throws NotDensityMatrix unless rho is Hermitian, unit trace and PSD to tol.
void check_density_matrix(const ComplexMatrix& rho, double tol = 1e-8);

/// Energetics of a composite steady state. For the Dicke basis the
/// ergotropy uses `scope`; other bases use the exact battery Hamiltonian.
BatteryMetrics battery_metrics(const ComplexMatrix& rho, const SystemParams& params,
                               const BasisSpec& basis,
                               ErgotropyScope scope = ErgotropyScope::FullSpace);

/// Convenience for the charger (x) Dicke representation.
BatteryMetrics multiparticle_metrics(const ComplexMatrix& rho, const SystemParams& params,
                                     ErgotropyScope scope = ErgotropyScope::FullSpace);

}  // namespace qbatt
