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

#include <optional>
#include <string_view>
#include <vector>

#include "qbatt/hilbert.hpp"
#include "qbatt/linalg.hpp"

namespace qbatt {

enum class ReservoirKind { Bosonic, Fermionic };

std::string_view to_string(ReservoirKind kind) noexcept;

/// Thermal occupation for dimensionless temperature T (k_B T / omega0).
/// Bosonic: 1/(e^{1/T} - 1); fermionic: 1/(e^{1/T} + 1); T = 0 gives 0.
double occupation(ReservoirKind kind, double T);

/// Physical parameters of the charger/battery model. Energies and rates are
/// absolute (omega0 sets the scale); `delta` is the feedback ratio f / gammaC.
struct SystemParams {
    double omega0 = 1.0;
    double g = 0.01;
    double J = 0.0;
    double gammaC = 0.02;
    double gammaB = 0.001;
    double delta = 1.0;
    double eta = 1.0;
    ReservoirKind reservoir = ReservoirKind::Bosonic;
    double T = 0.0;
    std::optional<double> n;  // direct occupation; takes precedence over T
    int N = 1;

    // Per-site couplings for FullProduct models. Empty means uniform g / J.
    // site_g has N entries; site_J has N entries, J_i multiplying every pair
    // (i, j > i).
    std::vector<double> site_g;
    std::vector<double> site_J;

    double feedback() const noexcept { return delta * gammaC; }
    double occupation() const;
    double gamma_down() const;
    double gamma_up() const;
    /// Throws DomainError / InvalidArgument on out-of-range fields.
    void validate() const;
};

/// Overall sign of the feedback commutator term. +1 is the physical choice
/// (delta = 1, gammaB = 0 charges the battery fully); -1 exists for mutation
/// testing of the cross-checks.
struct ModelConvention {
    int feedback_sign = +1;
};

/// Basis used when none is given: the two-qubit global basis for N = 1, the
/// Dicke-reduced basis otherwise.
BasisSpec default_basis(const SystemParams& params);

struct ModelOperators {
    BasisSpec basis;
    ComplexMatrix hamiltonian;     // interaction-picture H_SI
    ComplexMatrix charger_lower;   // sigma_C^-
    ComplexMatrix charger_y;       // sigma_C^y
    ComplexMatrix charger_x;       // sigma_C^x
    ComplexMatrix battery_lower;   // collective L_B^- = sum_i sigma_iB^-
    ComplexMatrix battery_energy;  // H_B on the full space, ground state at 0
};

ModelOperators build_operators(const SystemParams& params, const BasisSpec& basis);

/// Direct evaluation of d rho / dt.
ComplexMatrix lindblad_rhs(const SystemParams& params, const BasisSpec& basis,
                           const ComplexMatrix& rho, const ModelConvention& conv = {});
/// Infers the basis from rho's dimension (N = 1 uses the two-qubit basis).
ComplexMatrix lindblad_rhs(const SystemParams& params, const ComplexMatrix& rho);

/// Superoperator acting on column-stacked vec(rho).
struct Liouvillian {
    ComplexMatrix matrix;
    BasisSpec basis;

    std::size_t dim() const { return basis.dimension(); }
};

inline constexpr int kMaxFullProductN = 5;

Liouvillian build_liouvillian(const SystemParams& params, const BasisSpec& basis,
                              const ModelConvention& conv = {});

/// |g...g><g...g| for the charger and battery in the given basis.
ComplexMatrix ground_state(const BasisSpec& basis);

}  // namespace qbatt
