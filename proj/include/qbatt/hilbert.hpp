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

#include <cstddef>
#include <string_view>

#include "qbatt/linalg.hpp"

namespace qbatt {

// Single-qubit convention: |e> is index 0, |g> is index 1, sigma+ = |e><g|.
enum class QubitOp { Sx, Sy, Sz, Sp, Sm, Id };

ComplexMatrix qubit_op(QubitOp name);

enum class BasisKind {
    TwoQubitGlobal,  // |ee>, |eg>, |ge>, |gg> (charger label first)
    FullProduct,     // charger (x) N battery qubits, dimension 2^(N+1)
    DickeReduced,    // charger (x) symmetric spin-N/2 multiplet, dimension 2(N+1)
};

std::string_view to_string(BasisKind kind) noexcept;

struct BasisSpec {
    BasisKind kind = BasisKind::TwoQubitGlobal;
    int n = 1;  // battery particle count

    static BasisSpec two_qubit() { return {BasisKind::TwoQubitGlobal, 1}; }
    static BasisSpec full(int n) { return {BasisKind::FullProduct, n}; }
    static BasisSpec dicke(int n) { return {BasisKind::DickeReduced, n}; }

    /// Dimension of the composite charger (x) battery space.
    std::size_t dimension() const;
    /// Dimension of the battery factor alone.
    std::size_t battery_dimension() const;

    friend bool operator==(const BasisSpec&, const BasisSpec&) = default;
};

/// Embed a 2x2 operator at `site` of the charger (x) n-qubit product space.
/// Site 0 is the charger; sites 1..n are battery qubits.
ComplexMatrix embed(const ComplexMatrix& op, int site, int n);

/// Embed a 2x2 operator on battery qubit `site` (0-based) of an n-qubit
/// battery-only space.
ComplexMatrix embed_battery(const ComplexMatrix& op, int site, int n);

struct CollectiveOps {
    ComplexMatrix sp;
    ComplexMatrix sm;
    ComplexMatrix sz;
};

/// Spin-n/2 operators on the (n+1)-dimensional symmetric multiplet in the
/// basis |j, m>, m = -j..j ascending (index 0 is the all-ground state).
CollectiveOps collective_ops(int n);

/// Sum_i sigma_i^{+,-,z}/2-style collective operators on the full 2^n battery
/// space: sp = sum sigma_i^+, sm = sum sigma_i^-, sz = sum sigma_i^z / 2.
CollectiveOps collective_ops_full(int n);

/// Sum_{i<j} (sigma_i^+ sigma_j^- + h.c.) on the battery space of the given
/// kind (FullProduct: 2^n dims, DickeReduced: n+1 dims).
ComplexMatrix pairwise_exchange(int n, BasisKind kind);

}  // namespace qbatt
