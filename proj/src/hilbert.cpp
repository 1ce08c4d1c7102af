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

#include "qbatt/hilbert.hpp"

#include <cmath>
#include <string>

namespace qbatt {

ComplexMatrix qubit_op(QubitOp name) {
    using namespace std::complex_literals;
    switch (name) {
        case QubitOp::Sx: return {{0.0, 1.0}, {1.0, 0.0}};
        case QubitOp::Sy: return {{0.0, -1i}, {1i, 0.0}};
        case QubitOp::Sz: return {{1.0, 0.0}, {0.0, -1.0}};
        case QubitOp::Sp: return {{0.0, 1.0}, {0.0, 0.0}};
        case QubitOp::Sm: return {{0.0, 0.0}, {1.0, 0.0}};
        case QubitOp::Id: return ComplexMatrix::identity(2);
    }
    throw Error(ErrorCode::InvalidArgument, "qubit_op: unknown operator");
}

std::string_view to_string(BasisKind kind) noexcept {
    switch (kind) {
        case BasisKind::TwoQubitGlobal: return "two_qubit";
        case BasisKind::FullProduct: return "full";
        case BasisKind::DickeReduced: return "dicke";
    }
    return "unknown";
}

std::size_t BasisSpec::dimension() const { return 2 * battery_dimension(); }

std::size_t BasisSpec::battery_dimension() const {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "BasisSpec: n must be >= 1");
    switch (kind) {
        case BasisKind::TwoQubitGlobal:
            if (n != 1) throw Error(ErrorCode::UnsupportedN, "TwoQubitGlobal requires n = 1");
            return 2;
        case BasisKind::FullProduct:
            if (n > 20) throw Error(ErrorCode::DimensionGuard, "FullProduct: n too large");
            return std::size_t{1} << n;
        case BasisKind::DickeReduced: return static_cast<std::size_t>(n) + 1;
    }
    throw Error(ErrorCode::InvalidArgument, "BasisSpec: unknown kind");
}

ComplexMatrix embed(const ComplexMatrix& op, int site, int n) {
    if (op.rows() != 2 || op.cols() != 2) {
        throw Error(ErrorCode::DimensionMismatch, "embed: operator must be 2x2");
    }
    if (site < 0 || site > n) {
        throw Error(ErrorCode::SiteOutOfRange,
                    "embed: site " + std::to_string(site) + " outside [0, " + std::to_string(n) + "]");
    }
    const ComplexMatrix id = ComplexMatrix::identity(2);
    ComplexMatrix out = site == 0 ? op : id;
    for (int k = 1; k <= n; ++k) out = kron(out, k == site ? op : id);
    return out;
}

ComplexMatrix embed_battery(const ComplexMatrix& op, int site, int n) {
    if (site < 0 || site >= n) {
        throw Error(ErrorCode::SiteOutOfRange, "embed_battery: site " + std::to_string(site));
    }
    const ComplexMatrix id = ComplexMatrix::identity(2);
    ComplexMatrix out = site == 0 ? op : id;
    for (int k = 1; k < n; ++k) out = kron(out, k == site ? op : id);
    return out;
}

CollectiveOps collective_ops(int n) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "collective_ops: n must be >= 1");
    const std::size_t d = static_cast<std::size_t>(n) + 1;
    const double j = 0.5 * n;
    CollectiveOps ops{ComplexMatrix(d, d), ComplexMatrix(d, d), ComplexMatrix(d, d)};
    for (std::size_t k = 0; k < d; ++k) {
        const double m = -j + static_cast<double>(k);
        ops.sz(k, k) = m;
        if (k + 1 < d) ops.sp(k + 1, k) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
    }
    ops.sm = ops.sp.adjoint();
    return ops;
}

CollectiveOps collective_ops_full(int n) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "collective_ops_full: n must be >= 1");
    const std::size_t d = std::size_t{1} << n;
    CollectiveOps ops{ComplexMatrix(d, d), ComplexMatrix(d, d), ComplexMatrix(d, d)};
    const ComplexMatrix sp = qubit_op(QubitOp::Sp);
    const ComplexMatrix sz = qubit_op(QubitOp::Sz);
    for (int i = 0; i < n; ++i) {
        ops.sp += embed_battery(sp, i, n);
        ops.sz += 0.5 * embed_battery(sz, i, n);
    }
    ops.sm = ops.sp.adjoint();
    return ops;
}

ComplexMatrix pairwise_exchange(int n, BasisKind kind) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "pairwise_exchange: n must be >= 1");
    switch (kind) {
        case BasisKind::DickeReduced: {
            // S+S- - (Sz + n/2) removes the i == j terms of sum_ij sigma_i^+ sigma_j^-.
            const CollectiveOps ops = collective_ops(n);
            ComplexMatrix out = ops.sp * ops.sm - ops.sz;
            for (std::size_t k = 0; k < out.rows(); ++k) out(k, k) -= 0.5 * n;
            return out;
        }
        case BasisKind::FullProduct:
        case BasisKind::TwoQubitGlobal: {
            const std::size_t d = std::size_t{1} << n;
            ComplexMatrix out(d, d);
            const ComplexMatrix sp = qubit_op(QubitOp::Sp);
            const ComplexMatrix sm = qubit_op(QubitOp::Sm);
            for (int i = 0; i < n; ++i) {
                const ComplexMatrix spi = embed_battery(sp, i, n);
                const ComplexMatrix smi = embed_battery(sm, i, n);
                for (int j = i + 1; j < n; ++j) {
                    out += spi * embed_battery(sm, j, n);
                    out += smi * embed_battery(sp, j, n);
                }
            }
            return out;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "pairwise_exchange: unknown basis kind");
}

}  // namespace qbatt
