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

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "qbatt/error.hpp"

namespace qbatt {

using cplx = std::complex<double>;

/// Dense row-major complex matrix. Used for operators, density matrices,
/// superoperators and (as n x 1 matrices) vectors.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(std::span<const cplx> diag);
    static ComplexMatrix column(std::span<const cplx> entries);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }
    bool empty() const noexcept { return data_.empty(); }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<cplx> data() noexcept { return data_; }
    std::span<const cplx> data() const noexcept { return data_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conj() const;

    cplx trace() const;
    double max_abs() const noexcept;
    double frobenius_norm() const noexcept;
    /// Maximum absolute row sum.
    double inf_norm() const noexcept;
    /// max_ij |M_ij - conj(M_ji)|.
    double hermiticity_defect() const;
    bool is_hermitian(double rel_tol = 1e-12) const;

    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator-=(const ComplexMatrix& rhs);
    ComplexMatrix& operator*=(cplx s);

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, ComplexMatrix a);
ComplexMatrix operator*(ComplexMatrix a, cplx s);

/// Matrix-vector product on raw storage; `out` must not alias `v`.
void multiply(const ComplexMatrix& m, std::span<const cplx> v, std::span<cplx> out);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// max_ij |a_ij - b_ij|; throws DimensionMismatch on shape mismatch.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Column-stacking vectorization: vec(X)[i + j*d] = X(i, j).
std::vector<cplx> vec(const ComplexMatrix& x);
ComplexMatrix unvec(std::span<const cplx> v, std::size_t d);

struct EigenResult {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // columns are orthonormal eigenvectors
};

struct JacobiOptions {
    int max_sweeps = 100;
    double off_tolerance = 1e-13;  // relative to the Frobenius norm of the input
    double hermitian_tolerance = 1e-10;
};

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
EigenResult hermitian_eigen(const ComplexMatrix& m, const JacobiOptions& opts = {});
/// Eigenvalues only (same algorithm, no eigenvector accumulation).
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m, const JacobiOptions& opts = {});

struct SvdResult {
    std::vector<double> singular_values;  // descending
    ComplexMatrix right_vectors;          // columns, ordered like singular_values
};

/// One-sided (Hestenes) Jacobi SVD. Only singular values and right vectors
/// are returned.
SvdResult jacobi_svd(const ComplexMatrix& m, int max_sweeps = 100);

/// Orthonormal basis of the numerical null space: right singular vectors with
/// singular value <= tol * sigma_max. Each entry is a d x 1 column.
std::vector<ComplexMatrix> kernel(const ComplexMatrix& m, double tol = 1e-9);

/// LU factorization with partial pivoting.
class LuDecomposition {
public:
    explicit LuDecomposition(ComplexMatrix a);

    std::vector<cplx> solve(std::span<const cplx> b) const;
    /// min |pivot| / max |pivot|; zero for an exactly singular input.
    double pivot_ratio() const noexcept { return pivot_ratio_; }

private:
    ComplexMatrix lu_;
    std::vector<std::size_t> perm_;
    double pivot_ratio_ = 0.0;
};

}  // namespace qbatt
