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

#include "qbatt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace qbatt {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NotHermitian: return "NotHermitian";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::SiteOutOfRange: return "SiteOutOfRange";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::DimensionGuard: return "DimensionGuard";
        case ErrorCode::DegenerateSteadyState: return "DegenerateSteadyState";
        case ErrorCode::NoSteadyState: return "NoSteadyState";
        case ErrorCode::UnsupportedN: return "UnsupportedN";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::NotDensityMatrix: return "NotDensityMatrix";
        case ErrorCode::ZeroStoredEnergy: return "ZeroStoredEnergy";
        case ErrorCode::StepTooLarge: return "StepTooLarge";
        case ErrorCode::NotConverged: return "NotConverged";
        case ErrorCode::NonPhysicalState: return "NonPhysicalState";
        case ErrorCode::FlatObjective: return "FlatObjective";
        case ErrorCode::UnknownFigure: return "UnknownFigure";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(op) + ": " + std::to_string(a.rows()) + "x" +
                        std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                        std::to_string(b.cols()));
    }
}

// Unitary 2x2 rotation acting on indices (p, q) that zeroes the (p, q)
// element of the Hermitian block [[app, apq], [conj(apq), aqq]]:
//   J = [[c, s*e], [-s*conj(e), c]],  e = apq / |apq|.
struct Rotation {
    double c;
    double s;
    cplx e;
};

Rotation jacobi_rotation(double app, double aqq, cplx apq) {
    const double mag = std::abs(apq);
    const double theta = (aqq - app) / (2.0 * mag);
    double t;
    if (std::abs(theta) > 1e150) {
        t = 0.5 / theta;
    } else {
        t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    }
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    return {c, t * c, apq / mag};
}

// M <- M J on columns p, q.
void rotate_columns(ComplexMatrix& m, std::size_t p, std::size_t q, const Rotation& r) {
    const cplx spq = r.s * r.e;
    const cplx sqp = -r.s * std::conj(r.e);
    for (std::size_t k = 0; k < m.rows(); ++k) {
        const cplx mkp = m(k, p);
        const cplx mkq = m(k, q);
        m(k, p) = r.c * mkp + sqp * mkq;
        m(k, q) = spq * mkp + r.c * mkq;
    }
}

// M <- J^dagger M on rows p, q.
void rotate_rows(ComplexMatrix& m, std::size_t p, std::size_t q, const Rotation& r) {
    const cplx a = -r.s * r.e;
    const cplx b = r.s * std::conj(r.e);
    for (std::size_t k = 0; k < m.cols(); ++k) {
        const cplx mpk = m(p, k);
        const cplx mqk = m(q, k);
        m(p, k) = r.c * mpk + a * mqk;
        m(q, k) = b * mpk + r.c * mqk;
    }
}

double off_diagonal_norm(const ComplexMatrix& a) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (i != j) sum += std::norm(a(i, j));
        }
    }
    return std::sqrt(sum);
}

EigenResult jacobi(const ComplexMatrix& m, const JacobiOptions& opts, bool want_vectors) {
    if (!m.is_square()) {
        throw Error(ErrorCode::DimensionMismatch, "hermitian_eigen: matrix not square");
    }
    const double scale = m.max_abs();
    if (m.hermiticity_defect() > opts.hermitian_tolerance * scale) {
        throw Error(ErrorCode::NotHermitian, "hermitian_eigen: input violates hermiticity");
    }
    const std::size_t n = m.rows();
    ComplexMatrix a = m;
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = a(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            const cplx avg = 0.5 * (a(i, j) + std::conj(a(j, i)));
            a(i, j) = avg;
            a(j, i) = std::conj(avg);
        }
    }
    ComplexMatrix v = want_vectors ? ComplexMatrix::identity(n) : ComplexMatrix{};
    const double norm = a.frobenius_norm();

    bool converged = norm == 0.0;
    for (int sweep = 0; sweep < opts.max_sweeps && !converged; ++sweep) {
        if (off_diagonal_norm(a) <= opts.off_tolerance * norm) {
            converged = true;
            break;
        }
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag == 0.0) continue;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                // Element below the rounding level of both diagonal entries.
                if (sweep > 3 && std::abs(app) + 100.0 * mag == std::abs(app) &&
                    std::abs(aqq) + 100.0 * mag == std::abs(aqq)) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                const Rotation r = jacobi_rotation(app, aqq, apq);
                rotate_columns(a, p, q, r);
                rotate_rows(a, p, q, r);
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                if (want_vectors) rotate_columns(v, p, q, r);
                rotated = true;
            }
        }
        if (!rotated) converged = true;
    }
    if (!converged && off_diagonal_norm(a) > opts.off_tolerance * norm) {
        throw Error(ErrorCode::NoConvergence,
                    "hermitian_eigen: no convergence after " + std::to_string(opts.max_sweeps) +
                        " sweeps");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return a(i, i).real() < a(j, j).real();
    });
    EigenResult out;
    out.values.reserve(n);
    for (std::size_t k : order) out.values.push_back(a(k, k).real());
    if (want_vectors) {
        out.vectors = ComplexMatrix(n, n);
        for (std::size_t c = 0; c < n; ++c) {
            for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = v(r, order[c]);
        }
    }
    return out;
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
        throw Error(ErrorCode::DimensionMismatch, "ComplexMatrix: entry count != rows*cols");
    }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_) {
            throw Error(ErrorCode::DimensionMismatch, "ComplexMatrix: ragged initializer");
        }
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> diag) {
    ComplexMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

ComplexMatrix ComplexMatrix::column(std::span<const cplx> entries) {
    return ComplexMatrix(entries.size(), 1, std::vector<cplx>(entries.begin(), entries.end()));
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    }
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    }
    return out;
}

ComplexMatrix ComplexMatrix::conj() const {
    ComplexMatrix out = *this;
    for (auto& z : out.data_) z = std::conj(z);
    return out;
}

cplx ComplexMatrix::trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::max_abs() const noexcept {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
}

double ComplexMatrix::frobenius_norm() const noexcept {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
}

double ComplexMatrix::inf_norm() const noexcept {
    double best = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) row += std::abs((*this)(i, j));
        best = std::max(best, row);
    }
    return best;
}

double ComplexMatrix::hermiticity_defect() const {
    if (!is_square()) {
        throw Error(ErrorCode::DimensionMismatch, "hermiticity_defect: matrix not square");
    }
    double d = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = i; j < cols_; ++j) {
            d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        }
    }
    return d;
}

bool ComplexMatrix::is_hermitian(double rel_tol) const {
    return is_square() && hermiticity_defect() <= rel_tol * max_abs();
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
    require_same_shape(*this, rhs, "operator+=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
    require_same_shape(*this, rhs, "operator-=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    for (auto& z : data_) z *= s;
    return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "operator*: inner dimensions differ");
    }
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

void multiply(const ComplexMatrix& m, std::span<const cplx> v, std::span<cplx> out) {
    if (v.size() != m.cols() || out.size() != m.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "multiply: vector length mismatch");
    }
    const auto d = m.data();
    const std::size_t n = m.cols();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        cplx acc = 0.0;
        const cplx* row = d.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) acc += row[j] * v[j];
        out[i] = acc;
    }
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx{}) continue;
            for (std::size_t k = 0; k < b.rows(); ++k) {
                for (std::size_t l = 0; l < b.cols(); ++l) {
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
                }
            }
        }
    }
    return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k) {
        m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
    }
    return m;
}

std::vector<cplx> vec(const ComplexMatrix& x) {
    std::vector<cplx> v(x.rows() * x.cols());
    for (std::size_t j = 0; j < x.cols(); ++j) {
        for (std::size_t i = 0; i < x.rows(); ++i) v[i + j * x.rows()] = x(i, j);
    }
    return v;
}

ComplexMatrix unvec(std::span<const cplx> v, std::size_t d) {
    if (v.size() != d * d) throw Error(ErrorCode::DimensionMismatch, "unvec: length != d*d");
    ComplexMatrix x(d, d);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < d; ++i) x(i, j) = v[i + j * d];
    }
    return x;
}

EigenResult hermitian_eigen(const ComplexMatrix& m, const JacobiOptions& opts) {
    return jacobi(m, opts, true);
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m, const JacobiOptions& opts) {
    return jacobi(m, opts, false).values;
}

SvdResult jacobi_svd(const ComplexMatrix& m, int max_sweeps) {
    const std::size_t rows = m.rows();
    const std::size_t n = m.cols();
    ComplexMatrix w = m;
    ComplexMatrix v = ComplexMatrix::identity(n);
    constexpr double eps = std::numeric_limits<double>::epsilon();

    bool converged = false;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double alpha = 0.0;
                double beta = 0.0;
                cplx gamma = 0.0;
                for (std::size_t k = 0; k < rows; ++k) {
                    alpha += std::norm(w(k, p));
                    beta += std::norm(w(k, q));
                    gamma += std::conj(w(k, p)) * w(k, q);
                }
                if (std::abs(gamma) <= eps * std::sqrt(alpha * beta) || std::abs(gamma) == 0.0) {
                    continue;
                }
                const Rotation r = jacobi_rotation(alpha, beta, gamma);
                rotate_columns(w, p, q, r);
                rotate_columns(v, p, q, r);
                rotated = true;
            }
        }
        converged = !rotated;
    }
    if (!converged) {
        throw Error(ErrorCode::NoConvergence, "jacobi_svd: no convergence");
    }

    std::vector<double> sigma(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < rows; ++k) s += std::norm(w(k, j));
        sigma[j] = std::sqrt(s);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });
    SvdResult out;
    out.right_vectors = ComplexMatrix(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        out.singular_values.push_back(sigma[order[c]]);
        for (std::size_t r = 0; r < n; ++r) out.right_vectors(r, c) = v(r, order[c]);
    }
    return out;
}

std::vector<ComplexMatrix> kernel(const ComplexMatrix& m, double tol) {
    if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "kernel: matrix not square");
    const SvdResult svd = jacobi_svd(m);
    const std::size_t n = m.cols();
    const double sigma_max = svd.singular_values.empty() ? 0.0 : svd.singular_values.front();
    std::vector<ComplexMatrix> basis;
    for (std::size_t c = 0; c < n; ++c) {
        if (svd.singular_values[c] > tol * sigma_max) continue;
        ComplexMatrix col(n, 1);
        for (std::size_t r = 0; r < n; ++r) col(r, 0) = svd.right_vectors(r, c);
        basis.push_back(std::move(col));
    }
    return basis;
}

LuDecomposition::LuDecomposition(ComplexMatrix a) : lu_(std::move(a)) {
    if (!lu_.is_square()) throw Error(ErrorCode::DimensionMismatch, "LU: matrix not square");
    const std::size_t n = lu_.rows();
    perm_.resize(n);
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});
    double min_pivot = std::numeric_limits<double>::infinity();
    double max_pivot = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(lu_(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(lu_(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        min_pivot = std::min(min_pivot, best);
        max_pivot = std::max(max_pivot, best);
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(piv, j));
            std::swap(perm_[k], perm_[piv]);
        }
        if (best == 0.0) continue;
        const cplx inv = 1.0 / lu_(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx factor = lu_(i, k) * inv;
            lu_(i, k) = factor;
            if (factor == cplx{}) continue;
            cplx* row_i = &lu_(i, 0);
            const cplx* row_k = &lu_(k, 0);
            for (std::size_t j = k + 1; j < n; ++j) row_i[j] -= factor * row_k[j];
        }
    }
    pivot_ratio_ = (n == 0 || max_pivot == 0.0) ? 0.0 : min_pivot / max_pivot;
}

std::vector<cplx> LuDecomposition::solve(std::span<const cplx> b) const {
    const std::size_t n = lu_.rows();
    if (b.size() != n) throw Error(ErrorCode::DimensionMismatch, "LU solve: rhs length");
    if (pivot_ratio_ == 0.0) throw Error(ErrorCode::InvalidArgument, "LU solve: singular matrix");
    std::vector<cplx> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
    }
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j < n; ++j) x[i] -= lu_(i, j) * x[j];
        x[i] /= lu_(i, i);
    }
    return x;
}

}  // namespace qbatt
