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

#include <cmath>
#include <random>

#include "doctest.h"
#include "qbatt/linalg.hpp"

using namespace qbatt;

namespace {

ComplexMatrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    ComplexMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = cplx(n(rng), n(rng));
    return m;
}

ComplexMatrix random_hermitian(std::size_t d, std::mt19937_64& rng) {
    const ComplexMatrix a = random_matrix(d, d, rng);
    return 0.5 * (a + a.adjoint());
}

}  // namespace

TEST_CASE("kron follows the block layout") {
    const ComplexMatrix a{{1.0, 2.0}, {3.0, 4.0}};
    const ComplexMatrix b{{0.0, 1.0}, {1.0, 0.0}};
    const ComplexMatrix k = kron(a, b);
    REQUIRE(k.rows() == 4);
    CHECK(k(0, 1) == cplx(1.0));
    CHECK(k(1, 2) == cplx(2.0));
    CHECK(k(2, 1) == cplx(3.0));
    CHECK(k(3, 2) == cplx(4.0));
    CHECK(k(0, 0) == cplx(0.0));
}

TEST_CASE("column-stacking identity vec(AXB) = (B^T kron A) vec(X)") {
    std::mt19937_64 rng(7);
    const ComplexMatrix a = random_matrix(3, 3, rng);
    const ComplexMatrix x = random_matrix(3, 3, rng);
    const ComplexMatrix b = random_matrix(3, 3, rng);
    const std::vector<cplx> lhs = vec(a * x * b);
    const ComplexMatrix sup = kron(b.transpose(), a);
    std::vector<cplx> rhs(9);
    multiply(sup, vec(x), rhs);
    for (std::size_t i = 0; i < 9; ++i) CHECK(std::abs(lhs[i] - rhs[i]) < 1e-12);
    CHECK(max_abs_diff(unvec(vec(x), 3), x) == 0.0);
    // Column-major: the second entry is x(1, 0).
    CHECK(vec(x)[1] == x(1, 0));
}

TEST_CASE("Jacobi eigensolver reconstructs Hermitian matrices") {
    std::mt19937_64 rng(11);
    for (std::size_t d : {1u, 2u, 5u, 8u}) {
        const ComplexMatrix m = random_hermitian(d, rng);
        const EigenResult e = hermitian_eigen(m);
        ComplexMatrix diag(d, d);
        for (std::size_t i = 0; i < d; ++i) diag(i, i) = e.values[i];
        CHECK(max_abs_diff(e.vectors * diag * e.vectors.adjoint(), m) < 1e-12);
        CHECK(max_abs_diff(e.vectors.adjoint() * e.vectors, ComplexMatrix::identity(d)) < 1e-12);
        for (std::size_t i = 1; i < d; ++i) CHECK(e.values[i - 1] <= e.values[i]);
    }
}

TEST_CASE("Pauli y has eigenvalues -1 and +1") {
    const ComplexMatrix sy{{0.0, cplx(0, -1)}, {cplx(0, 1), 0.0}};
    const std::vector<double> ev = hermitian_eigenvalues(sy);
    CHECK(ev[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(ev[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("non-Hermitian input is rejected") {
    const ComplexMatrix m{{0.0, 1.0}, {0.0, 0.0}};
    try {
        hermitian_eigen(m);
        FAIL("expected NotHermitian");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotHermitian);
    }
}

TEST_CASE("kernel finds the null vector of a rank-one matrix") {
    const ComplexMatrix m{{1.0, 1.0}, {1.0, 1.0}};
    const auto ker = kernel(m);
    REQUIRE(ker.size() == 1);
    const ComplexMatrix& v = ker[0];
    CHECK(std::abs(v(0, 0) + v(1, 0)) < 1e-12);
    CHECK(std::abs(std::abs(v(0, 0)) - 1.0 / std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("SVD singular values of a diagonal matrix") {
    const ComplexMatrix m{{0.0, 3.0, 0.0}, {1.0, 0.0, 0.0}, {0.0, 0.0, cplx(0, -2)}};
    const SvdResult s = jacobi_svd(m);
    CHECK(s.singular_values[0] == doctest::Approx(3.0));
    CHECK(s.singular_values[1] == doctest::Approx(2.0));
    CHECK(s.singular_values[2] == doctest::Approx(1.0));
}

TEST_CASE("LU solve and pivot ratio") {
    std::mt19937_64 rng(3);
    const ComplexMatrix a = random_matrix(6, 6, rng);
    const ComplexMatrix b = random_matrix(6, 1, rng);
    const LuDecomposition lu(a);
    const std::vector<cplx> x = lu.solve(b.data());
    std::vector<cplx> ax(6);
    multiply(a, x, ax);
    for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(ax[i] - b(i, 0)) < 1e-12);
    CHECK(lu.pivot_ratio() > 1e-6);

    const ComplexMatrix singular{{1.0, 2.0}, {2.0, 4.0}};
    CHECK(LuDecomposition(singular).pivot_ratio() < 1e-15);
}

TEST_CASE("shape mismatches throw DimensionMismatch") {
    const ComplexMatrix a(2, 3);
    const ComplexMatrix b(2, 2);
    try {
        (void)(a * a);
        FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DimensionMismatch);
    }
    CHECK_THROWS_AS((void)(a + b), Error);
}
