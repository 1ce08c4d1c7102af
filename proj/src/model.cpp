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

#include "qbatt/model.hpp"

#include <cmath>
#include <string>

namespace qbatt {

std::string_view to_string(ReservoirKind kind) noexcept {
    return kind == ReservoirKind::Bosonic ? "bosonic" : "fermionic";
}

double occupation(ReservoirKind kind, double T) {
    if (!(T >= 0.0)) throw Error(ErrorCode::DomainError, "occupation: T must be >= 0");
    if (T == 0.0) return 0.0;
    const double x = 1.0 / T;
    if (kind == ReservoirKind::Bosonic) return 1.0 / std::expm1(x);
    return 1.0 / (std::exp(x) + 1.0);
}

double SystemParams::occupation() const {
    return n ? *n : qbatt::occupation(reservoir, T);
}

double SystemParams::gamma_down() const {
    const double occ = occupation();
    return reservoir == ReservoirKind::Bosonic ? gammaB * (1.0 + occ) : gammaB * (1.0 - occ);
}

double SystemParams::gamma_up() const { return gammaB * occupation(); }

void SystemParams::validate() const {
    auto require = [](bool ok, ErrorCode code, const char* msg) {
        if (!ok) throw Error(code, msg);
    };
    require(omega0 > 0.0, ErrorCode::DomainError, "omega0 must be > 0");
    require(g >= 0.0 && J >= 0.0 && gammaC >= 0.0 && gammaB >= 0.0, ErrorCode::DomainError,
            "rates and couplings must be >= 0");
    require(delta >= 0.0, ErrorCode::DomainError, "delta must be >= 0");
    require(eta > 0.0 && eta <= 1.0, ErrorCode::DomainError, "eta must lie in (0, 1]");
    require(T >= 0.0, ErrorCode::DomainError, "T must be >= 0");
    require(N >= 1, ErrorCode::DomainError, "N must be >= 1");
    if (n) {
        require(*n >= 0.0, ErrorCode::DomainError, "occupation n must be >= 0");
        if (reservoir == ReservoirKind::Fermionic) {
            require(*n <= 0.5, ErrorCode::DomainError,
                    "fermionic occupation must lie in [0, 1/2] (positive temperature)");
        }
    }
    require(site_g.empty() || site_g.size() == static_cast<std::size_t>(N),
            ErrorCode::InvalidArgument, "site_g must have N entries");
    require(site_J.empty() || site_J.size() == static_cast<std::size_t>(N),
            ErrorCode::InvalidArgument, "site_J must have N entries");
}

BasisSpec default_basis(const SystemParams& params) {
    return params.N == 1 ? BasisSpec::two_qubit() : BasisSpec::dicke(params.N);
}

namespace {

void check_basis(const SystemParams& params, const BasisSpec& basis) {
    if (basis.n != params.N) {
        throw Error(ErrorCode::DimensionMismatch, "basis particle count " +
                                                      std::to_string(basis.n) + " != params.N " +
                                                      std::to_string(params.N));
    }
    if (basis.kind == BasisKind::FullProduct && params.N > kMaxFullProductN) {
        throw Error(ErrorCode::DimensionGuard,
                    "FullProduct basis limited to N <= " + std::to_string(kMaxFullProductN));
    }
    if (basis.kind == BasisKind::DickeReduced && (!params.site_g.empty() || !params.site_J.empty())) {
        throw Error(ErrorCode::InvalidArgument,
                    "per-site couplings break permutation symmetry; use the FullProduct basis");
    }
}

ComplexMatrix dissipator(const ComplexMatrix& l, const ComplexMatrix& rho) {
    const ComplexMatrix ld = l.adjoint();
    const ComplexMatrix ldl = ld * l;
    return l * rho * ld - 0.5 * (ldl * rho + rho * ldl);
}

struct Entry {
    std::size_t row;
    std::size_t col;
    cplx value;
};

std::vector<Entry> nonzeros(const ComplexMatrix& m) {
    std::vector<Entry> out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (m(i, j) != cplx{}) out.push_back({i, j, m(i, j)});
        }
    }
    return out;
}

// Accumulates terms of the form A rho B into a column-stacking superoperator:
// vec(A X B) = (B^T (x) A) vec(X), so entry [(j d + i), (l d + k)] = B(l, j) A(i, k).
class SuperopBuilder {
public:
    explicit SuperopBuilder(std::size_t d) : d_(d), m_(d * d, d * d) {}

    void sandwich(cplx coeff, const ComplexMatrix& a, const ComplexMatrix& b) {
        const auto an = nonzeros(a);
        const auto bn = nonzeros(b);
        for (const auto& be : bn) {
            for (const auto& ae : an) {
                m_(be.col * d_ + ae.row, be.row * d_ + ae.col) += coeff * be.value * ae.value;
            }
        }
    }

    void left(cplx coeff, const ComplexMatrix& a) {
        for (const auto& ae : nonzeros(a)) {
            for (std::size_t j = 0; j < d_; ++j) m_(j * d_ + ae.row, j * d_ + ae.col) += coeff * ae.value;
        }
    }

    void right(cplx coeff, const ComplexMatrix& b) {
        for (const auto& be : nonzeros(b)) {
            for (std::size_t i = 0; i < d_; ++i) m_(be.col * d_ + i, be.row * d_ + i) += coeff * be.value;
        }
    }

    void dissipator(double rate, const ComplexMatrix& l) {
        if (rate == 0.0) return;
        const ComplexMatrix ld = l.adjoint();
        const ComplexMatrix ldl = ld * l;
        sandwich(rate, l, ld);
        left(-0.5 * rate, ldl);
        right(-0.5 * rate, ldl);
    }

    ComplexMatrix take() && { return std::move(m_); }

private:
    std::size_t d_;
    ComplexMatrix m_;
};

double charger_coupling(const SystemParams& p, int site) {
    return p.site_g.empty() ? p.g : p.site_g[static_cast<std::size_t>(site)];
}

double pair_coupling(const SystemParams& p, int site) {
    return p.site_J.empty() ? p.J : p.site_J[static_cast<std::size_t>(site)];
}

}  // namespace

ModelOperators build_operators(const SystemParams& params, const BasisSpec& basis) {
    params.validate();
    check_basis(params, basis);
    const ComplexMatrix sp = qubit_op(QubitOp::Sp);
    const ComplexMatrix sm = qubit_op(QubitOp::Sm);
    const ComplexMatrix sy = qubit_op(QubitOp::Sy);
    const ComplexMatrix sx = qubit_op(QubitOp::Sx);
    const std::size_t db = basis.battery_dimension();
    const ComplexMatrix ib = ComplexMatrix::identity(db);
    const ComplexMatrix ic = ComplexMatrix::identity(2);

    ModelOperators ops;
    ops.basis = basis;
    ops.charger_lower = kron(sm, ib);
    ops.charger_y = kron(sy, ib);
    ops.charger_x = kron(sx, ib);
    const ComplexMatrix charger_raise = kron(sp, ib);

    switch (basis.kind) {
        case BasisKind::TwoQubitGlobal: {
            ops.battery_lower = kron(ic, sm);
            const ComplexMatrix battery_raise = ops.battery_lower.adjoint();
            ops.hamiltonian = params.g * (charger_raise * ops.battery_lower +
                                          ops.charger_lower * battery_raise);
            ops.battery_energy = params.omega0 * (battery_raise * ops.battery_lower);
            break;
        }
        case BasisKind::DickeReduced: {
            const CollectiveOps coll = collective_ops(params.N);
            ops.battery_lower = kron(ic, coll.sm);
            const ComplexMatrix battery_raise = kron(ic, coll.sp);
            ops.hamiltonian = params.g * (charger_raise * ops.battery_lower +
                                          ops.charger_lower * battery_raise);
            if (params.J != 0.0) {
                ops.hamiltonian += params.J * kron(ic, pairwise_exchange(params.N, BasisKind::DickeReduced));
            }
            ComplexMatrix energy = coll.sz;
            for (std::size_t k = 0; k < energy.rows(); ++k) energy(k, k) += 0.5 * params.N;
            ops.battery_energy = params.omega0 * kron(ic, energy);
            break;
        }
        case BasisKind::FullProduct: {
            const std::size_t d = basis.dimension();
            ops.battery_lower = ComplexMatrix(d, d);
            ops.hamiltonian = ComplexMatrix(d, d);
            ops.battery_energy = ComplexMatrix(d, d);
            std::vector<ComplexMatrix> lower(static_cast<std::size_t>(params.N));
            for (int i = 0; i < params.N; ++i) {
                lower[static_cast<std::size_t>(i)] = embed(sm, i + 1, params.N);
                ops.battery_lower += lower[static_cast<std::size_t>(i)];
            }
            for (int i = 0; i < params.N; ++i) {
                const ComplexMatrix& li = lower[static_cast<std::size_t>(i)];
                const ComplexMatrix ri = li.adjoint();
                ops.hamiltonian += charger_coupling(params, i) *
                                   (charger_raise * li + ops.charger_lower * ri);
                ops.battery_energy += params.omega0 * (ri * li);
                for (int j = i + 1; j < params.N; ++j) {
                    const ComplexMatrix& lj = lower[static_cast<std::size_t>(j)];
                    const double jc = pair_coupling(params, i);
                    if (jc != 0.0) ops.hamiltonian += jc * (ri * lj + li * lj.adjoint());
                }
            }
            break;
        }
    }
    return ops;
}

ComplexMatrix lindblad_rhs(const SystemParams& params, const BasisSpec& basis,
                           const ComplexMatrix& rho, const ModelConvention& conv) {
    const ModelOperators ops = build_operators(params, basis);
    const std::size_t d = basis.dimension();
    if (rho.rows() != d || rho.cols() != d) {
        throw Error(ErrorCode::DimensionMismatch,
                    "lindblad_rhs: rho is " + std::to_string(rho.rows()) + "x" +
                        std::to_string(rho.cols()) + ", basis needs " + std::to_string(d));
    }
    using namespace std::complex_literals;
    const double f = params.feedback();
    const ComplexMatrix& sm = ops.charger_lower;
    const ComplexMatrix sp = sm.adjoint();

    ComplexMatrix out = -1i * commutator(ops.hamiltonian, rho);
    out += (1i * f * static_cast<double>(conv.feedback_sign)) *
           commutator(ops.charger_y, sm * rho + rho * sp);
    // f^2 / (eta gammaC) written as delta^2 gammaC / eta so gammaC = 0 is finite.
    const double noise_rate = params.delta * params.delta * params.gammaC / params.eta;
    if (noise_rate != 0.0) out += noise_rate * dissipator(ops.charger_y, rho);
    if (params.gammaC != 0.0) out += params.gammaC * dissipator(sm, rho);
    const double down = params.gamma_down();
    const double up = params.gamma_up();
    if (down != 0.0) out += down * dissipator(ops.battery_lower, rho);
    if (up != 0.0) out += up * dissipator(ops.battery_lower.adjoint(), rho);
    return out;
}

ComplexMatrix lindblad_rhs(const SystemParams& params, const ComplexMatrix& rho) {
    if (params.N == 1) return lindblad_rhs(params, BasisSpec::two_qubit(), rho);
    const BasisSpec dicke = BasisSpec::dicke(params.N);
    if (rho.rows() == dicke.dimension()) return lindblad_rhs(params, dicke, rho);
    if (params.N <= kMaxFullProductN) {
        const BasisSpec full = BasisSpec::full(params.N);
        if (rho.rows() == full.dimension()) return lindblad_rhs(params, full, rho);
    }
    throw Error(ErrorCode::DimensionMismatch, "lindblad_rhs: rho dimension matches no basis");
}

Liouvillian build_liouvillian(const SystemParams& params, const BasisSpec& basis,
                              const ModelConvention& conv) {
    const ModelOperators ops = build_operators(params, basis);
    using namespace std::complex_literals;
    const std::size_t d = basis.dimension();
    const double f = params.feedback();
    const ComplexMatrix& sm = ops.charger_lower;
    const ComplexMatrix sp = sm.adjoint();
    const ComplexMatrix& sy = ops.charger_y;

    SuperopBuilder b(d);
    b.left(-1i, ops.hamiltonian);
    b.right(1i, ops.hamiltonian);
    // i f [sy, sm rho + rho sp] = i f (sy sm rho + sy rho sp - sm rho sy - rho sp sy)
    const cplx fb = 1i * f * static_cast<double>(conv.feedback_sign);
    if (f != 0.0) {
        b.left(fb, sy * sm);
        b.sandwich(fb, sy, sp);
        b.sandwich(-fb, sm, sy);
        b.right(-fb, sp * sy);
    }
    b.dissipator(params.delta * params.delta * params.gammaC / params.eta, sy);
    b.dissipator(params.gammaC, sm);
    b.dissipator(params.gamma_down(), ops.battery_lower);
    b.dissipator(params.gamma_up(), ops.battery_lower.adjoint());
    return {std::move(b).take(), basis};
}

ComplexMatrix ground_state(const BasisSpec& basis) {
    const std::size_t d = basis.dimension();
    const std::size_t db = basis.battery_dimension();
    // Charger |g> is index 1. Battery ground is the last product index for
    // qubit bases and index 0 (m = -N/2) for the Dicke basis.
    const std::size_t battery_ground = basis.kind == BasisKind::DickeReduced ? 0 : db - 1;
    ComplexMatrix rho(d, d);
    rho(db + battery_ground, db + battery_ground) = 1.0;
    return rho;
}

}  // namespace qbatt
