// Copyright 2026 The qrf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Single-qubit coherence and predictability, two-qubit concurrence, and
// Schmidt decompositions.
//
// Two coherence measures live side by side:
//   d2_coherence         r_x^2 + r_y^2        (off-diagonal weight)
//   d2_purity_coherence  2 Tr rho^2 - 1 = |r|^2
// They agree whenever the predictability r_z^2 vanishes.

#pragma once

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qrf/gates.hpp"
#include "qrf/linalg.hpp"

namespace qrf {

struct BlochVector {
    double r_x = 0;
    double r_y = 0;
    double r_z = 0;

    double norm() const {
        return std::sqrt(r_x * r_x + r_y * r_y + r_z * r_z);
    }
};

namespace detail {

inline void require_qubit(const DensityMatrix &rho) {
    if (rho.dim() != 2) {
        throw std::invalid_argument("expected a single-qubit density matrix, got dimension " + std::to_string(rho.dim()));
    }
}

inline void require_two_qubits(size_t dim) {
    if (dim != 4) {
        throw std::invalid_argument("expected a two-qubit state, got dimension " + std::to_string(dim));
    }
}

/// Hermitian square root with eigenvalues below zero clipped.
inline ComplexMatrix psd_sqrt(const ComplexMatrix &m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
    Eigen::VectorXd values = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return solver.eigenvectors() * values.asDiagonal() * solver.eigenvectors().adjoint();
}

inline double clamp_unit(double v) {
    return std::clamp(v, 0.0, 1.0);
}

}  // namespace detail

inline BlochVector bloch(const DensityMatrix &rho) {
    detail::require_qubit(rho);
    const auto &m = rho.matrix();
    return {
        (gates::X() * m).trace().real(),
        (gates::Y() * m).trace().real(),
        (gates::Z() * m).trace().real(),
    };
}

inline double d2_coherence(const DensityMatrix &rho) {
    detail::require_qubit(rho);
    return 4 * std::norm(rho.matrix()(0, 1));
}

inline double p2_predictability(const DensityMatrix &rho) {
    detail::require_qubit(rho);
    double diff = (rho.matrix()(0, 0) - rho.matrix()(1, 1)).real();
    return diff * diff;
}

inline double d2_purity_coherence(const DensityMatrix &rho) {
    detail::require_qubit(rho);
    return 2 * rho.purity() - 1;
}

/// C^2 = 4 det(rho_X) with rho_X the first-qubit marginal.
inline double concurrence2_pure(const PureState &psi) {
    detail::require_two_qubits(psi.dim());
    const auto &v = psi.amplitudes();
    // For a|00> + b|01> + c|10> + d|11>, det(rho_X) = |ad - bc|^2.
    return detail::clamp_unit(4 * std::norm(v(0) * v(3) - v(1) * v(2)));
}

/// Squared concurrence via the spin-flip construction. The lambdas are the
/// singular values of sqrt(rho) sqrt(rho~), which equal the square roots of
/// the eigenvalues of rho rho~.
inline double concurrence2_mixed(const DensityMatrix &rho) {
    detail::require_two_qubits(rho.dim());
    ComplexMatrix yy = kron(gates::Y(), gates::Y());
    ComplexMatrix root = detail::psd_sqrt(rho.matrix());
    ComplexMatrix root_flipped = yy * root.conjugate() * yy;
    Eigen::JacobiSVD<ComplexMatrix> svd(root * root_flipped);
    Eigen::VectorXd lambda = svd.singularValues();  // descending
    double c = std::max(0.0, lambda(0) - lambda(1) - lambda(2) - lambda(3));
    return detail::clamp_unit(c * c);
}

struct SchmidtDecomposition {
    std::vector<double> coefficients;  // descending, squares sum to one
    ComplexMatrix left;                // columns are |u_k>
    ComplexMatrix right;               // columns are |v_k>

    /// sum_k s_k |u_k>|v_k>, with the first side most significant.
    ComplexVector reconstruct() const {
        ComplexVector psi = ComplexVector::Zero(left.rows() * right.rows());
        for (size_t k = 0; k < coefficients.size(); k++) {
            psi += coefficients[k] * kron(ComplexVector(left.col(k)), ComplexVector(right.col(k)));
        }
        return psi;
    }
};

/// Schmidt decomposition across `first` | rest. The state is reordered so
/// that `first` (in the given order) is the left factor.
inline SchmidtDecomposition schmidt(const SystemLayout &layout, const PureState &psi, const std::vector<std::string> &first) {
    if (psi.dim() != layout.total_dim()) {
        throw std::invalid_argument("state does not match layout dimension");
    }
    if (first.empty() || first.size() >= layout.size()) {
        throw std::invalid_argument("Schmidt cut needs two nonempty sides");
    }
    std::vector<std::string> order = first;
    for (const auto &label : layout.complement(first)) {
        order.push_back(label);
    }
    ComplexVector v = permute_state(layout, psi.amplitudes(), order);
    size_t da = layout.dim_of(first);
    size_t db = layout.total_dim() / da;
    ComplexMatrix m(da, db);
    for (size_t i = 0; i < da; i++) {
        for (size_t j = 0; j < db; j++) {
            m(i, j) = v(i * db + j);
        }
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SchmidtDecomposition result;
    for (Eigen::Index k = 0; k < svd.singularValues().size(); k++) {
        result.coefficients.push_back(svd.singularValues()(k));
    }
    result.left = svd.matrixU();
    result.right = svd.matrixV().conjugate();
    return result;
}

/// Two-qubit pure state split into the first-qubit marginal measures and
/// the residuals of C^2 + D^2 + P^2 = 1 and C^2 + D^2_total = 1.
struct ComplementarityCheck {
    double c2 = 0;
    double d2 = 0;
    double p2 = 0;
    double d2_total = 0;  // mean purity coherence of both marginals
    double residual = 0;
    double residual_total = 0;
};

inline ComplementarityCheck complementarity_check(const PureState &psi) {
    detail::require_two_qubits(psi.dim());
    auto layout = SystemLayout::uniform({"X", "Y"}, 2);
    DensityMatrix rho = DensityMatrix::from(psi);
    DensityMatrix rho_x = partial_trace(layout, rho, {"X"});
    DensityMatrix rho_y = partial_trace(layout, rho, {"Y"});
    ComplementarityCheck r;
    r.c2 = concurrence2_pure(psi);
    r.d2 = d2_coherence(rho_x);
    r.p2 = p2_predictability(rho_x);
    r.d2_total = (d2_purity_coherence(rho_x) + d2_purity_coherence(rho_y)) / 2;
    r.residual = std::abs(r.c2 + r.d2 + r.p2 - 1);
    r.residual_total = std::abs(r.c2 + r.d2_total - 1);
    return r;
}

/// Resources seen from one frame: entanglement of `pair`, coherence and
/// predictability of `local`.
struct ResourceReport {
    std::string frame;
    std::pair<std::string, std::string> pair;
    std::string local;
    double c2 = 0;
    double d2 = 0;
    double p2 = 0;
    double d2_purity = 0;
    double sum_cd = 0;   // c2 + d2
    double sum_cdp = 0;  // c2 + d2 + p2

    /// C^2 + D^2 with the purity-based coherence.
    double total() const {
        return c2 + d2_purity;
    }
};

inline ResourceReport resource_report(
    const SystemLayout &layout,
    const DensityMatrix &rho,
    const std::string &frame,
    const std::pair<std::string, std::string> &pair,
    const std::string &local) {
    if (rho.dim() != layout.total_dim()) {
        throw std::invalid_argument("state does not match layout dimension");
    }
    // trace_out emits kept labels in layout order; C^2 is symmetric under the swap.
    DensityMatrix rho_pair = partial_trace(layout, rho, {pair.first, pair.second});
    DensityMatrix rho_local = partial_trace(layout, rho, {local});
    ResourceReport r;
    r.frame = frame;
    r.pair = pair;
    r.local = local;
    r.c2 = concurrence2_mixed(rho_pair);
    r.d2 = detail::clamp_unit(d2_coherence(rho_local));
    r.p2 = detail::clamp_unit(p2_predictability(rho_local));
    r.d2_purity = detail::clamp_unit(d2_purity_coherence(rho_local));
    r.sum_cd = r.c2 + r.d2;
    r.sum_cdp = r.c2 + r.d2 + r.p2;
    return r;
}

inline nlohmann::json to_json(const ResourceReport &r) {
    return {
        {"frame", r.frame},
        {"pair", {r.pair.first, r.pair.second}},
        {"local", r.local},
        {"C2", r.c2},
        {"D2", r.d2},
        {"P2", r.p2},
        {"D2_purity", r.d2_purity},
        {"sum_CD", r.sum_cd},
        {"sum_CDP", r.sum_cdp},
        {"total", r.total()},
    };
}

inline std::string csv_header() {
    return "frame,C2,D2,P2,D2_purity,sum";
}

inline std::string csv_row(const ResourceReport &r) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(6) << r.frame << ',' << r.c2 << ',' << r.d2 << ',' << r.p2 << ','
        << r.d2_purity << ',' << r.total();
    return out.str();
}

}  // namespace qrf
