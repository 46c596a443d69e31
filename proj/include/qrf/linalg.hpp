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

// Dense complex linear algebra over labeled multi-qudit tensor-product spaces.
//
// Ordering convention used everywhere: the first label of a layout (or of an
// operator support) is the most significant digit of a basis index, so
// |a b c> on (A,B,C) has index (a * d_B + b) * d_C + c.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qrf/group.hpp"

namespace qrf {

constexpr size_t kDefaultDimensionCap = size_t{1} << 14;
constexpr double kUnitaryTolerance = 1e-10;
constexpr double kStateTolerance = 1e-10;
constexpr double kPsdTolerance = 1e-9;
constexpr double kSchmidtTolerance = 1e-9;

/// Largest total Hilbert-space dimension any dense operation will build.
/// QRF_DIM_CAP in the environment overrides the default of 2^14.
inline size_t dimension_cap() {
    if (const char *env = std::getenv("QRF_DIM_CAP")) {
        char *end = nullptr;
        unsigned long long value = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && value > 0) {
            return static_cast<size_t>(value);
        }
    }
    return kDefaultDimensionCap;
}

inline void check_dimension(size_t dim) {
    if (dim > dimension_cap()) {
        throw std::invalid_argument(
            "dimension " + std::to_string(dim) + " exceeds the dense dimension cap " + std::to_string(dimension_cap()));
    }
}

inline double frobenius_distance(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("frobenius_distance: shape mismatch");
    }
    return (a - b).norm();
}

inline bool is_unitary(const ComplexMatrix &m, double tol = kUnitaryTolerance) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        return false;
    }
    return (m.adjoint() * m - ComplexMatrix::Identity(m.rows(), m.cols())).norm() <= tol;
}

/// A square matrix known to satisfy U^dagger U = 1.
class Unitary {
   public:
    explicit Unitary(ComplexMatrix m, double tol = kUnitaryTolerance) : m_(std::move(m)) {
        if (m_.rows() != m_.cols()) {
            throw std::invalid_argument("unitary must be square");
        }
        if (!is_unitary(m_, tol)) {
            throw std::invalid_argument("matrix is not unitary within tolerance");
        }
    }

    static Unitary identity(size_t dim) {
        return Unitary(ComplexMatrix::Identity(dim, dim));
    }

    const ComplexMatrix &matrix() const {
        return m_;
    }
    size_t dim() const {
        return static_cast<size_t>(m_.rows());
    }
    Unitary adjoint() const {
        return Unitary(m_.adjoint());
    }
    Unitary operator*(const Unitary &other) const {
        return Unitary(m_ * other.m_);
    }

   private:
    ComplexMatrix m_;
};

class PureState {
   public:
    explicit PureState(ComplexVector amplitudes) : v_(std::move(amplitudes)) {
        if (v_.size() == 0 || std::abs(v_.norm() - 1) > kStateTolerance) {
            throw std::invalid_argument("pure state must be normalized");
        }
    }

    const ComplexVector &amplitudes() const {
        return v_;
    }
    size_t dim() const {
        return static_cast<size_t>(v_.size());
    }
    ComplexMatrix projector() const {
        return v_ * v_.adjoint();
    }

   private:
    ComplexVector v_;
};

/// Hermitian, trace one, eigenvalues above -1e-9.
class DensityMatrix {
   public:
    explicit DensityMatrix(ComplexMatrix rho) : rho_(std::move(rho)) {
        if (rho_.rows() != rho_.cols() || rho_.rows() == 0) {
            throw std::invalid_argument("density matrix must be square");
        }
        double scale = std::max(1.0, rho_.norm());
        if ((rho_ - rho_.adjoint()).norm() > kStateTolerance * scale) {
            throw std::invalid_argument("density matrix must be Hermitian");
        }
        if (std::abs(rho_.trace() - Complex(1)) > kStateTolerance) {
            throw std::invalid_argument("density matrix must have unit trace");
        }
        // Symmetrize so downstream eigen-solvers see an exactly Hermitian input.
        rho_ = (rho_ + rho_.adjoint()).eval() * 0.5;
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho_, Eigen::EigenvaluesOnly);
        if (solver.eigenvalues().minCoeff() < -kPsdTolerance) {
            throw std::invalid_argument("density matrix has a negative eigenvalue");
        }
    }

    static DensityMatrix from(const PureState &psi) {
        return DensityMatrix(psi.projector());
    }

    const ComplexMatrix &matrix() const {
        return rho_;
    }
    size_t dim() const {
        return static_cast<size_t>(rho_.rows());
    }
    double purity() const {
        return (rho_ * rho_).trace().real();
    }

   private:
    ComplexMatrix rho_;
};

/// Ordered, uniquely labeled subsystems with their local dimensions.
class SystemLayout {
   public:
    SystemLayout(std::vector<std::string> labels, std::vector<size_t> dims)
        : labels_(std::move(labels)), dims_(std::move(dims)) {
        if (labels_.empty()) {
            throw std::invalid_argument("layout needs at least one subsystem");
        }
        if (labels_.size() != dims_.size()) {
            throw std::invalid_argument("layout labels and dims differ in length");
        }
        std::set<std::string> seen;
        for (const auto &label : labels_) {
            if (label.empty() || !seen.insert(label).second) {
                throw std::invalid_argument("layout labels must be unique and nonempty: '" + label + "'");
            }
        }
        strides_.assign(dims_.size(), 1);
        total_ = 1;
        for (size_t k = dims_.size(); k-- > 0;) {
            if (dims_[k] == 0) {
                throw std::invalid_argument("local dimensions must be positive");
            }
            strides_[k] = total_;
            total_ *= dims_[k];
            check_dimension(total_);
        }
    }

    /// All subsystems share one local dimension.
    static SystemLayout uniform(std::vector<std::string> labels, size_t local_dim) {
        std::vector<size_t> dims(labels.size(), local_dim);
        return SystemLayout(std::move(labels), std::move(dims));
    }

    const std::vector<std::string> &labels() const {
        return labels_;
    }
    const std::vector<size_t> &dims() const {
        return dims_;
    }
    size_t size() const {
        return labels_.size();
    }
    size_t total_dim() const {
        return total_;
    }
    size_t stride(size_t site) const {
        return strides_[site];
    }

    bool contains(const std::string &label) const {
        return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
    }

    size_t site(const std::string &label) const {
        auto it = std::find(labels_.begin(), labels_.end(), label);
        if (it == labels_.end()) {
            throw std::invalid_argument("unknown subsystem label '" + label + "'");
        }
        return static_cast<size_t>(it - labels_.begin());
    }

    std::vector<size_t> sites(const std::vector<std::string> &labels) const {
        std::vector<size_t> result;
        std::set<std::string> seen;
        for (const auto &label : labels) {
            if (!seen.insert(label).second) {
                throw std::invalid_argument("duplicate label '" + label + "' in support");
            }
            result.push_back(site(label));
        }
        return result;
    }

    size_t dim_of(const std::vector<std::string> &labels) const {
        size_t d = 1;
        for (size_t s : sites(labels)) {
            d *= dims_[s];
        }
        return d;
    }

    size_t digit(size_t index, size_t site) const {
        return (index / strides_[site]) % dims_[site];
    }

    /// Labels not in `exclude`, in layout order.
    std::vector<std::string> complement(const std::vector<std::string> &exclude) const {
        std::vector<std::string> result;
        for (const auto &label : labels_) {
            if (std::find(exclude.begin(), exclude.end(), label) == exclude.end()) {
                result.push_back(label);
            }
        }
        return result;
    }

    /// `labels` sorted into layout order.
    std::vector<std::string> ordered(const std::vector<std::string> &labels) const {
        std::vector<size_t> s = sites(labels);
        std::sort(s.begin(), s.end());
        std::vector<std::string> result;
        for (size_t k : s) {
            result.push_back(labels_[k]);
        }
        return result;
    }

    SystemLayout restricted(const std::vector<std::string> &labels) const {
        std::vector<size_t> dims;
        for (size_t s : sites(labels)) {
            dims.push_back(dims_[s]);
        }
        return SystemLayout(labels, dims);
    }

    bool operator==(const SystemLayout &other) const {
        return labels_ == other.labels_ && dims_ == other.dims_;
    }

   private:
    std::vector<std::string> labels_;
    std::vector<size_t> dims_;
    std::vector<size_t> strides_;
    size_t total_ = 1;
};

namespace detail {

/// Global-index offsets of every joint basis state of `sites`, enumerated
/// mixed-radix in the given site order.
inline std::vector<size_t> offsets(const SystemLayout &layout, const std::vector<size_t> &sites) {
    std::vector<size_t> result{0};
    for (size_t s : sites) {
        std::vector<size_t> next;
        next.reserve(result.size() * layout.dims()[s]);
        for (size_t base : result) {
            for (size_t d = 0; d < layout.dims()[s]; d++) {
                next.push_back(base + d * layout.stride(s));
            }
        }
        result = std::move(next);
    }
    return result;
}

inline std::vector<size_t> complement_sites(const SystemLayout &layout, const std::vector<size_t> &sites) {
    std::vector<size_t> result;
    for (size_t k = 0; k < layout.size(); k++) {
        if (std::find(sites.begin(), sites.end(), k) == sites.end()) {
            result.push_back(k);
        }
    }
    return result;
}

}  // namespace detail

inline ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    check_dimension(static_cast<size_t>(a.rows() * b.rows()));
    check_dimension(static_cast<size_t>(a.cols() * b.cols()));
    ComplexMatrix result(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); i++) {
        for (Eigen::Index j = 0; j < a.cols(); j++) {
            result.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return result;
}

inline ComplexVector kron(const ComplexVector &a, const ComplexVector &b) {
    check_dimension(static_cast<size_t>(a.size() * b.size()));
    ComplexVector result(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); i++) {
        result.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return result;
}

/// Places `op` (acting on `support`, in support order) into the full layout,
/// with identity on every other subsystem.
inline ComplexMatrix embed(const SystemLayout &layout, const ComplexMatrix &op, const std::vector<std::string> &support) {
    std::vector<size_t> sites = layout.sites(support);
    size_t d_support = layout.dim_of(support);
    if (static_cast<size_t>(op.rows()) != d_support || static_cast<size_t>(op.cols()) != d_support) {
        throw std::invalid_argument(
            "operator of dimension " + std::to_string(op.rows()) + " does not match support dimension " +
            std::to_string(d_support));
    }
    std::vector<size_t> in = detail::offsets(layout, sites);
    std::vector<size_t> out = detail::offsets(layout, detail::complement_sites(layout, sites));
    size_t total = layout.total_dim();
    ComplexMatrix result = ComplexMatrix::Zero(total, total);
    for (size_t base : out) {
        for (size_t c = 0; c < d_support; c++) {
            for (size_t r = 0; r < d_support; r++) {
                Complex v = op(r, c);
                if (v != Complex(0)) {
                    result(base + in[r], base + in[c]) = v;
                }
            }
        }
    }
    return result;
}

/// Reduced operator on `keep` (emitted in layout order): sums the diagonal of
/// the traced-out subsystems. No normalization is applied.
inline ComplexMatrix trace_out(const SystemLayout &layout, const ComplexMatrix &m, const std::vector<std::string> &keep) {
    if (keep.empty()) {
        throw std::invalid_argument("partial trace needs a nonempty keep set");
    }
    if (static_cast<size_t>(m.rows()) != layout.total_dim() || m.rows() != m.cols()) {
        throw std::invalid_argument("operator does not match layout dimension");
    }
    std::vector<size_t> kept = layout.sites(layout.ordered(keep));
    std::vector<size_t> in = detail::offsets(layout, kept);
    std::vector<size_t> out = detail::offsets(layout, detail::complement_sites(layout, kept));
    ComplexMatrix result = ComplexMatrix::Zero(in.size(), in.size());
    for (size_t i = 0; i < in.size(); i++) {
        for (size_t j = 0; j < in.size(); j++) {
            Complex acc = 0;
            for (size_t base : out) {
                acc += m(base + in[i], base + in[j]);
            }
            result(i, j) = acc;
        }
    }
    return result;
}

inline DensityMatrix partial_trace(const SystemLayout &layout, const DensityMatrix &rho, const std::vector<std::string> &keep) {
    return DensityMatrix(trace_out(layout, rho.matrix(), keep));
}

/// Reorders the tensor factors of a state vector into the order of `new_order`.
inline ComplexVector permute_state(const SystemLayout &layout, const ComplexVector &psi, const std::vector<std::string> &new_order) {
    if (new_order.size() != layout.size()) {
        throw std::invalid_argument("permutation must list every subsystem");
    }
    std::vector<size_t> in = detail::offsets(layout, layout.sites(new_order));
    ComplexVector result(psi.size());
    for (size_t k = 0; k < in.size(); k++) {
        result(static_cast<Eigen::Index>(k)) = psi(static_cast<Eigen::Index>(in[k]));
    }
    return result;
}

/// Unitary exchanging two equal-dimension subsystems.
inline ComplexMatrix swap_operator(const SystemLayout &layout, const std::string &a, const std::string &b) {
    size_t sa = layout.site(a);
    size_t sb = layout.site(b);
    if (layout.dims()[sa] != layout.dims()[sb]) {
        throw std::invalid_argument("cannot swap subsystems of different dimension");
    }
    size_t total = layout.total_dim();
    ComplexMatrix result = ComplexMatrix::Zero(total, total);
    for (size_t c = 0; c < total; c++) {
        size_t da = layout.digit(c, sa);
        size_t db = layout.digit(c, sb);
        size_t r = c - da * layout.stride(sa) - db * layout.stride(sb) + db * layout.stride(sa) + da * layout.stride(sb);
        result(r, c) = 1;
    }
    return result;
}

/// True iff a = c * b for some |c| = 1, up to relative Frobenius tolerance.
/// The phase is read off the largest-modulus entry of b.
inline bool proportional_up_to_phase(const ComplexMatrix &a, const ComplexMatrix &b, double tol = kUnitaryTolerance) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("proportional_up_to_phase: shape mismatch");
    }
    double nb = b.norm();
    if (nb == 0) {
        return a.norm() == 0;
    }
    Eigen::Index r = 0;
    Eigen::Index c = 0;
    b.cwiseAbs().maxCoeff(&r, &c);
    Complex ratio = a(r, c) / b(r, c);
    if (std::abs(ratio) == 0) {
        return false;
    }
    Complex phase = ratio / std::abs(ratio);
    return (a - phase * b).norm() <= tol * nb;
}

/// Splits `op` (on the whole layout) across the cut `side` | rest and returns
/// the number of operator-Schmidt coefficients above `tol`.
inline size_t operator_schmidt_rank(
    const SystemLayout &layout, const ComplexMatrix &op, const std::vector<std::string> &side, double tol = kSchmidtTolerance) {
    if (static_cast<size_t>(op.rows()) != layout.total_dim() || op.rows() != op.cols()) {
        throw std::invalid_argument("operator does not match layout dimension");
    }
    if (side.empty() || side.size() >= layout.size()) {
        throw std::invalid_argument("bipartition needs two nonempty sides");
    }
    std::vector<size_t> a_sites = layout.sites(layout.ordered(side));
    std::vector<size_t> b_sites = detail::complement_sites(layout, a_sites);
    std::vector<size_t> a = detail::offsets(layout, a_sites);
    std::vector<size_t> b = detail::offsets(layout, b_sites);
    size_t da = a.size();
    size_t db = b.size();
    ComplexMatrix reshuffled(da * da, db * db);
    for (size_t ia = 0; ia < da; ia++) {
        for (size_t ja = 0; ja < da; ja++) {
            for (size_t ib = 0; ib < db; ib++) {
                for (size_t jb = 0; jb < db; jb++) {
                    reshuffled(ia * da + ja, ib * db + jb) = op(a[ia] + b[ib], a[ja] + b[jb]);
                }
            }
        }
    }
    Eigen::BDCSVD<ComplexMatrix> svd(reshuffled);
    const auto &sv = svd.singularValues();
    return static_cast<size_t>((sv.array() > tol).count());
}

/// True iff the operator factors as a tensor product of single-subsystem
/// operators, i.e. every bipartition has operator-Schmidt rank one.
inline bool is_product_operator(const SystemLayout &layout, const ComplexMatrix &op, double tol = kSchmidtTolerance) {
    size_t n = layout.size();
    if (n < 2) {
        return true;
    }
    // Masks with the top bit cleared enumerate each bipartition exactly once.
    for (size_t mask = 1; mask < (size_t{1} << (n - 1)); mask++) {
        std::vector<std::string> side;
        for (size_t k = 0; k < n; k++) {
            if (mask & (size_t{1} << k)) {
                side.push_back(layout.labels()[k]);
            }
        }
        if (operator_schmidt_rank(layout, op, side, tol) > 1) {
            return false;
        }
    }
    return true;
}

/// Haar-distributed unitary via QR of a complex Ginibre matrix with the
/// diagonal phases of R divided out.
template <typename Rng>
ComplexMatrix haar_unitary(size_t dim, Rng &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix z(dim, dim);
    for (size_t i = 0; i < dim; i++) {
        for (size_t j = 0; j < dim; j++) {
            z(i, j) = Complex(normal(rng), normal(rng));
        }
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
    ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (size_t j = 0; j < dim; j++) {
        Complex d = r(j, j);
        q.col(j) *= d / std::abs(d);
    }
    return q;
}

template <typename Rng>
ComplexVector haar_state(size_t dim, Rng &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexVector v(dim);
    for (size_t i = 0; i < dim; i++) {
        v(i) = Complex(normal(rng), normal(rng));
    }
    return v / v.norm();
}

}  // namespace qrf
