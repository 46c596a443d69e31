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

// Three qubits A, B, C under a global Z2 symmetry. The physical subspace is
// the even-parity eigenspace of Z_A Z_B Z_C, spanned by |000>, |011>, |101>,
// |110> (A leftmost).
//
// Two frame-change conventions are provided:
//   frame_change_CA / frame_change_CB      SWAP_{0,i} W_i, the generic form
//   parity_preserving_frame_change         CNOT_{0->i} SWAP_{0,i} W_i
// Only the second maps the physical subspace to itself.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qrf/circuit.hpp"
#include "qrf/gates.hpp"
#include "qrf/resources.hpp"
#include "qrf/tomography.hpp"
#include "qrf/transform.hpp"

namespace qrf::z2 {

inline SystemLayout layout() {
    return SystemLayout::uniform({"A", "B", "C"}, 2);
}

inline FiniteAbelianGroup group() {
    return make_group({2});
}

/// Indices of |000>, |011>, |101>, |110> in the 8-dimensional space.
inline const std::array<size_t, 4> &physical_basis() {
    static const std::array<size_t, 4> basis{0, 3, 5, 6};
    return basis;
}

/// (1 + Z_A Z_B Z_C) / 2
inline ComplexMatrix physical_projector() {
    ComplexMatrix zzz = kron(kron(gates::Z(), gates::Z()), gates::Z());
    return (ComplexMatrix::Identity(8, 8) + zzz) / 2.0;
}

/// alpha |000> + beta |011> + gamma |101> + delta |110>
struct PhysicalState {
    Complex alpha;
    Complex beta;
    Complex gamma;
    Complex delta;

    PhysicalState(Complex alpha, Complex beta, Complex gamma, Complex delta)
        : alpha(alpha), beta(beta), gamma(gamma), delta(delta) {
        double norm2 = std::norm(alpha) + std::norm(beta) + std::norm(gamma) + std::norm(delta);
        if (std::abs(norm2 - 1) > kStateTolerance) {
            throw std::invalid_argument("physical state amplitudes must be normalized");
        }
    }

    /// Rejects vectors with weight outside the physical subspace.
    static PhysicalState from_vector(const ComplexVector &v, double tol = 1e-9) {
        if (v.size() != 8) {
            throw std::invalid_argument("expected an 8-dimensional state");
        }
        if ((physical_projector() * v - v).norm() > tol) {
            throw std::invalid_argument("state leaves the physical subspace");
        }
        const auto &b = physical_basis();
        return PhysicalState(v(b[0]), v(b[1]), v(b[2]), v(b[3]));
    }

    ComplexVector embedded() const {
        ComplexVector v = ComplexVector::Zero(8);
        const auto &b = physical_basis();
        v(b[0]) = alpha;
        v(b[1]) = beta;
        v(b[2]) = gamma;
        v(b[3]) = delta;
        return v;
    }

    PureState pure() const {
        return PureState(embedded());
    }
};

inline FrameChange frame_change_CA() {
    return FrameChange(layout(), group(), "C", "A");
}

inline FrameChange frame_change_CB() {
    return FrameChange(layout(), group(), "C", "B");
}

/// CNOT_{old->new} composed with the generic frame change; for Z2 this
/// preserves the physical subspace. For C -> A it equals
/// SWAP_{C,A} CNOT_{A->B} CNOT_{A->C}.
inline Unitary parity_preserving_frame_change(const FrameChange &fc) {
    if (!(fc.group() == group()) || !(fc.layout() == layout())) {
        throw std::invalid_argument("parity-preserving frame change is defined for the three-qubit Z2 model only");
    }
    ComplexMatrix cnot = embed(fc.layout(), gates::CNOT(), {fc.old_frame(), fc.new_frame()});
    return Unitary(cnot * fc.dense());
}

/// Unitary taking the C-frame description to `frame` (identity for C).
inline Unitary physical_frame_map(const std::string &frame) {
    if (frame == "C") {
        return Unitary::identity(8);
    }
    if (frame != "A" && frame != "B") {
        throw std::invalid_argument("unknown frame '" + frame + "'");
    }
    return parity_preserving_frame_change(FrameChange(layout(), group(), "C", frame));
}

/// <b_j| U |b_k> over the physical basis.
inline ComplexMatrix restricted_to_physical(const ComplexMatrix &u) {
    if (u.rows() != 8 || u.cols() != 8) {
        throw std::invalid_argument("expected an 8x8 operator");
    }
    const auto &b = physical_basis();
    ComplexMatrix m(4, 4);
    for (size_t j = 0; j < 4; j++) {
        for (size_t k = 0; k < 4; k++) {
            m(j, k) = u(b[j], b[k]);
        }
    }
    return m;
}

/// || P U P - U P ||_F; zero iff U maps the physical subspace into itself.
inline double subspace_invariance_residual(const ComplexMatrix &u) {
    ComplexMatrix p = physical_projector();
    return (p * u * p - u * p).norm();
}

/// Frobenius residuals of closed-form conjugation identities.
inline std::map<std::string, double> operator_identity_suite() {
    SystemLayout abc = layout();
    FrameChange to_b = frame_change_CB();
    FrameChange to_a = frame_change_CA();
    auto conj = [](const FrameChange &fc, const ComplexMatrix &op) -> ComplexMatrix {
        return fc.dense() * op * fc.dense().adjoint();
    };
    ComplexMatrix h_a = embed(abc, gates::H(), {"A"});
    ComplexMatrix cnot_ab = embed(abc, gates::CNOT(), {"A", "B"});
    std::map<std::string, double> residuals;

    ComplexMatrix xhx = gates::X() * gates::H() * gates::X();
    ComplexMatrix controlled_h = kron(gates::projector(2, 0), gates::H()) + kron(gates::projector(2, 1), xhx);
    residuals["H_A_frame_B"] = frobenius_distance(conj(to_b, h_a), embed(abc, controlled_h, {"C", "A"}));

    ComplexMatrix w_ba = embed(abc, gates::CNOT(), {"B", "A"});
    residuals["W_BA_CNOT_AB"] = frobenius_distance(w_ba * cnot_ab * w_ba.adjoint(), swap_operator(abc, "A", "B"));

    residuals["CNOT_AB_frame_B"] = frobenius_distance(conj(to_b, cnot_ab), swap_operator(abc, "A", "C"));

    ComplexMatrix h_cb = (kron(gates::Z(), gates::I2()) + kron(gates::X(), gates::X())) / std::numbers::sqrt2;
    residuals["H_A_frame_A"] = frobenius_distance(conj(to_a, h_a), embed(abc, h_cb, {"C", "B"}));

    residuals["CNOT_AB_frame_A"] = frobenius_distance(conj(to_a, cnot_ab), embed(abc, gates::CNOT(), {"C", "B"}));

    ComplexMatrix phase = std::polar(1.0, 0.7) * ComplexMatrix::Identity(8, 8);
    residuals["global_phase"] = frobenius_distance(conj(to_b, phase), phase);
    return residuals;
}

/// |0>_A |+>_B |1>_C, prepared as X_C H_B |000>.
inline PureState lab_state() {
    ComplexVector v = ComplexVector::Zero(8);
    v(1) = 1 / std::numbers::sqrt2;
    v(3) = 1 / std::numbers::sqrt2;
    return PureState(v);
}

/// H on A then CNOT_{A->B}, expressed in frame C.
inline Circuit bell_circuit() {
    Circuit c(layout(), "C");
    c.add("H", {"A"});
    c.add("CNOT", {"A", "B"});
    return c;
}

/// Gate sequence realizing the A -> B frame change on states with A in |0>:
/// CNOT_{B->C}, then SWAP_{A,B}.
inline Circuit frame_change_AB_compiled() {
    Circuit c(layout(), "A");
    c.add("CNOT", {"B", "C"});
    c.add("SWAP", {"A", "B"});
    return c;
}

/// Applies the compiled A -> B map, enforcing that A is in |0>.
inline PureState apply_frame_change_AB(const PureState &psi) {
    if (psi.dim() != 8) {
        throw std::invalid_argument("expected a three-qubit state");
    }
    for (size_t k = 4; k < 8; k++) {
        if (std::abs(psi.amplitudes()(k)) > 1e-9) {
            throw std::invalid_argument("the compiled A -> B map requires frame A in |0>");
        }
    }
    return PureState(circuit_global_unitary(frame_change_AB_compiled()).matrix() * psi.amplitudes());
}

struct NoiseModel {
    double two_qubit_depolarizing_prob = 0;
    double one_qubit_depolarizing_prob = 0;
    double readout_flip_prob = 0;

    void validate() const {
        for (double p : {two_qubit_depolarizing_prob, one_qubit_depolarizing_prob, readout_flip_prob}) {
            if (!(p >= 0 && p <= 1)) {
                throw std::invalid_argument("noise probabilities must lie in [0, 1]");
            }
        }
    }

    bool noiseless() const {
        return two_qubit_depolarizing_prob == 0 && one_qubit_depolarizing_prob == 0 && readout_flip_prob == 0;
    }

    /// Parses "p2q=0.02,p1q=0.001,ro=0.01"; omitted keys stay zero.
    static NoiseModel parse(const std::string &spec) {
        NoiseModel model;
        std::stringstream in(spec);
        std::string item;
        while (std::getline(in, item, ',')) {
            if (item.empty()) {
                continue;
            }
            auto eq = item.find('=');
            if (eq == std::string::npos) {
                throw std::invalid_argument("noise entry '" + item + "' is not key=value");
            }
            std::string key = item.substr(0, eq);
            double value = gates::parse_real(item.substr(eq + 1));
            if (key == "p2q") {
                model.two_qubit_depolarizing_prob = value;
            } else if (key == "p1q") {
                model.one_qubit_depolarizing_prob = value;
            } else if (key == "ro") {
                model.readout_flip_prob = value;
            } else {
                throw std::invalid_argument("unknown noise key '" + key + "'");
            }
        }
        model.validate();
        return model;
    }
};

/// Density-matrix simulation over a fixed layout with gate-level depolarizing noise.
class NoisySimulator {
   public:
    NoisySimulator(SystemLayout layout, NoiseModel noise) : layout_(std::move(layout)), noise_(noise) {
        noise_.validate();
        size_t d = layout_.total_dim();
        rho_ = ComplexMatrix::Zero(d, d);
        rho_(0, 0) = 1;
    }

    void apply(const ComplexMatrix &gate, const std::vector<std::string> &support) {
        ComplexMatrix u = embed(layout_, gate, support);
        rho_ = u * rho_ * u.adjoint();
        if (support.size() == 1) {
            depolarize(support, noise_.one_qubit_depolarizing_prob);
        } else {
            depolarize(support, noise_.two_qubit_depolarizing_prob);
        }
    }

    /// SWAP as three CNOTs, each followed by its own noise.
    void apply_swap(const std::string &a, const std::string &b) {
        apply(gates::CNOT(), {a, b});
        apply(gates::CNOT(), {b, a});
        apply(gates::CNOT(), {a, b});
    }

    DensityMatrix state() const {
        return DensityMatrix(rho_);
    }

   private:
    /// (1 - p) rho + p / 4^k sum_P P rho P over all Paulis P on the support.
    void depolarize(const std::vector<std::string> &support, double p) {
        if (p == 0) {
            return;
        }
        std::vector<ComplexMatrix> paulis{ComplexMatrix::Identity(1, 1)};
        for (size_t q = 0; q < support.size(); q++) {
            std::vector<ComplexMatrix> next;
            for (const auto &prefix : paulis) {
                for (const auto &single : {gates::I2(), gates::X(), gates::Y(), gates::Z()}) {
                    next.push_back(kron(prefix, single));
                }
            }
            paulis = std::move(next);
        }
        ComplexMatrix mixed = ComplexMatrix::Zero(rho_.rows(), rho_.cols());
        for (const auto &pauli : paulis) {
            ComplexMatrix full = embed(layout_, pauli, support);
            mixed += full * rho_ * full.adjoint();
        }
        rho_ = (1 - p) * rho_ + (p / static_cast<double>(paulis.size())) * mixed;
    }

    SystemLayout layout_;
    NoiseModel noise_;
    ComplexMatrix rho_;
};

/// Noisy state of the lab description (frame A) or after the compiled
/// frame change (frame B).
inline DensityMatrix protocol_state(const std::string &frame, const NoiseModel &noise) {
    if (frame != "A" && frame != "B") {
        throw std::invalid_argument("the protocol describes frames A and B only");
    }
    NoisySimulator sim(layout(), noise);
    sim.apply(gates::X(), {"C"});
    sim.apply(gates::H(), {"B"});
    if (frame == "B") {
        sim.apply(gates::CNOT(), {"B", "C"});
        sim.apply_swap("A", "B");
    }
    return sim.state();
}

struct ProtocolFrame {
    ResourceReport report;
    DensityMatrix rho;
    double min_raw_eigenvalue = 0;
    bool projected = false;
};

struct ProtocolResult {
    ProtocolFrame frame_a;
    ProtocolFrame frame_b;
    double invariant_delta = 0;  // total(B) - total(A)
    uint64_t shots = 0;          // zero for exact mode
    uint64_t seed = 0;
};

/// Tomography of both frame descriptions with pair A-C and coherence on C.
/// shots = 0 selects exact Born probabilities, which are always inverted
/// linearly; `estimator` applies to sampled data.
inline ProtocolResult run_protocol(
    uint64_t shots, const NoiseModel &noise, uint64_t seed, Estimator estimator = Estimator::MaximumLikelihood) {
    noise.validate();
    std::mt19937_64 rng(seed);
    auto measure = [&](const std::string &frame) {
        DensityMatrix truth = protocol_state(frame, noise);
        std::vector<BasisFrequencies> data;
        if (shots == 0) {
            data = exact_frequencies(truth, noise.readout_flip_prob);
        } else {
            data = frequencies_from_records(sample_records(truth, shots, rng, noise.readout_flip_prob));
        }
        TomographyResult tomo = reconstruct_state(data, shots == 0 ? Estimator::LinearProjected : estimator);
        ResourceReport report = resource_report(layout(), tomo.rho, frame, {"A", "C"}, "C");
        return ProtocolFrame{report, tomo.rho, tomo.min_raw_eigenvalue, tomo.projected};
    };
    ProtocolFrame a = measure("A");
    ProtocolFrame b = measure("B");
    double delta = b.report.total() - a.report.total();
    return ProtocolResult{std::move(a), std::move(b), delta, shots, seed};
}

/// One frame's view of a physical state: the frame label is traced out and
/// the remaining pair is split by the frame's value k.
struct FrameView {
    std::string frame;
    std::vector<std::string> pair;             // layout order
    std::array<ComplexVector, 2> conditional;  // unnormalized pair states
    DensityMatrix rho;                         // sum_k |chi_k><chi_k|
};

inline FrameView frame_view(const PhysicalState &psi, const std::string &frame) {
    ComplexVector v = physical_frame_map(frame).matrix() * psi.embedded();
    SystemLayout abc = layout();
    size_t site = abc.site(frame);
    std::vector<std::string> pair = abc.complement({frame});
    std::array<ComplexVector, 2> conditional{ComplexVector::Zero(4), ComplexVector::Zero(4)};
    for (size_t idx = 0; idx < 8; idx++) {
        size_t k = abc.digit(idx, site);
        size_t hi = abc.digit(idx, abc.site(pair[0]));
        size_t lo = abc.digit(idx, abc.site(pair[1]));
        conditional[k](2 * hi + lo) = v(idx);
    }
    ComplexMatrix rho = conditional[0] * conditional[0].adjoint() + conditional[1] * conditional[1].adjoint();
    return FrameView{frame, pair, conditional, DensityMatrix(rho)};
}

struct FrameAssignment {
    std::string frame;
    std::pair<std::string, std::string> pair;
    std::string local;
};

/// Entangled pair and coherence carrier per frame, in reporting order C, A, B.
inline const std::vector<FrameAssignment> &frame_assignments() {
    static const std::vector<FrameAssignment> table{
        {"C", {"A", "B"}, "B"},
        {"A", {"B", "C"}, "B"},
        {"B", {"A", "C"}, "A"},
    };
    return table;
}

inline ResourceReport frame_resources(const PhysicalState &psi, const FrameAssignment &assignment) {
    FrameView view = frame_view(psi, assignment.frame);
    SystemLayout pair_layout = SystemLayout::uniform(view.pair, 2);
    return resource_report(pair_layout, view.rho, assignment.frame, assignment.pair, assignment.local);
}

/// cos(lambda/2) |000> + sin(lambda/2) |110>: a product state at lambda = 0
/// and a Bell pair on A-B in frame C at lambda = pi/2.
inline PhysicalState default_family(double lambda) {
    return PhysicalState(std::cos(lambda / 2), 0, 0, std::sin(lambda / 2));
}

struct SweepPoint {
    double lambda = 0;
    bool accepted = true;
    std::string reason;
    std::vector<ResourceReport> reports;  // frames C, A, B
    double max_residual = 0;              // max |C^2 + D^2 - 1| over frames
    double max_p2 = 0;                    // largest predictability of a local carrier
};

struct SweepResult {
    std::vector<SweepPoint> points;
    double max_residual = 0;
    size_t rejected = 0;
    bool c2_nondecreasing_frame_c = true;
    bool d2_nonincreasing_frame_c = true;
};

struct SweepOptions {
    /// Also reject points whose local carrier has nonzero predictability.
    bool require_zero_predictability = false;
    double tolerance = 1e-9;
};

inline SweepResult lambda_sweep(
    const std::function<ComplexVector(double)> &family, const std::vector<double> &grid, const SweepOptions &options = {}) {
    SweepResult result;
    std::optional<ResourceReport> previous;
    for (double lambda : grid) {
        SweepPoint point;
        point.lambda = lambda;
        std::optional<PhysicalState> state;
        try {
            state = PhysicalState::from_vector(family(lambda), options.tolerance);
        } catch (const std::invalid_argument &e) {
            point.accepted = false;
            point.reason = e.what();
        }
        if (state) {
            for (const auto &assignment : frame_assignments()) {
                ResourceReport report = frame_resources(*state, assignment);
                point.max_residual = std::max(point.max_residual, std::abs(report.total() - 1));
                point.max_p2 = std::max(point.max_p2, report.p2);
                point.reports.push_back(report);
            }
            if (options.require_zero_predictability && point.max_p2 > options.tolerance) {
                point.accepted = false;
                point.reason = "local carrier has nonzero predictability";
            }
        }
        if (point.accepted) {
            result.max_residual = std::max(result.max_residual, point.max_residual);
            const ResourceReport &frame_c = point.reports.front();
            if (previous) {
                result.c2_nondecreasing_frame_c &= frame_c.c2 >= previous->c2 - options.tolerance;
                result.d2_nonincreasing_frame_c &= frame_c.d2_purity <= previous->d2_purity + options.tolerance;
            }
        } else {
            result.rejected++;
        }
        if (point.accepted) {
            previous = point.reports.front();
        }
        result.points.push_back(std::move(point));
    }
    return result;
}

inline SweepResult lambda_sweep(const std::vector<double> &grid, const SweepOptions &options = {}) {
    return lambda_sweep([](double lambda) { return default_family(lambda).embedded(); }, grid, options);
}

}  // namespace qrf::z2
