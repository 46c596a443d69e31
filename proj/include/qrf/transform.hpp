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

// Frame-change unitaries between internal quantum reference frames and the
// controlled-gate form that local gates take after a change of frame.

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qrf/gates.hpp"
#include "qrf/group.hpp"
#include "qrf/linalg.hpp"

namespace qrf {

constexpr double kClassifyTolerance = 1e-10;

/// U_R(g) applied to each of `copies` registers: U_R(g)^{(x) copies}.
inline ComplexMatrix regular_rep_power(const FiniteAbelianGroup &group, const GroupElement &g, size_t copies) {
    ComplexMatrix single = group.regular_rep(g);
    ComplexMatrix result = ComplexMatrix::Identity(1, 1);
    for (size_t k = 0; k < copies; k++) {
        result = kron(result, single);
    }
    return result;
}

/// Number of registers k such that dim = |G|^k.
inline size_t register_count(const FiniteAbelianGroup &group, size_t dim) {
    if (group.order() == 1) {
        if (dim != 1) {
            throw std::invalid_argument("the trivial group only acts on one-dimensional registers");
        }
        return 1;
    }
    size_t k = 0;
    size_t d = 1;
    while (d < dim) {
        d *= group.order();
        k++;
    }
    if (d != dim || k == 0) {
        throw std::invalid_argument(
            "operator dimension " + std::to_string(dim) + " is not a power of the group order " +
            std::to_string(group.order()));
    }
    return k;
}

/// The change of perspective U_{0->i} = SWAP_{0,i} sum_g |g><g|_i (x) 1_0 (x) U_R(g)^{(x) R}.
///
/// Holds both the structured form (swap pair plus the group-element-controlled
/// block) and the dense unitary on the whole layout.
class FrameChange {
   public:
    struct ControlBlock {
        GroupElement element;
        ComplexMatrix register_action;  // U_R(element) on one register
    };

    FrameChange(SystemLayout layout, FiniteAbelianGroup group, std::string old_frame, std::string new_frame)
        : layout_(std::move(layout)),
          group_(std::move(group)),
          old_frame_(std::move(old_frame)),
          new_frame_(std::move(new_frame)) {
        if (old_frame_ == new_frame_) {
            throw std::invalid_argument("old and new frame must differ");
        }
        layout_.site(old_frame_);
        layout_.site(new_frame_);
        for (size_t k = 0; k < layout_.size(); k++) {
            if (layout_.dims()[k] != group_.order()) {
                throw std::invalid_argument(
                    "subsystem '" + layout_.labels()[k] + "' has dimension " + std::to_string(layout_.dims()[k]) +
                    " but the group has order " + std::to_string(group_.order()));
            }
        }
        registers_ = layout_.complement({old_frame_, new_frame_});
        for (const auto &g : group_.elements()) {
            blocks_.push_back(ControlBlock{g, group_.regular_rep(g)});
        }

        std::vector<std::string> support{new_frame_};
        support.insert(support.end(), registers_.begin(), registers_.end());
        ComplexMatrix controlled = ComplexMatrix::Zero(layout_.total_dim(), layout_.total_dim());
        for (const auto &block : blocks_) {
            ComplexMatrix local = gates::projector(group_.order(), group_.index(block.element));
            for (size_t k = 0; k < registers_.size(); k++) {
                local = kron(local, block.register_action);
            }
            controlled += embed(layout_, local, support);
        }
        controlled_ = std::move(controlled);
        dense_ = swap_operator(layout_, old_frame_, new_frame_) * controlled_;
    }

    const SystemLayout &layout() const {
        return layout_;
    }
    const FiniteAbelianGroup &group() const {
        return group_;
    }
    const std::string &old_frame() const {
        return old_frame_;
    }
    const std::string &new_frame() const {
        return new_frame_;
    }
    /// Every label other than the two frames, in layout order.
    const std::vector<std::string> &registers() const {
        return registers_;
    }
    std::pair<std::string, std::string> swap_pair() const {
        return {old_frame_, new_frame_};
    }
    const std::vector<ControlBlock> &blocks() const {
        return blocks_;
    }
    /// The group-element-controlled factor W_i (everything but the swap).
    const ComplexMatrix &controlled_part() const {
        return controlled_;
    }
    const ComplexMatrix &dense() const {
        return dense_;
    }
    Unitary unitary() const {
        return Unitary(dense_);
    }

    bool is_register(const std::string &label) const {
        return std::find(registers_.begin(), registers_.end(), label) != registers_.end();
    }

   private:
    SystemLayout layout_;
    FiniteAbelianGroup group_;
    std::string old_frame_;
    std::string new_frame_;
    std::vector<std::string> registers_;
    std::vector<ControlBlock> blocks_;
    ComplexMatrix controlled_;
    ComplexMatrix dense_;
};

inline FrameChange build_frame_change(
    const SystemLayout &layout, const FiniteAbelianGroup &group, const std::string &old_frame, const std::string &new_frame) {
    return FrameChange(layout, group, old_frame, new_frame);
}

/// Image of a local gate: sum_g |g><g|_control (x) block(g) on `target`.
struct ControlledOperator {
    struct Block {
        GroupElement element;
        ComplexMatrix target;
    };

    std::string control;
    std::vector<Block> blocks;
    std::vector<std::string> target;
    std::vector<std::string> spectators;

    /// The operator on (control, target...) in that order.
    ComplexMatrix local_matrix(const FiniteAbelianGroup &group) const {
        size_t dt = static_cast<size_t>(blocks.front().target.rows());
        size_t d = group.order() * dt;
        ComplexMatrix m = ComplexMatrix::Zero(d, d);
        for (const auto &block : blocks) {
            size_t k = group.index(block.element);
            m.block(k * dt, k * dt, dt, dt) = block.target;
        }
        return m;
    }

    std::vector<std::string> support() const {
        std::vector<std::string> s{control};
        s.insert(s.end(), target.begin(), target.end());
        return s;
    }

    ComplexMatrix dense(const SystemLayout &layout, const FiniteAbelianGroup &group) const {
        return embed(layout, local_matrix(group), support());
    }
};

/// The conjugation orbit alpha_g(op) = U_R(g) op U_R(g)^dagger for every g,
/// in canonical element order. Composite operators use the tensor-power action.
inline std::vector<std::pair<GroupElement, ComplexMatrix>> orbit(const FiniteAbelianGroup &group, const ComplexMatrix &op) {
    if (op.rows() != op.cols()) {
        throw std::invalid_argument("orbit needs a square operator");
    }
    size_t copies = register_count(group, static_cast<size_t>(op.rows()));
    std::vector<std::pair<GroupElement, ComplexMatrix>> result;
    for (const auto &g : group.elements()) {
        ComplexMatrix rep = regular_rep_power(group, g, copies);
        result.emplace_back(g, rep * op * rep.adjoint());
    }
    return result;
}

inline ControlledOperator transform_operator(const FrameChange &fc, const ComplexMatrix &op, const std::vector<std::string> &support) {
    if (support.empty()) {
        throw std::invalid_argument("transform_operator needs a nonempty support");
    }
    for (const auto &label : support) {
        if (label == fc.old_frame() || label == fc.new_frame()) {
            throw std::invalid_argument(
                "support label '" + label + "' is a frame; the gate transform only covers register supports");
        }
    }
    size_t expected = fc.layout().dim_of(support);
    if (static_cast<size_t>(op.rows()) != expected || op.rows() != op.cols()) {
        throw std::invalid_argument("operator dimension does not match its support");
    }
    ControlledOperator result;
    result.control = fc.old_frame();
    result.target = support;
    std::vector<std::string> used = support;
    used.push_back(fc.old_frame());
    result.spectators = fc.layout().complement(used);
    for (auto &[g, image] : orbit(fc.group(), op)) {
        result.blocks.push_back({g, std::move(image)});
    }
    return result;
}

/// Frobenius distance between the dense Heisenberg conjugate
/// U_{0->i} op U_{0->i}^dagger and the controlled form built from blocks.
inline double verify_gate_transform(const FrameChange &fc, const ComplexMatrix &op, const std::vector<std::string> &support) {
    ControlledOperator controlled = transform_operator(fc, op, support);
    ComplexMatrix conjugated = fc.dense() * embed(fc.layout(), op, support) * fc.dense().adjoint();
    return frobenius_distance(conjugated, controlled.dense(fc.layout(), fc.group()));
}

struct GateClass {
    enum class Kind { FrameRobust, PhaseSector, Entangling };

    Kind kind = Kind::Entangling;
    std::optional<Character> character;  // set for PhaseSector only

    static GateClass robust() {
        return {Kind::FrameRobust, std::nullopt};
    }
    static GateClass phase(Character chi) {
        return {Kind::PhaseSector, std::move(chi)};
    }
    static GateClass entangling() {
        return {Kind::Entangling, std::nullopt};
    }

    const char *name() const {
        switch (kind) {
            case Kind::FrameRobust:
                return "FrameRobust";
            case Kind::PhaseSector:
                return "PhaseSector";
            default:
                return "Entangling";
        }
    }

    bool operator==(const GateClass &) const = default;
};

/// Diagonal phase V_0(chi) = sum_g chi(g) |g><g| on the control register.
inline ComplexMatrix phase_control(const FiniteAbelianGroup &group, const Character &chi) {
    ComplexMatrix m = ComplexMatrix::Zero(group.order(), group.order());
    for (size_t k = 0; k < group.order(); k++) {
        m(k, k) = group.evaluate(chi, group.element(k));
    }
    return m;
}

/// Robust if every conjugate equals op; phase sector if every conjugate is
/// chi(g) op for a valid character chi; entangling otherwise.
inline GateClass classify_gate(const FiniteAbelianGroup &group, const ComplexMatrix &op, double tol = kClassifyTolerance) {
    auto conjugates = orbit(group, op);
    double scale = op.norm();
    if (scale == 0) {
        throw std::invalid_argument("cannot classify the zero operator");
    }
    bool robust = std::all_of(conjugates.begin(), conjugates.end(), [&](const auto &entry) {
        return (entry.second - op).norm() <= tol * scale;
    });
    if (robust) {
        return GateClass::robust();
    }

    Eigen::Index r = 0;
    Eigen::Index c = 0;
    op.cwiseAbs().maxCoeff(&r, &c);
    std::vector<Complex> phases;
    for (const auto &[g, image] : conjugates) {
        if (!proportional_up_to_phase(image, op, tol)) {
            return GateClass::entangling();
        }
        Complex ratio = image(r, c) / op(r, c);
        phases.push_back(ratio / std::abs(ratio));
    }

    // Read the character label off the generators, then insist it reproduces
    // every phase. A mismatch means the proportionality was numerically accidental.
    Character chi{std::vector<int>(group.rank(), 0)};
    for (size_t j = 0; j < group.rank(); j++) {
        GroupElement generator = group.identity();
        if (group.factors()[j] == 1) {
            continue;
        }
        generator.coords[j] = 1;
        Complex phase = phases[group.index(generator)];
        int n = group.factors()[j];
        long m = std::lround(std::arg(phase) * n / (2 * std::numbers::pi));
        chi.label[j] = static_cast<int>(((m % n) + n) % n);
    }
    double phase_tol = std::max(tol, tol * static_cast<double>(op.rows()));
    for (size_t k = 0; k < group.order(); k++) {
        if (std::abs(group.evaluate(chi, group.element(k)) - phases[k]) > phase_tol) {
            return GateClass::entangling();
        }
    }
    return GateClass::phase(std::move(chi));
}

}  // namespace qrf
