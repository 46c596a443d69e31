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

// Relational circuit compilation: rewrite a circuit expressed in one internal
// frame into the equivalent circuit seen from another, gate by gate.
//
// Gates supported on registers go through the controlled-gate transform and
// are emitted according to their class:
//   frame-robust  -> the original gate, unchanged
//   phase-sector  -> V_0(chi) on the old frame, then the original gate
//   entangling    -> one controlled gate on {old frame} + support
// Gates touching the new frame are outside the transform's reach; their image
// is computed by dense conjugation and emitted as one gate on the subsystems
// it acts on nontrivially. Gates on the old frame are rejected: a circuit
// expressed in a frame leaves that frame idle.

#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "qrf/circuit.hpp"
#include "qrf/transform.hpp"

namespace qrf {

namespace detail {

inline bool touches(const std::vector<std::string> &support, const std::string &label) {
    return std::find(support.begin(), support.end(), label) != support.end();
}

/// Labels on which `m` acts as something other than the identity, in layout order.
inline std::vector<std::string> nontrivial_support(const SystemLayout &layout, const ComplexMatrix &m, double tol = 1e-9) {
    double scale = std::max(1.0, m.norm());
    ComplexMatrix identity = ComplexMatrix::Identity(m.rows(), m.cols());
    if ((m - m(0, 0) * identity).norm() <= tol * scale) {
        return {};
    }
    std::vector<std::string> active = layout.labels();
    for (const auto &label : layout.labels()) {
        std::vector<std::string> rest;
        for (const auto &other : active) {
            if (other != label) {
                rest.push_back(other);
            }
        }
        if (rest.empty()) {
            break;
        }
        size_t traced = layout.total_dim() / layout.dim_of(rest);
        ComplexMatrix reduced = trace_out(layout, m, rest) / static_cast<double>(traced);
        if ((embed(layout, reduced, rest) - m).norm() <= tol * scale) {
            active = std::move(rest);
        }
    }
    return active;
}

}  // namespace detail

/// Conjugates one gate by the frame change; `index` is its position in the source circuit.
inline std::vector<Gate> compile_gate(const FrameChange &fc, const Gate &gate, size_t index) {
    const auto &layout = fc.layout();
    if (detail::touches(gate.support, fc.old_frame())) {
        throw std::invalid_argument(
            "gate '" + gate.name + "' acts on the circuit's own frame '" + fc.old_frame() + "'");
    }
    const std::string &frame = fc.new_frame();
    std::vector<Gate> out;

    if (!detail::touches(gate.support, fc.new_frame())) {
        GateClass cls = classify_gate(fc.group(), gate.matrix);
        switch (cls.kind) {
            case GateClass::Kind::FrameRobust:
                out.emplace_back(gate.name, gate.support, gate.matrix, GateOrigin::compiled(frame, gate.name, index, "frame-robust"));
                break;
            case GateClass::Kind::PhaseSector: {
                std::string label = GroupElement{cls.character->label}.str();
                out.emplace_back(
                    "V0[chi=" + label + "]",
                    std::vector<std::string>{fc.old_frame()},
                    phase_control(fc.group(), *cls.character),
                    GateOrigin::compiled(frame, gate.name, index, "phase-sector"));
                out.emplace_back(gate.name, gate.support, gate.matrix, GateOrigin::compiled(frame, gate.name, index, "phase-sector"));
                break;
            }
            case GateClass::Kind::Entangling: {
                ControlledOperator controlled = transform_operator(fc, gate.matrix, gate.support);
                out.emplace_back(
                    "C[" + gate.name + "]",
                    controlled.support(),
                    controlled.local_matrix(fc.group()),
                    GateOrigin::compiled(frame, gate.name, index, "controlled"));
                break;
            }
        }
        return out;
    }

    ComplexMatrix image = fc.dense() * embed(layout, gate.matrix, gate.support) * fc.dense().adjoint();
    std::vector<std::string> support = detail::nontrivial_support(layout, image);
    if (support.empty()) {
        // Pure phase; park it on the old frame so the global unitary is exact.
        support = {fc.old_frame()};
    }
    size_t traced = layout.total_dim() / layout.dim_of(support);
    ComplexMatrix local = trace_out(layout, image, support) / static_cast<double>(traced);
    out.emplace_back(
        gate.name + "^(" + frame + ")", support, local, GateOrigin::compiled(frame, gate.name, index, "conjugated"));
    return out;
}

inline Circuit compile_circuit(const Circuit &circuit, const FrameChange &fc) {
    if (!(circuit.layout() == fc.layout())) {
        throw std::invalid_argument("circuit layout does not match the frame change layout");
    }
    if (circuit.frame() != fc.old_frame()) {
        throw std::invalid_argument(
            "circuit is expressed in frame '" + circuit.frame() + "', frame change starts at '" + fc.old_frame() + "'");
    }
    Circuit result(circuit.layout(), fc.new_frame());
    for (size_t k = 0; k < circuit.size(); k++) {
        for (auto &gate : compile_gate(fc, circuit.gates()[k], k)) {
            result.add(std::move(gate));
        }
    }
    return result;
}

struct GateAttribution {
    size_t index = 0;
    std::string name;
    bool entangling_primitive = false;  // in the source circuit
    bool generic = false;               // counted in the overhead term
    std::string gate_class;             // classifier verdict, or "frame-touching"
    size_t compiled_entangling = 0;     // entangling primitives it compiles into
};

struct ComplexityReport {
    std::string old_frame;
    std::string new_frame;
    size_t n_ent_old = 0;
    size_t n_ent_new = 0;
    size_t n_generic_locals = 0;
    size_t bound = 0;
    bool saturated = false;
    std::vector<GateAttribution> gates;
};

/// Entangling cost before and after the frame change together with the
/// overhead bound n_ent_new <= n_ent_old + (number of generic local gates).
///
/// A local gate on registers is generic when the classifier calls it
/// entangling. A local gate touching the new frame is generic when its
/// conjugate is an entangling primitive. Throws InvariantViolation if the
/// bound fails.
inline ComplexityReport overhead_report(const Circuit &circuit, const FrameChange &fc) {
    Circuit compiled = compile_circuit(circuit, fc);
    ComplexityReport report;
    report.old_frame = fc.old_frame();
    report.new_frame = fc.new_frame();
    report.n_ent_old = entangling_count(circuit);
    report.n_ent_new = entangling_count(compiled);

    for (size_t k = 0; k < circuit.size(); k++) {
        const Gate &gate = circuit.gates()[k];
        GateAttribution entry;
        entry.index = k;
        entry.name = gate.name;
        entry.entangling_primitive = is_entangling_primitive(circuit.layout(), gate);
        for (const auto &out : compiled.gates()) {
            if (out.origin.source_index == k && is_entangling_primitive(compiled.layout(), out)) {
                entry.compiled_entangling++;
            }
        }
        if (detail::touches(gate.support, fc.new_frame())) {
            entry.gate_class = "frame-touching";
            entry.generic = !entry.entangling_primitive && entry.compiled_entangling > 0;
        } else {
            GateClass cls = classify_gate(fc.group(), gate.matrix);
            entry.gate_class = cls.name();
            entry.generic = !entry.entangling_primitive && cls.kind == GateClass::Kind::Entangling;
        }
        if (entry.generic) {
            report.n_generic_locals++;
        }
        report.gates.push_back(std::move(entry));
    }
    report.bound = report.n_ent_old + report.n_generic_locals;
    report.saturated = report.n_ent_new == report.bound;
    if (report.n_ent_new > report.bound) {
        throw InvariantViolation(
            "entangling overhead bound violated: " + std::to_string(report.n_ent_new) + " > " + std::to_string(report.bound));
    }
    return report;
}

inline ComplexityReport overhead_report(const Circuit &circuit, const FiniteAbelianGroup &group, const FrameChange &fc) {
    if (!(group == fc.group())) {
        throw std::invalid_argument("group does not match the frame change");
    }
    return overhead_report(circuit, fc);
}

}  // namespace qrf
