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

// JSON forms of matrices, circuits and reports.
//
//   matrix   {"rows": r, "cols": c, "re": [...], "im": [...]}   (row-major)
//   circuit  {"layout": {"labels": [...], "dims": [...]}, "frame": "C",
//             "gates": [{"name": "H", "support": ["A"]},
//                       {"name": "U", "support": ["A"], "matrix": {...}},
//                       {"name": "rot", "support": ["B"], "builtin": "RX(pi/3)"}]}
//
// A gate without "matrix" or "builtin" is looked up by its name.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qrf/circuit.hpp"
#include "qrf/compiler.hpp"
#include "qrf/transform.hpp"

namespace qrf {

using nlohmann::json;

inline json matrix_to_json(const ComplexMatrix &m) {
    json re = json::array();
    json im = json::array();
    for (Eigen::Index r = 0; r < m.rows(); r++) {
        for (Eigen::Index c = 0; c < m.cols(); c++) {
            re.push_back(m(r, c).real());
            im.push_back(m(r, c).imag());
        }
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

inline ComplexMatrix matrix_from_json(const json &j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("re")) {
        throw std::invalid_argument("matrix JSON needs rows, cols and re");
    }
    if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer()) {
        throw std::invalid_argument("matrix rows and cols must be integers");
    }
    long rows = j["rows"].get<long>();
    long cols = j["cols"].get<long>();
    if (rows <= 0 || cols <= 0) {
        throw std::invalid_argument("matrix dimensions must be positive");
    }
    const json &re = j["re"];
    json im = j.contains("im") ? j["im"] : json::array();
    size_t count = static_cast<size_t>(rows * cols);
    if (!re.is_array() || re.size() != count || !im.is_array() || (!im.empty() && im.size() != count)) {
        throw std::invalid_argument("matrix entry arrays must hold rows * cols numbers");
    }
    ComplexMatrix m(rows, cols);
    for (size_t k = 0; k < count; k++) {
        if (!re[k].is_number() || (!im.empty() && !im[k].is_number())) {
            throw std::invalid_argument("matrix entries must be numbers");
        }
        double imag = im.empty() ? 0.0 : im[k].get<double>();
        m(static_cast<Eigen::Index>(k) / cols, static_cast<Eigen::Index>(k) % cols) = Complex(re[k].get<double>(), imag);
    }
    return m;
}

inline json layout_to_json(const SystemLayout &layout) {
    return {{"labels", layout.labels()}, {"dims", layout.dims()}};
}

inline SystemLayout layout_from_json(const json &j) {
    if (!j.is_object() || !j.contains("labels") || !j.contains("dims")) {
        throw std::invalid_argument("layout JSON needs labels and dims");
    }
    try {
        return SystemLayout(j["labels"].get<std::vector<std::string>>(), j["dims"].get<std::vector<size_t>>());
    } catch (const json::exception &e) {
        throw std::invalid_argument(std::string("malformed layout: ") + e.what());
    }
}

inline json origin_to_json(const GateOrigin &origin) {
    if (origin.kind == GateOrigin::Kind::Native) {
        return {{"kind", "native"}};
    }
    return {
        {"kind", "compiled"},
        {"frame", origin.frame},
        {"source", origin.source_name},
        {"source_index", origin.source_index},
        {"rule", origin.rule},
    };
}

inline json gate_to_json(const Gate &gate) {
    return {
        {"name", gate.name},
        {"support", gate.support},
        {"matrix", matrix_to_json(gate.matrix)},
        {"origin", origin_to_json(gate.origin)},
    };
}

inline Gate gate_from_json(const json &j) {
    if (!j.is_object() || !j.contains("name") || !j.contains("support")) {
        throw std::invalid_argument("gate JSON needs name and support");
    }
    std::string name;
    std::vector<std::string> support;
    try {
        name = j["name"].get<std::string>();
        support = j["support"].get<std::vector<std::string>>();
    } catch (const json::exception &e) {
        throw std::invalid_argument(std::string("malformed gate: ") + e.what());
    }
    if (j.contains("matrix")) {
        return Gate(name, support, matrix_from_json(j["matrix"]));
    }
    if (j.contains("builtin")) {
        if (!j["builtin"].is_string()) {
            throw std::invalid_argument("gate builtin must be a string");
        }
        Gate gate = Gate::builtin(j["builtin"].get<std::string>(), support);
        gate.name = name;
        return gate;
    }
    return Gate::builtin(name, support);
}

inline json circuit_to_json(const Circuit &circuit) {
    json gates = json::array();
    for (const auto &gate : circuit.gates()) {
        gates.push_back(gate_to_json(gate));
    }
    return {{"layout", layout_to_json(circuit.layout())}, {"frame", circuit.frame()}, {"gates", gates}};
}

inline Circuit circuit_from_json(const json &j) {
    if (!j.is_object() || !j.contains("layout") || !j.contains("frame")) {
        throw std::invalid_argument("circuit JSON needs layout and frame");
    }
    if (!j["frame"].is_string()) {
        throw std::invalid_argument("circuit frame must be a label");
    }
    Circuit circuit(layout_from_json(j["layout"]), j["frame"].get<std::string>());
    if (j.contains("gates")) {
        if (!j["gates"].is_array()) {
            throw std::invalid_argument("circuit gates must be an array");
        }
        for (const auto &g : j["gates"]) {
            circuit.add(gate_from_json(g));
        }
    }
    return circuit;
}

inline json report_to_json(const ComplexityReport &report) {
    json gates = json::array();
    for (const auto &g : report.gates) {
        gates.push_back({
            {"index", g.index},
            {"name", g.name},
            {"class", g.gate_class},
            {"entangling_primitive", g.entangling_primitive},
            {"generic", g.generic},
            {"compiled_entangling", g.compiled_entangling},
        });
    }
    return {
        {"old_frame", report.old_frame},
        {"new_frame", report.new_frame},
        {"n_ent", {{report.old_frame, report.n_ent_old}, {report.new_frame, report.n_ent_new}}},
        {"n_ent_old", report.n_ent_old},
        {"n_ent_new", report.n_ent_new},
        {"n_generic_locals", report.n_generic_locals},
        {"bound", report.bound},
        {"saturated", report.saturated},
        {"gates", gates},
    };
}

inline json controlled_to_json(const ControlledOperator &op) {
    json blocks = json::array();
    for (const auto &block : op.blocks) {
        blocks.push_back({{"element", block.element.coords}, {"matrix", matrix_to_json(block.target)}});
    }
    return {{"control", op.control}, {"target", op.target}, {"spectators", op.spectators}, {"blocks", blocks}};
}

}  // namespace qrf
