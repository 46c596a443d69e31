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

#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrf/gates.hpp"
#include "qrf/linalg.hpp"

namespace qrf {

/// Internal invariant broken; indicates a defect rather than bad input.
struct InvariantViolation : std::logic_error {
    using std::logic_error::logic_error;
};

struct GateOrigin {
    enum class Kind { Native, Compiled };

    Kind kind = Kind::Native;
    // The rest is only meaningful for compiled gates.
    std::string frame;
    std::string source_name;
    size_t source_index = 0;
    std::string rule;

    static GateOrigin native() {
        return {};
    }
    static GateOrigin compiled(std::string frame, std::string source_name, size_t source_index, std::string rule) {
        return {Kind::Compiled, std::move(frame), std::move(source_name), source_index, std::move(rule)};
    }
};

struct Gate {
    std::string name;
    std::vector<std::string> support;
    ComplexMatrix matrix;
    GateOrigin origin;

    Gate(std::string name, std::vector<std::string> support, ComplexMatrix matrix, GateOrigin origin = GateOrigin::native())
        : name(std::move(name)), support(std::move(support)), matrix(std::move(matrix)), origin(std::move(origin)) {
        if (this->support.empty()) {
            throw std::invalid_argument("gate '" + this->name + "' has an empty support");
        }
        std::set<std::string> seen(this->support.begin(), this->support.end());
        if (seen.size() != this->support.size()) {
            throw std::invalid_argument("gate '" + this->name + "' repeats a support label");
        }
        if (!is_unitary(this->matrix)) {
            throw std::invalid_argument("gate '" + this->name + "' is not unitary");
        }
    }

    /// A builtin gate by name, e.g. Gate::builtin("RX(pi/2)", {"A"}).
    static Gate builtin(const std::string &name, std::vector<std::string> support) {
        auto m = gates::builtin(name);
        if (!m) {
            throw std::invalid_argument("unknown builtin gate '" + name + "'");
        }
        if (gates::builtin_arity(*m) != support.size()) {
            throw std::invalid_argument(
                "builtin gate '" + name + "' acts on " + std::to_string(gates::builtin_arity(*m)) + " qubit(s), support has " +
                std::to_string(support.size()));
        }
        return Gate(name, std::move(support), std::move(*m));
    }
};

/// An ordered gate list over a layout, expressed relative to `frame`.
///
/// List order is application order: gates[0] acts first, so the circuit's
/// unitary is gates[L-1] ... gates[0].
class Circuit {
   public:
    Circuit(SystemLayout layout, std::string frame) : layout_(std::move(layout)), frame_(std::move(frame)) {
        layout_.site(frame_);
    }

    Circuit &add(Gate gate) {
        if (layout_.dim_of(gate.support) != static_cast<size_t>(gate.matrix.rows())) {
            throw std::invalid_argument("gate '" + gate.name + "' does not match the dimension of its support");
        }
        gates_.push_back(std::move(gate));
        return *this;
    }

    Circuit &add(const std::string &builtin_name, std::vector<std::string> support) {
        return add(Gate::builtin(builtin_name, std::move(support)));
    }

    const SystemLayout &layout() const {
        return layout_;
    }
    const std::string &frame() const {
        return frame_;
    }
    const std::vector<Gate> &gates() const {
        return gates_;
    }
    size_t size() const {
        return gates_.size();
    }

   private:
    SystemLayout layout_;
    std::string frame_;
    std::vector<Gate> gates_;
};

inline Unitary circuit_global_unitary(const Circuit &circuit) {
    const auto &layout = circuit.layout();
    check_dimension(layout.total_dim());
    ComplexMatrix total = ComplexMatrix::Identity(layout.total_dim(), layout.total_dim());
    for (const auto &gate : circuit.gates()) {
        total = embed(layout, gate.matrix, gate.support) * total;
    }
    return Unitary(total, 1e-9);
}

/// A gate counts as an entangling primitive when it touches at least two
/// subsystems and is not a tensor product of single-subsystem operators.
inline bool is_entangling_primitive(const SystemLayout &layout, const Gate &gate) {
    if (gate.support.size() < 2) {
        return false;
    }
    return !is_product_operator(layout.restricted(gate.support), gate.matrix);
}

inline size_t entangling_count(const Circuit &circuit) {
    size_t n = 0;
    for (const auto &gate : circuit.gates()) {
        if (is_entangling_primitive(circuit.layout(), gate)) {
            n++;
        }
    }
    return n;
}

}  // namespace qrf
