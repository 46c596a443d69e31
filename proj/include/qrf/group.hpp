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

#include <complex>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace qrf {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// An element of a product of cyclic groups, stored as one coordinate per factor.
struct GroupElement {
    std::vector<int> coords;

    bool operator==(const GroupElement &) const = default;

    std::string str() const {
        std::ostringstream out;
        out << '(';
        for (size_t k = 0; k < coords.size(); k++) {
            if (k) {
                out << ',';
            }
            out << coords[k];
        }
        out << ')';
        return out.str();
    }
};

/// Character label m of a finite Abelian group; evaluates to exp(2 pi i sum_j m_j g_j / n_j).
struct Character {
    std::vector<int> label;

    bool operator==(const Character &) const = default;
};

/// Finite Abelian group given explicitly as Z_{n_1} x ... x Z_{n_k}.
///
/// Elements are enumerated mixed-radix over the factor list with the last
/// factor varying fastest. That index is also the computational-basis index
/// of a register carrying the regular representation.
class FiniteAbelianGroup {
   public:
    explicit FiniteAbelianGroup(std::vector<int> factors) : factors_(std::move(factors)) {
        if (factors_.empty()) {
            throw std::invalid_argument("group needs at least one cyclic factor");
        }
        order_ = 1;
        for (int n : factors_) {
            if (n < 1) {
                throw std::invalid_argument("cyclic factor orders must be positive, got " + std::to_string(n));
            }
            order_ *= static_cast<size_t>(n);
        }
    }

    const std::vector<int> &factors() const {
        return factors_;
    }
    size_t order() const {
        return order_;
    }
    size_t rank() const {
        return factors_.size();
    }

    GroupElement identity() const {
        return GroupElement{std::vector<int>(factors_.size(), 0)};
    }

    void check(const GroupElement &g) const {
        if (g.coords.size() != factors_.size()) {
            throw std::invalid_argument(
                "group element " + g.str() + " has " + std::to_string(g.coords.size()) + " coordinates, group has " +
                std::to_string(factors_.size()) + " factors");
        }
        for (size_t j = 0; j < factors_.size(); j++) {
            if (g.coords[j] < 0 || g.coords[j] >= factors_[j]) {
                throw std::invalid_argument("group element " + g.str() + " is out of range");
            }
        }
    }

    GroupElement element(size_t index) const {
        if (index >= order_) {
            throw std::invalid_argument("element index " + std::to_string(index) + " out of range");
        }
        GroupElement g{std::vector<int>(factors_.size(), 0)};
        for (size_t j = factors_.size(); j-- > 0;) {
            g.coords[j] = static_cast<int>(index % static_cast<size_t>(factors_[j]));
            index /= static_cast<size_t>(factors_[j]);
        }
        return g;
    }

    size_t index(const GroupElement &g) const {
        check(g);
        size_t result = 0;
        for (size_t j = 0; j < factors_.size(); j++) {
            result = result * static_cast<size_t>(factors_[j]) + static_cast<size_t>(g.coords[j]);
        }
        return result;
    }

    std::vector<GroupElement> elements() const {
        std::vector<GroupElement> result;
        result.reserve(order_);
        for (size_t k = 0; k < order_; k++) {
            result.push_back(element(k));
        }
        return result;
    }

    GroupElement compose(const GroupElement &g, const GroupElement &h) const {
        check(g);
        check(h);
        GroupElement result{std::vector<int>(factors_.size())};
        for (size_t j = 0; j < factors_.size(); j++) {
            result.coords[j] = (g.coords[j] + h.coords[j]) % factors_[j];
        }
        return result;
    }

    GroupElement inverse(const GroupElement &g) const {
        check(g);
        GroupElement result{std::vector<int>(factors_.size())};
        for (size_t j = 0; j < factors_.size(); j++) {
            result.coords[j] = (factors_[j] - g.coords[j]) % factors_[j];
        }
        return result;
    }

    size_t compose_index(size_t g, size_t h) const {
        return index(compose(element(g), element(h)));
    }
    size_t inverse_index(size_t g) const {
        return index(inverse(element(g)));
    }

    void check(const Character &chi) const {
        if (chi.label.size() != factors_.size()) {
            throw std::invalid_argument("character label has the wrong number of coordinates");
        }
        for (size_t j = 0; j < factors_.size(); j++) {
            if (chi.label[j] < 0 || chi.label[j] >= factors_[j]) {
                throw std::invalid_argument("character label out of range");
            }
        }
    }

    Complex evaluate(const Character &chi, const GroupElement &g) const {
        check(chi);
        check(g);
        // Accumulate the exponent as a fraction of a full turn, reduced per factor.
        double turns = 0;
        for (size_t j = 0; j < factors_.size(); j++) {
            int numer = (chi.label[j] * g.coords[j]) % factors_[j];
            turns += static_cast<double>(numer) / factors_[j];
        }
        return std::polar(1.0, 2 * std::numbers::pi * turns);
    }

    std::vector<Character> characters() const {
        std::vector<Character> result;
        for (const auto &g : elements()) {
            result.push_back(Character{g.coords});
        }
        return result;
    }

    /// Right-regular representation: U_R(g)|h> = |h g^{-1}>, a |G| x |G| permutation matrix.
    ComplexMatrix regular_rep(const GroupElement &g) const {
        check(g);
        GroupElement g_inv = inverse(g);
        ComplexMatrix result = ComplexMatrix::Zero(order_, order_);
        for (size_t h = 0; h < order_; h++) {
            size_t target = index(compose(element(h), g_inv));
            result(target, h) = 1;
        }
        return result;
    }

    /// The group written the way the CLI accepts it, e.g. "2,2".
    std::string str() const {
        std::string out;
        for (size_t j = 0; j < factors_.size(); j++) {
            if (j) {
                out += ',';
            }
            out += std::to_string(factors_[j]);
        }
        return out;
    }

    bool operator==(const FiniteAbelianGroup &other) const {
        return factors_ == other.factors_;
    }

   private:
    std::vector<int> factors_;
    size_t order_ = 1;
};

inline FiniteAbelianGroup make_group(std::vector<int> factors) {
    return FiniteAbelianGroup(std::move(factors));
}

/// Parses a comma-separated factor list such as "2" or "2,2".
inline FiniteAbelianGroup parse_group(std::string_view text) {
    std::vector<int> factors;
    std::string token;
    auto flush = [&]() {
        if (token.empty()) {
            throw std::invalid_argument("empty factor in group spec '" + std::string(text) + "'");
        }
        size_t used = 0;
        int value = 0;
        try {
            value = std::stoi(token, &used);
        } catch (const std::exception &) {
            throw std::invalid_argument("bad factor '" + token + "' in group spec");
        }
        if (used != token.size()) {
            throw std::invalid_argument("bad factor '" + token + "' in group spec");
        }
        factors.push_back(value);
        token.clear();
    };
    for (char c : text) {
        if (c == ',') {
            flush();
        } else if (c != ' ') {
            token += c;
        }
    }
    flush();
    return FiniteAbelianGroup(std::move(factors));
}

}  // namespace qrf
