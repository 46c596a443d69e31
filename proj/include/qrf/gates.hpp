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

#include <cctype>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qrf/group.hpp"

namespace qrf::gates {

inline ComplexMatrix I2() {
    return ComplexMatrix::Identity(2, 2);
}

inline ComplexMatrix X() {
    ComplexMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline ComplexMatrix Y() {
    ComplexMatrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

inline ComplexMatrix Z() {
    ComplexMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

inline ComplexMatrix H() {
    ComplexMatrix m(2, 2);
    double s = 1 / std::numbers::sqrt2;
    m << s, s, s, -s;
    return m;
}

inline ComplexMatrix S() {
    ComplexMatrix m(2, 2);
    m << 1, 0, 0, Complex(0, 1);
    return m;
}

inline ComplexMatrix T() {
    ComplexMatrix m(2, 2);
    m << 1, 0, 0, std::polar(1.0, std::numbers::pi / 4);
    return m;
}

/// exp(-i theta X / 2)
inline ComplexMatrix RX(double theta) {
    ComplexMatrix m(2, 2);
    double c = std::cos(theta / 2);
    double s = std::sin(theta / 2);
    m << c, Complex(0, -s), Complex(0, -s), c;
    return m;
}

inline ComplexMatrix RY(double theta) {
    ComplexMatrix m(2, 2);
    double c = std::cos(theta / 2);
    double s = std::sin(theta / 2);
    m << c, -s, s, c;
    return m;
}

inline ComplexMatrix RZ(double theta) {
    ComplexMatrix m(2, 2);
    m << std::polar(1.0, -theta / 2), 0, 0, std::polar(1.0, theta / 2);
    return m;
}

/// Control is the first support label.
inline ComplexMatrix CNOT() {
    ComplexMatrix m = ComplexMatrix::Zero(4, 4);
    m(0, 0) = 1;
    m(1, 1) = 1;
    m(2, 3) = 1;
    m(3, 2) = 1;
    return m;
}

inline ComplexMatrix CZ() {
    ComplexMatrix m = ComplexMatrix::Identity(4, 4);
    m(3, 3) = -1;
    return m;
}

inline ComplexMatrix SWAP() {
    ComplexMatrix m = ComplexMatrix::Zero(4, 4);
    m(0, 0) = 1;
    m(1, 2) = 1;
    m(2, 1) = 1;
    m(3, 3) = 1;
    return m;
}

/// |k><k| on a d-level system.
inline ComplexMatrix projector(size_t d, size_t k) {
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    m(k, k) = 1;
    return m;
}

namespace detail {

class ExprParser {
   public:
    explicit ExprParser(std::string_view text) : text_(text) {}

    double parse() {
        double v = sum();
        skip();
        if (pos_ != text_.size()) {
            fail();
        }
        return v;
    }

   private:
    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            pos_++;
        }
    }
    [[noreturn]] void fail() const {
        throw std::invalid_argument("cannot parse numeric expression '" + std::string(text_) + "'");
    }
    double sum() {
        double v = product();
        while (true) {
            skip();
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
                char op = text_[pos_++];
                double rhs = product();
                v = op == '+' ? v + rhs : v - rhs;
            } else {
                return v;
            }
        }
    }
    double product() {
        double v = unary();
        while (true) {
            skip();
            if (pos_ < text_.size() && (text_[pos_] == '*' || text_[pos_] == '/')) {
                char op = text_[pos_++];
                double rhs = unary();
                v = op == '*' ? v * rhs : v / rhs;
            } else {
                return v;
            }
        }
    }
    double unary() {
        skip();
        if (pos_ < text_.size() && text_[pos_] == '-') {
            pos_++;
            return -unary();
        }
        if (pos_ < text_.size() && text_[pos_] == '+') {
            pos_++;
            return unary();
        }
        return atom();
    }
    double atom() {
        skip();
        if (pos_ >= text_.size()) {
            fail();
        }
        if (text_[pos_] == '(') {
            pos_++;
            double v = sum();
            skip();
            if (pos_ >= text_.size() || text_[pos_] != ')') {
                fail();
            }
            pos_++;
            return v;
        }
        if (text_.substr(pos_, 2) == "pi") {
            pos_ += 2;
            return std::numbers::pi;
        }
        size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' || text_[pos_] == 'e' ||
                text_[pos_] == 'E' ||
                ((text_[pos_] == '-' || text_[pos_] == '+') && pos_ > start &&
                 (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E')))) {
            pos_++;
        }
        if (start == pos_) {
            fail();
        }
        std::string token(text_.substr(start, pos_ - start));
        size_t used = 0;
        double v = 0;
        try {
            v = std::stod(token, &used);
        } catch (const std::exception &) {
            fail();
        }
        if (used != token.size()) {
            fail();
        }
        return v;
    }

    std::string_view text_;
    size_t pos_ = 0;
};

}  // namespace detail

/// Evaluates expressions such as "0.7", "pi/2", "-3*pi/4".
inline double parse_real(std::string_view text) {
    return detail::ExprParser(text).parse();
}

/// Matrix for a builtin gate name: I, X, Y, Z, H, S, T, RX(t), RY(t), RZ(t),
/// CNOT, CZ, SWAP. Angles accept "pi" expressions. Returns nullopt for
/// unknown names.
inline std::optional<ComplexMatrix> builtin(std::string_view name) {
    std::string upper;
    for (char c : name) {
        upper += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    if (upper == "I" || upper == "ID") return I2();
    if (upper == "X") return X();
    if (upper == "Y") return Y();
    if (upper == "Z") return Z();
    if (upper == "H") return H();
    if (upper == "S") return S();
    if (upper == "T") return T();
    if (upper == "CNOT" || upper == "CX") return CNOT();
    if (upper == "CZ") return CZ();
    if (upper == "SWAP") return SWAP();
    for (std::string_view prefix : {"RX(", "RY(", "RZ("}) {
        if (upper.starts_with(prefix) && upper.ends_with(")")) {
            std::string_view arg = name.substr(3, name.size() - 4);
            double theta = parse_real(arg);
            switch (upper[1]) {
                case 'X':
                    return RX(theta);
                case 'Y':
                    return RY(theta);
                default:
                    return RZ(theta);
            }
        }
    }
    return std::nullopt;
}

/// Number of qubits a builtin acts on.
inline size_t builtin_arity(const ComplexMatrix &m) {
    return m.rows() == 4 ? 2 : 1;
}

}  // namespace qrf::gates
