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

// Pauli-basis state tomography for n qubits: 3^n measurement settings,
// linear inversion over the 4^n Pauli expectations, then projection onto the
// nearest (Frobenius) density matrix.
//
// Outcome strings list qubit 0 first, matching the layout ordering.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrf/gates.hpp"
#include "qrf/linalg.hpp"

namespace qrf {

struct MeasurementRecord {
    std::string basis;                       // one of X, Y, Z per qubit
    std::map<std::string, uint64_t> counts;  // outcome bitstring -> count
    uint64_t shots = 0;
};

/// Outcome distribution for one basis, either sampled or exact.
struct BasisFrequencies {
    std::string basis;
    std::vector<double> probabilities;  // indexed by outcome, qubit 0 most significant
};

namespace detail {

inline size_t qubit_count(size_t dim) {
    size_t n = 0;
    while ((size_t{1} << n) < dim) {
        n++;
    }
    if ((size_t{1} << n) != dim || n == 0) {
        throw std::invalid_argument("tomography needs a multi-qubit state, got dimension " + std::to_string(dim));
    }
    return n;
}

inline ComplexMatrix basis_rotation(char axis) {
    switch (axis) {
        case 'X':
            return gates::H();
        case 'Y':
            return gates::H() * gates::S().adjoint();
        case 'Z':
            return gates::I2();
        default:
            throw std::invalid_argument(std::string("unknown measurement axis '") + axis + "'");
    }
}

inline std::string bitstring(size_t outcome, size_t n) {
    std::string s(n, '0');
    for (size_t q = 0; q < n; q++) {
        if ((outcome >> (n - 1 - q)) & 1) {
            s[q] = '1';
        }
    }
    return s;
}

inline ComplexMatrix pauli(char p) {
    switch (p) {
        case 'I':
            return gates::I2();
        case 'X':
            return gates::X();
        case 'Y':
            return gates::Y();
        default:
            return gates::Z();
    }
}

}  // namespace detail

/// All 3^n settings in lexicographic X < Y < Z order.
inline std::vector<std::string> tomography_bases(size_t n) {
    std::vector<std::string> result{""};
    for (size_t q = 0; q < n; q++) {
        std::vector<std::string> next;
        for (const auto &prefix : result) {
            for (char axis : {'X', 'Y', 'Z'}) {
                next.push_back(prefix + axis);
            }
        }
        result = std::move(next);
    }
    return result;
}

inline std::vector<double> born_probabilities(const DensityMatrix &rho, const std::string &basis) {
    size_t n = detail::qubit_count(rho.dim());
    if (basis.size() != n) {
        throw std::invalid_argument("basis '" + basis + "' does not match " + std::to_string(n) + " qubits");
    }
    ComplexMatrix rotation = ComplexMatrix::Identity(1, 1);
    for (char axis : basis) {
        rotation = kron(rotation, detail::basis_rotation(axis));
    }
    ComplexMatrix rotated = rotation * rho.matrix() * rotation.adjoint();
    std::vector<double> probs(rho.dim());
    for (size_t k = 0; k < rho.dim(); k++) {
        probs[k] = std::max(0.0, rotated(k, k).real());
    }
    return probs;
}

/// Independent bit flips with probability p on every readout bit.
inline std::vector<double> apply_readout_flips(const std::vector<double> &probs, double p) {
    if (p < 0 || p > 1) {
        throw std::invalid_argument("readout flip probability must be in [0, 1]");
    }
    size_t n = detail::qubit_count(probs.size());
    std::vector<double> current = probs;
    for (size_t q = 0; q < n; q++) {
        size_t mask = size_t{1} << q;
        std::vector<double> next(current.size());
        for (size_t k = 0; k < current.size(); k++) {
            next[k] = (1 - p) * current[k] + p * current[k ^ mask];
        }
        current = std::move(next);
    }
    return current;
}

template <typename Rng>
MeasurementRecord sample_record(const std::string &basis, const std::vector<double> &probs, uint64_t shots, Rng &rng) {
    if (shots == 0) {
        throw std::invalid_argument("sampling needs at least one shot");
    }
    size_t n = detail::qubit_count(probs.size());
    std::discrete_distribution<size_t> dist(probs.begin(), probs.end());
    std::vector<uint64_t> tally(probs.size(), 0);
    for (uint64_t s = 0; s < shots; s++) {
        tally[dist(rng)]++;
    }
    MeasurementRecord record{basis, {}, shots};
    for (size_t k = 0; k < tally.size(); k++) {
        if (tally[k] > 0) {
            record.counts[detail::bitstring(k, n)] = tally[k];
        }
    }
    return record;
}

/// Sampled records for every setting.
template <typename Rng>
std::vector<MeasurementRecord> sample_records(const DensityMatrix &rho, uint64_t shots, Rng &rng, double readout_flip = 0) {
    size_t n = detail::qubit_count(rho.dim());
    std::vector<MeasurementRecord> records;
    for (const auto &basis : tomography_bases(n)) {
        records.push_back(sample_record(basis, apply_readout_flips(born_probabilities(rho, basis), readout_flip), shots, rng));
    }
    return records;
}

/// Exact outcome distributions for every setting.
inline std::vector<BasisFrequencies> exact_frequencies(const DensityMatrix &rho, double readout_flip = 0) {
    size_t n = detail::qubit_count(rho.dim());
    std::vector<BasisFrequencies> result;
    for (const auto &basis : tomography_bases(n)) {
        result.push_back({basis, apply_readout_flips(born_probabilities(rho, basis), readout_flip)});
    }
    return result;
}

inline std::vector<BasisFrequencies> frequencies_from_records(const std::vector<MeasurementRecord> &records) {
    if (records.empty()) {
        throw std::invalid_argument("no measurement records");
    }
    size_t n = records.front().basis.size();
    uint64_t shots = records.front().shots;
    std::vector<BasisFrequencies> result;
    for (const auto &record : records) {
        if (record.basis.size() != n) {
            throw std::invalid_argument("records disagree on the number of qubits");
        }
        if (record.shots == 0) {
            throw std::invalid_argument("record for basis '" + record.basis + "' has zero shots");
        }
        if (record.shots != shots) {
            throw std::invalid_argument("records must share one shot count");
        }
        std::vector<double> freq(size_t{1} << n, 0.0);
        uint64_t total = 0;
        for (const auto &[outcome, count] : record.counts) {
            if (outcome.size() != n || outcome.find_first_not_of("01") != std::string::npos) {
                throw std::invalid_argument("malformed outcome '" + outcome + "'");
            }
            freq[std::stoull(outcome, nullptr, 2)] += static_cast<double>(count);
            total += count;
        }
        if (total != record.shots) {
            throw std::invalid_argument("counts for basis '" + record.basis + "' do not sum to the shot count");
        }
        for (double &f : freq) {
            f /= static_cast<double>(record.shots);
        }
        result.push_back({record.basis, std::move(freq)});
    }
    return result;
}

/// Euclidean projection of a real vector onto the probability simplex.
inline Eigen::VectorXd project_to_simplex(const Eigen::VectorXd &v) {
    std::vector<double> sorted(v.data(), v.data() + v.size());
    std::sort(sorted.rbegin(), sorted.rend());
    double cumulative = 0;
    double theta = 0;
    for (size_t k = 0; k < sorted.size(); k++) {
        cumulative += sorted[k];
        double candidate = (cumulative - 1) / static_cast<double>(k + 1);
        if (sorted[k] - candidate > 0) {
            theta = candidate;
        }
    }
    return (v.array() - theta).cwiseMax(0.0);
}

struct TomographyResult {
    DensityMatrix rho;
    ComplexMatrix linear;           // raw linear-inversion estimate
    double min_raw_eigenvalue = 0;  // of the linear estimate
    bool projected = false;         // the estimate left the PSD cone
};

inline TomographyResult reconstruct_state(const std::vector<BasisFrequencies> &data) {
    if (data.empty()) {
        throw std::invalid_argument("no measurement data");
    }
    size_t n = data.front().basis.size();
    std::map<std::string, const BasisFrequencies *> by_basis;
    for (const auto &entry : data) {
        if (entry.probabilities.size() != (size_t{1} << n) || entry.basis.size() != n) {
            throw std::invalid_argument("inconsistent data for basis '" + entry.basis + "'");
        }
        by_basis[entry.basis] = &entry;
    }
    for (const auto &basis : tomography_bases(n)) {
        if (!by_basis.count(basis)) {
            throw std::invalid_argument("missing measurement basis '" + basis + "'");
        }
    }

    size_t dim = size_t{1} << n;
    ComplexMatrix linear = ComplexMatrix::Zero(dim, dim);
    std::vector<std::string> paulis{""};
    for (size_t q = 0; q < n; q++) {
        std::vector<std::string> next;
        for (const auto &prefix : paulis) {
            for (char p : {'I', 'X', 'Y', 'Z'}) {
                next.push_back(prefix + p);
            }
        }
        paulis = std::move(next);
    }
    for (const auto &pauli : paulis) {
        // Average over every setting that measures each non-identity factor.
        double sum = 0;
        size_t settings = 0;
        for (const auto &[basis, entry] : by_basis) {
            bool compatible = true;
            for (size_t q = 0; q < n; q++) {
                if (pauli[q] != 'I' && pauli[q] != basis[q]) {
                    compatible = false;
                }
            }
            if (!compatible) {
                continue;
            }
            double expectation = 0;
            for (size_t k = 0; k < dim; k++) {
                int parity = 0;
                for (size_t q = 0; q < n; q++) {
                    if (pauli[q] != 'I') {
                        parity ^= static_cast<int>((k >> (n - 1 - q)) & 1);
                    }
                }
                expectation += parity ? -entry->probabilities[k] : entry->probabilities[k];
            }
            sum += expectation;
            settings++;
        }
        ComplexMatrix op = ComplexMatrix::Identity(1, 1);
        for (char p : pauli) {
            op = kron(op, detail::pauli(p));
        }
        linear += (sum / static_cast<double>(settings)) * op;
    }
    linear /= static_cast<double>(dim);
    linear = (linear + linear.adjoint()).eval() * 0.5;

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(linear);
    Eigen::VectorXd values = solver.eigenvalues();
    double min_raw = values.minCoeff();
    Eigen::VectorXd projected = project_to_simplex(values);
    ComplexMatrix rho = solver.eigenvectors() * projected.asDiagonal() * solver.eigenvectors().adjoint();
    return TomographyResult{DensityMatrix(rho), linear, min_raw, min_raw < -kPsdTolerance};
}

/// Iterative maximum-likelihood estimate (the R rho R fixed-point map),
/// started from the maximally mixed state.
inline ComplexMatrix maximum_likelihood(const std::vector<BasisFrequencies> &data, size_t max_iterations = 2000, double tol = 1e-12) {
    size_t n = data.front().basis.size();
    size_t dim = size_t{1} << n;
    std::vector<std::pair<ComplexVector, double>> effects;
    for (const auto &entry : data) {
        ComplexMatrix rotation = ComplexMatrix::Identity(1, 1);
        for (char axis : entry.basis) {
            rotation = kron(rotation, detail::basis_rotation(axis));
        }
        for (size_t k = 0; k < dim; k++) {
            if (entry.probabilities[k] > 0) {
                effects.emplace_back(rotation.adjoint().col(static_cast<Eigen::Index>(k)), entry.probabilities[k]);
            }
        }
    }
    ComplexMatrix rho = ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim);
    for (size_t it = 0; it < max_iterations; it++) {
        ComplexMatrix r = ComplexMatrix::Zero(dim, dim);
        for (const auto &[e, f] : effects) {
            double p = (e.adjoint() * rho * e)(0, 0).real();
            if (p > 1e-300) {
                r += (f / p) * (e * e.adjoint());
            }
        }
        ComplexMatrix next = r * rho * r;
        next /= next.trace().real();
        next = (next + next.adjoint()).eval() * 0.5;
        double change = (next - rho).norm();
        rho = std::move(next);
        if (change < tol) {
            break;
        }
    }
    return rho;
}

enum class Estimator { LinearProjected, MaximumLikelihood };

inline TomographyResult reconstruct_state(const std::vector<BasisFrequencies> &data, Estimator estimator) {
    TomographyResult linear = reconstruct_state(data);
    if (estimator == Estimator::LinearProjected) {
        return linear;
    }
    linear.rho = DensityMatrix(maximum_likelihood(data));
    return linear;
}

inline DensityMatrix tomography_reconstruct(const std::vector<MeasurementRecord> &records) {
    return reconstruct_state(frequencies_from_records(records)).rho;
}

/// <psi| rho |psi>
inline double fidelity(const PureState &psi, const DensityMatrix &rho) {
    if (psi.dim() != rho.dim()) {
        throw std::invalid_argument("fidelity: dimension mismatch");
    }
    return (psi.amplitudes().adjoint() * rho.matrix() * psi.amplitudes())(0, 0).real();
}

}  // namespace qrf
