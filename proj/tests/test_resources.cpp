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

#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qrf/resources.hpp"
#include "qrf/tomography.hpp"

using namespace qrf;

namespace {

ComplexVector bell_phi_plus() {
    ComplexVector v = ComplexVector::Zero(4);
    v(0) = v(3) = 1 / std::sqrt(2.0);
    return v;
}

DensityMatrix werner(double w) {
    ComplexVector phi = bell_phi_plus();
    return DensityMatrix(w * phi * phi.adjoint() + (1 - w) * ComplexMatrix::Identity(4, 4) / 4.0);
}

DensityMatrix random_mixed(size_t dim, size_t rank, std::mt19937_64 &rng) {
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    std::uniform_real_distribution<double> weight(0.1, 1.0);
    double total = 0;
    for (size_t k = 0; k < rank; k++) {
        ComplexVector v = haar_state(dim, rng);
        double w = weight(rng);
        m += w * v * v.adjoint();
        total += w;
    }
    return DensityMatrix(m / total);
}

}  // namespace

TEST(resources, single_qubit_quantities) {
    ComplexVector plus = ComplexVector::Constant(2, 1 / std::sqrt(2.0));
    DensityMatrix rho_plus = DensityMatrix::from(PureState(plus));
    EXPECT_NEAR(d2_coherence(rho_plus), 1.0, 1e-14);
    EXPECT_NEAR(p2_predictability(rho_plus), 0.0, 1e-14);
    EXPECT_NEAR(bloch(rho_plus).r_x, 1.0, 1e-14);

    DensityMatrix zero(gates::projector(2, 0));
    EXPECT_NEAR(d2_coherence(zero), 0.0, 1e-14);
    EXPECT_NEAR(p2_predictability(zero), 1.0, 1e-14);
    EXPECT_NEAR(bloch(zero).r_z, 1.0, 1e-14);

    DensityMatrix mixed(ComplexMatrix::Identity(2, 2) / 2.0);
    EXPECT_NEAR(d2_purity_coherence(mixed), 0.0, 1e-14);
    EXPECT_NEAR(bloch(mixed).norm(), 0.0, 1e-14);
    EXPECT_THROW(d2_coherence(werner(0.5)), std::invalid_argument);
}

TEST(resources, purity_coherence_splits_into_parts) {
    std::mt19937_64 rng(41);
    for (int k = 0; k < 20; k++) {
        DensityMatrix rho = random_mixed(2, 2, rng);
        EXPECT_NEAR(d2_coherence(rho) + p2_predictability(rho), d2_purity_coherence(rho), 1e-12);
        BlochVector r = bloch(rho);
        EXPECT_NEAR(r.norm() * r.norm(), d2_purity_coherence(rho), 1e-12);
    }
}

TEST(resources, werner_concurrence_matches_oracle) {
    for (double w = 0; w <= 1.0001; w += 0.05) {
        double c = oracle::werner_concurrence(std::min(w, 1.0));
        EXPECT_NEAR(concurrence2_mixed(werner(std::min(w, 1.0))), c * c, 1e-9) << "w=" << w;
    }
}

TEST(resources, mixed_concurrence_matches_eigenvalue_oracle) {
    std::mt19937_64 rng(42);
    for (size_t rank : {1, 2, 3, 4}) {
        for (int k = 0; k < 10; k++) {
            DensityMatrix rho = random_mixed(4, rank, rng);
            // The oracle takes square roots of eigenvalues that vanish for
            // rank-deficient states, so it is only good to about sqrt(eps).
            EXPECT_NEAR(concurrence2_mixed(rho), oracle::concurrence2(rho.matrix()), 1e-7);
        }
    }
}

TEST(resources, pure_and_mixed_concurrence_agree) {
    std::mt19937_64 rng(43);
    for (int k = 0; k < 30; k++) {
        PureState psi(haar_state(4, rng));
        EXPECT_NEAR(concurrence2_pure(psi), concurrence2_mixed(DensityMatrix::from(psi)), 1e-9);
    }
    EXPECT_NEAR(concurrence2_pure(PureState(bell_phi_plus())), 1.0, 1e-14);
    EXPECT_THROW(concurrence2_pure(PureState(haar_state(8, rng))), std::invalid_argument);
}

TEST(resources, concurrence_is_local_unitary_invariant) {
    std::mt19937_64 rng(44);
    for (int k = 0; k < 10; k++) {
        DensityMatrix rho = random_mixed(4, 2, rng);
        ComplexMatrix u = kron(haar_unitary(2, rng), haar_unitary(2, rng));
        DensityMatrix rotated(u * rho.matrix() * u.adjoint());
        EXPECT_NEAR(concurrence2_mixed(rho), concurrence2_mixed(rotated), 1e-9);
    }
}

TEST(resources, schmidt_reconstructs_state) {
    std::mt19937_64 rng(45);
    SystemLayout l({"A", "B", "C"}, {2, 3, 2});
    for (auto first : std::vector<std::vector<std::string>>{{"A"}, {"B"}, {"C", "A"}}) {
        PureState psi(haar_state(12, rng));
        SchmidtDecomposition s = schmidt(l, psi, first);
        double norm = 0;
        for (size_t k = 0; k < s.coefficients.size(); k++) {
            norm += s.coefficients[k] * s.coefficients[k];
            if (k) {
                EXPECT_LE(s.coefficients[k], s.coefficients[k - 1]);
            }
        }
        EXPECT_NEAR(norm, 1.0, 1e-12);
        std::vector<std::string> order = first;
        for (const auto &label : l.complement(first)) {
            order.push_back(label);
        }
        EXPECT_LT((s.reconstruct() - permute_state(l, psi.amplitudes(), order)).norm(), 1e-12);
    }
    EXPECT_THROW(schmidt(l, PureState(haar_state(12, rng)), {}), std::invalid_argument);
}

TEST(resources, schmidt_of_product_and_bell) {
    SystemLayout l = SystemLayout::uniform({"A", "B"}, 2);
    SchmidtDecomposition bell = schmidt(l, PureState(bell_phi_plus()), {"A"});
    EXPECT_NEAR(bell.coefficients[0], 1 / std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(bell.coefficients[1], 1 / std::sqrt(2.0), 1e-14);
    ComplexVector prod = ComplexVector::Zero(4);
    prod(2) = 1;
    EXPECT_NEAR(schmidt(l, PureState(prod), {"B"}).coefficients[1], 0.0, 1e-14);
}

TEST(resources, complementarity_for_pure_states) {
    std::mt19937_64 rng(46);
    for (int k = 0; k < 50; k++) {
        ComplementarityCheck c = complementarity_check(PureState(haar_state(4, rng)));
        EXPECT_LT(c.residual, 1e-10);
        EXPECT_LT(c.residual_total, 1e-10);
    }
    ComplementarityCheck bell = complementarity_check(PureState(bell_phi_plus()));
    EXPECT_NEAR(bell.c2, 1.0, 1e-14);
    EXPECT_NEAR(bell.d2, 0.0, 1e-14);
    EXPECT_NEAR(bell.p2, 0.0, 1e-14);
}

TEST(resources, resource_report_fields) {
    SystemLayout l = SystemLayout::uniform({"A", "B", "C"}, 2);
    // |Phi+>_AB |+>_C
    ComplexVector plus = ComplexVector::Constant(2, 1 / std::sqrt(2.0));
    PureState psi(kron(bell_phi_plus(), plus));
    ResourceReport r = resource_report(l, DensityMatrix::from(psi), "X", {"A", "B"}, "C");
    EXPECT_NEAR(r.c2, 1.0, 1e-9);
    EXPECT_NEAR(r.d2, 1.0, 1e-12);
    EXPECT_NEAR(r.p2, 0.0, 1e-12);
    EXPECT_NEAR(r.d2_purity, 1.0, 1e-12);
    EXPECT_NEAR(r.total(), 2.0, 1e-9);
    EXPECT_EQ(csv_header(), "frame,C2,D2,P2,D2_purity,sum");
    EXPECT_EQ(csv_row(r).substr(0, 2), "X,");
    nlohmann::json j = to_json(r);
    EXPECT_EQ(j["frame"], "X");
    EXPECT_NEAR(j["C2"].get<double>(), 1.0, 1e-9);
}

TEST(tomography, bases_and_probabilities) {
    auto bases = tomography_bases(2);
    EXPECT_EQ(bases.size(), 9u);
    EXPECT_EQ(bases.front(), "XX");
    DensityMatrix bell = DensityMatrix::from(PureState(bell_phi_plus()));
    auto zz = born_probabilities(bell, "ZZ");
    EXPECT_NEAR(zz[0], 0.5, 1e-14);
    EXPECT_NEAR(zz[3], 0.5, 1e-14);
    auto xx = born_probabilities(bell, "XX");
    EXPECT_NEAR(xx[0] + xx[3], 1.0, 1e-14);
    auto yy = born_probabilities(bell, "YY");
    EXPECT_NEAR(yy[1] + yy[2], 1.0, 1e-14);
    EXPECT_THROW(born_probabilities(bell, "Z"), std::invalid_argument);
}

TEST(tomography, readout_flips) {
    auto flipped = apply_readout_flips({1, 0, 0, 0}, 0.1);
    EXPECT_NEAR(flipped[0], 0.81, 1e-14);
    EXPECT_NEAR(flipped[1], 0.09, 1e-14);
    EXPECT_NEAR(flipped[2], 0.09, 1e-14);
    EXPECT_NEAR(flipped[3], 0.01, 1e-14);
    EXPECT_THROW(apply_readout_flips({1, 0}, 1.5), std::invalid_argument);
}

TEST(tomography, exact_data_reconstructs_exactly) {
    std::mt19937_64 rng(47);
    for (size_t n : {1, 2, 3}) {
        DensityMatrix rho = random_mixed(size_t{1} << n, 2, rng);
        TomographyResult lin = reconstruct_state(exact_frequencies(rho));
        EXPECT_LT((lin.rho.matrix() - rho.matrix()).norm(), 1e-10) << n;
        EXPECT_FALSE(lin.projected);
    }
}

TEST(tomography, sampled_bell_state) {
    std::mt19937_64 rng(48);
    PureState bell(bell_phi_plus());
    auto records = sample_records(DensityMatrix::from(bell), 100000, rng);
    DensityMatrix rho = tomography_reconstruct(records);
    EXPECT_GT(fidelity(bell, rho), 0.99);
    auto data = frequencies_from_records(records);
    EXPECT_GT(fidelity(bell, reconstruct_state(data, Estimator::MaximumLikelihood).rho), 0.99);
}

TEST(tomography, adversarial_data_is_projected) {
    // Perfect Z correlations with perfect X and Y anti-correlations: the
    // linear estimate has a negative eigenvalue.
    std::vector<BasisFrequencies> data;
    for (const auto &basis : tomography_bases(2)) {
        std::vector<double> p(4, 0.25);
        if (basis == "ZZ") {
            p = {0.5, 0, 0, 0.5};
        } else if (basis == "XX" || basis == "YY") {
            p = {0, 0.5, 0.5, 0};
        }
        data.push_back({basis, p});
    }
    TomographyResult r = reconstruct_state(data);
    EXPECT_TRUE(r.projected);
    EXPECT_LT(r.min_raw_eigenvalue, -0.1);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(r.rho.matrix());
    EXPECT_GE(solver.eigenvalues().minCoeff(), -1e-12);
    EXPECT_NEAR(r.rho.matrix().trace().real(), 1.0, 1e-12);
}

TEST(tomography, simplex_projection) {
    Eigen::VectorXd v(4);
    v << 0.6, 0.5, 0.1, -0.2;
    Eigen::VectorXd p = project_to_simplex(v);
    EXPECT_NEAR(p.sum(), 1.0, 1e-14);
    EXPECT_GE(p.minCoeff(), 0.0);
    EXPECT_NEAR(p(0) - p(1), 0.1, 1e-14);
    Eigen::VectorXd already(2);
    already << 0.3, 0.7;
    EXPECT_LT((project_to_simplex(already) - already).norm(), 1e-15);
}

TEST(tomography, record_validation) {
    MeasurementRecord ok{"Z", {{"0", 3}, {"1", 1}}, 4};
    EXPECT_NO_THROW(frequencies_from_records({ok}));
    EXPECT_THROW(frequencies_from_records({}), std::invalid_argument);
    EXPECT_THROW(frequencies_from_records({MeasurementRecord{"Z", {{"0", 3}}, 4}}), std::invalid_argument);
    EXPECT_THROW(frequencies_from_records({MeasurementRecord{"Z", {}, 0}}), std::invalid_argument);
    EXPECT_THROW(frequencies_from_records({ok, MeasurementRecord{"X", {{"0", 5}}, 5}}), std::invalid_argument);
    EXPECT_THROW(frequencies_from_records({MeasurementRecord{"Z", {{"2", 4}}, 4}}), std::invalid_argument);
    // Only Z measured: the X and Y settings are missing.
    EXPECT_THROW(tomography_reconstruct({ok}), std::invalid_argument);
}
