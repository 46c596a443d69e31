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

// Acceptance suite. Prints one [PASS]/[FAIL] line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "qrf/compiler.hpp"
#include "qrf/resources.hpp"
#include "qrf/tomography.hpp"
#include "qrf/z2_protocol.hpp"

using namespace qrf;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char *pattern, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

Outcome controlled_form_equivalence() {
    auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(101);
    double worst = 0;
    size_t cases = 0;
    for (auto factors : {std::vector<int>{2}, {3}, {4}, {2, 2}}) {
        auto g = make_group(factors);
        SystemLayout l = g.order() <= 3 ? SystemLayout::uniform({"R1", "O", "N", "R2"}, g.order())
                                        : SystemLayout::uniform({"O", "N", "R"}, g.order());
        FrameChange fc(l, g, "O", "N");
        std::vector<std::string> regs = fc.registers();
        for (int k = 0; k < 120; k++) {
            std::vector<std::string> support{regs[k % regs.size()]};
            if (regs.size() > 1 && k % 3 == 0) {
                support = {regs[1], regs[0]};
            }
            ComplexMatrix u = haar_unitary(l.dim_of(support), rng);
            worst = std::max(worst, verify_gate_transform(fc, u, support));
            cases++;
        }
    }
    double elapsed = seconds_since(start);
    return {worst < 1e-10 && elapsed < 30,
            fmt("%zu unitaries, max residual %.2e, %.2f s", cases, worst, elapsed)};
}

Outcome z2_trichotomy() {
    auto g = make_group({2});
    std::mt19937_64 rng(102);
    std::uniform_real_distribution<double> angle(-2 * std::numbers::pi, 2 * std::numbers::pi);
    bool rx_ok = true;
    for (int k = 0; k < 20; k++) {
        rx_ok &= classify_gate(g, gates::RX(angle(rng))) == GateClass::robust();
    }
    GateClass z = classify_gate(g, gates::Z());
    bool z_ok = z.kind == GateClass::Kind::PhaseSector &&
                std::abs(g.evaluate(*z.character, GroupElement{{1}}) - Complex(-1)) < 1e-12;
    bool hs_ok = classify_gate(g, gates::H()) == GateClass::entangling() &&
                 classify_gate(g, gates::S()) == GateClass::entangling();
    double xhx = (orbit(g, gates::H())[1].second - (gates::X() - gates::Z()) / std::numbers::sqrt2).norm();
    return {rx_ok && z_ok && hs_ok && xhx < 1e-12,
            fmt("RX robust %d, Z phase %d, H/S entangling %d, XHX residual %.1e", rx_ok, z_ok, hs_ok, xhx)};
}

Outcome physical_frame_change_golden() {
    ComplexMatrix golden(4, 4);
    golden << 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 1, 0, 0;
    ComplexMatrix u = z2::physical_frame_map("A").matrix();
    bool exact = z2::restricted_to_physical(u) == golden;
    double invariance = z2::subspace_invariance_residual(u);
    return {exact && invariance < 1e-12, fmt("exact match %d, invariance residual %.1e", exact, invariance)};
}

Outcome operator_identities() {
    auto residuals = z2::operator_identity_suite();
    const std::vector<std::string> required{"H_A_frame_B", "W_BA_CNOT_AB", "CNOT_AB_frame_B", "H_A_frame_A", "CNOT_AB_frame_A"};
    double worst = 0;
    for (const auto &name : required) {
        worst = std::max(worst, residuals.at(name));
    }
    return {worst < 1e-10, fmt("%zu identities, max residual %.1e", required.size(), worst)};
}

Outcome bell_complexity() {
    Circuit bell = z2::bell_circuit();
    FrameChange fc = z2::frame_change_CB();
    ComplexityReport report = overhead_report(bell, fc);
    Circuit compiled = compile_circuit(bell, fc);
    ComplexMatrix expected = fc.dense() * circuit_global_unitary(bell).matrix() * fc.dense().adjoint();
    double err = (circuit_global_unitary(compiled).matrix() - expected).norm();
    bool ok = report.n_ent_old == 1 && report.n_ent_new == 2 && report.saturated && err < 1e-9;
    return {ok, fmt("N_ent C=%zu B=%zu bound=%zu saturated=%d unitary err %.1e", report.n_ent_old, report.n_ent_new,
                    report.bound, report.saturated, err)};
}

Outcome overhead_bound() {
    static const std::vector<std::string> one{"H", "S", "T", "X", "Y", "Z", "RX(0.9)", "RY(0.3)", "RZ(-1.1)"};
    static const std::vector<std::string> two{"CNOT", "CZ", "SWAP"};
    std::mt19937_64 rng(106);
    SystemLayout l = z2::layout();
    size_t violations = 0;
    size_t circuits = 0;
    double worst = 0;
    for (int trial = 0; trial < 600; trial++) {
        std::string target = trial % 2 ? "A" : "B";
        FrameChange fc(l, z2::group(), "C", target);
        Circuit c(l, "C");
        size_t length = 1 + std::uniform_int_distribution<size_t>(0, 5)(rng);
        for (size_t k = 0; k < length; k++) {
            std::vector<std::string> free{"A", "B"};
            std::shuffle(free.begin(), free.end(), rng);
            if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) {
                c.add(two[std::uniform_int_distribution<size_t>(0, two.size() - 1)(rng)], free);
            } else {
                c.add(one[std::uniform_int_distribution<size_t>(0, one.size() - 1)(rng)], {free[0]});
            }
        }
        try {
            ComplexityReport report = overhead_report(c, fc);
            violations += report.n_ent_new > report.bound;
        } catch (const InvariantViolation &) {
            violations++;
        }
        ComplexMatrix expected = fc.dense() * circuit_global_unitary(c).matrix() * fc.dense().adjoint();
        worst = std::max(worst, (circuit_global_unitary(compile_circuit(c, fc)).matrix() - expected).norm());
        circuits++;
    }
    return {violations == 0 && circuits >= 500 && worst < 1e-9,
            fmt("%zu circuits, %zu violations, max compile error %.1e", circuits, violations, worst)};
}

Outcome complementarity() {
    std::mt19937_64 rng(107);
    double worst = 0;
    double worst_total = 0;
    for (int k = 0; k < 10000; k++) {
        ComplementarityCheck c = complementarity_check(PureState(haar_state(4, rng)));
        worst = std::max(worst, c.residual);
        worst_total = std::max(worst_total, c.residual_total);
    }
    bool spot = true;
    std::ostringstream spots;
    for (auto [p, expected] : std::vector<std::pair<double, double>>{{0, 0}, {0.25, 0.75}, {0.5, 1}}) {
        ComplexVector v = ComplexVector::Zero(4);
        v(0) = std::sqrt(p);
        v(3) = std::sqrt(1 - p);
        double c2 = concurrence2_pure(PureState(v));
        spot &= std::abs(c2 - expected) < 1e-12 && std::abs(c2 - 4 * p * (1 - p)) < 1e-12;
        spots << " " << c2;
    }
    return {worst < 1e-10 && worst_total < 1e-10 && spot,
            fmt("max residuals %.1e / %.1e, spot C2:", worst, worst_total) + spots.str()};
}

Outcome protocol_exact() {
    auto start = std::chrono::steady_clock::now();
    z2::ProtocolResult r = z2::run_protocol(0, z2::NoiseModel{}, 1);
    double elapsed = seconds_since(start);
    const auto &a = r.frame_a.report;
    const auto &b = r.frame_b.report;
    double worst = std::max({std::abs(a.d2_purity - 1), std::abs(a.c2), std::abs(b.d2_purity), std::abs(b.c2 - 1),
                             std::abs(r.invariant_delta)});
    return {worst < 1e-10 && elapsed < 1,
            fmt("A D2=%.3f C2=%.3f, B D2=%.3f C2=%.3f, delta %.1e, %.3f s", a.d2_purity, a.c2, b.d2_purity, b.c2,
                r.invariant_delta, elapsed)};
}

struct SampledMeans {
    double a_d2 = 0;
    double b_c2 = 0;
    double b_d2 = 0;
    double b_total = 0;
};

SampledMeans sampled_means(const z2::NoiseModel &noise, int repetitions) {
    SampledMeans m;
    for (int seed = 1; seed <= repetitions; seed++) {
        z2::ProtocolResult r = z2::run_protocol(1000, noise, static_cast<uint64_t>(seed));
        m.a_d2 += r.frame_a.report.d2_purity / repetitions;
        m.b_c2 += r.frame_b.report.c2 / repetitions;
        m.b_d2 += r.frame_b.report.d2_purity / repetitions;
        m.b_total += r.frame_b.report.total() / repetitions;
    }
    return m;
}

Outcome protocol_sampled() {
    const int reps = 30;
    SampledMeans m = sampled_means(z2::NoiseModel{}, reps);
    bool ok = m.a_d2 >= 0.97 && m.a_d2 <= 1.0 && m.b_c2 >= 0.95 && m.b_c2 <= 1.0;
    return {ok, fmt("%d seeds x 1000 shots: mean A D2=%.4f, mean B C2=%.4f", reps, m.a_d2, m.b_c2)};
}

Outcome noisy_inversion() {
    bool ok = true;
    std::ostringstream detail;
    for (double p : {0.01, 0.03, 0.05}) {
        z2::NoiseModel noise;
        noise.two_qubit_depolarizing_prob = p;
        z2::ProtocolResult exact = z2::run_protocol(0, noise, 1);
        const auto &b = exact.frame_b.report;
        bool exact_ok = b.c2 > 0.5 && b.d2_purity < 0.05 && b.total() < 1;
        SampledMeans m = sampled_means(noise, 30);
        bool sampled_ok = m.b_c2 > 0.5 && m.b_d2 < 0.05 && m.b_total < 1;
        ok &= exact_ok && sampled_ok;
        detail << fmt("p=%.2f exact C2=%.3f D2=%.3f sum=%.3f, mean C2=%.3f D2=%.3f sum=%.3f; ", p, b.c2, b.d2_purity,
                      b.total(), m.b_c2, m.b_d2, m.b_total);
    }
    return {ok, detail.str()};
}

Outcome lambda_sweep_conservation() {
    std::vector<double> grid;
    for (int k = 0; k < 33; k++) {
        grid.push_back(std::numbers::pi / 2 * k / 32.0);
    }
    z2::SweepResult r = z2::lambda_sweep(grid);
    bool three = true;
    for (const auto &point : r.points) {
        three &= point.accepted && point.reports.size() == 3;
    }
    return {three && r.points.size() == 33 && r.max_residual < 1e-9,
            fmt("%zu points x 3 frames, max |C2+D2-1| %.1e", r.points.size(), r.max_residual)};
}

Outcome tomography() {
    std::mt19937_64 rng(112);
    double worst = 0;
    for (int k = 0; k < 5; k++) {
        ComplexMatrix m = ComplexMatrix::Zero(8, 8);
        for (int j = 0; j < 3; j++) {
            ComplexVector v = haar_state(8, rng);
            m += v * v.adjoint() / 3.0;
        }
        DensityMatrix rho(m);
        worst = std::max(worst, (reconstruct_state(exact_frequencies(rho)).rho.matrix() - m).norm());
        PureState psi(haar_state(8, rng));
        DensityMatrix pure = DensityMatrix::from(psi);
        worst = std::max(worst, (reconstruct_state(exact_frequencies(pure)).rho.matrix() - pure.matrix()).norm());
    }
    PureState psi(haar_state(8, rng));
    DensityMatrix estimate = tomography_reconstruct(sample_records(DensityMatrix::from(psi), 100000, rng));
    double f = fidelity(psi, estimate);
    return {worst < 1e-10 && f > 0.99, fmt("exact max error %.1e, 1e5-shot fidelity %.4f", worst, f)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"controlled-form equivalence over Z2, Z3, Z4, Z2xZ2", controlled_form_equivalence},
        {"Z2 gate trichotomy", z2_trichotomy},
        {"physical-subspace frame change golden matrix", physical_frame_change_golden},
        {"Z2 operator identities", operator_identities},
        {"Bell circuit entangling cost in frame B", bell_complexity},
        {"entangling overhead bound on random circuits", overhead_bound},
        {"two-qubit complementarity", complementarity},
        {"protocol exact mode", protocol_exact},
        {"protocol sampled mode", protocol_sampled},
        {"resource inversion under depolarizing noise", noisy_inversion},
        {"lambda sweep conservation", lambda_sweep_conservation},
        {"tomography reconstruction", tomography},
    };
    int failed = 0;
    for (size_t k = 0; k < criteria.size(); k++) {
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << k + 1 << ". " << criteria[k].first << ": " << o.detail << std::endl;
    }
    std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
