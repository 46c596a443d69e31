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

// The `qrf` command line. run_cli is the whole program; main only forwards
// argv and the standard streams so tests can drive it in-process.
//
// Exit codes: 0 success, 1 a check failed (verify, or a warning under
// --strict), 2 user error, 3 internal invariant breach.

#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qrf/compiler.hpp"
#include "qrf/json_io.hpp"
#include "qrf/resources.hpp"
#include "qrf/tomography.hpp"
#include "qrf/transform.hpp"
#include "qrf/z2_protocol.hpp"

namespace qrf::cli {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUserError = 2;
constexpr int kExitInternal = 3;

/// "start:stop:count", e.g. "0:pi/2:33"; endpoints included.
inline std::vector<double> parse_grid(const std::string &spec) {
    std::vector<std::string> parts;
    std::stringstream in(spec);
    std::string item;
    while (std::getline(in, item, ':')) {
        parts.push_back(item);
    }
    if (parts.size() != 3) {
        throw std::invalid_argument("grid must look like start:stop:count, got '" + spec + "'");
    }
    double start = gates::parse_real(parts[0]);
    double stop = gates::parse_real(parts[1]);
    double count_real = gates::parse_real(parts[2]);
    if (count_real < 1 || count_real != std::floor(count_real)) {
        throw std::invalid_argument("grid count must be a positive integer");
    }
    size_t count = static_cast<size_t>(count_real);
    std::vector<double> grid;
    for (size_t k = 0; k < count; k++) {
        grid.push_back(count == 1 ? start : start + (stop - start) * static_cast<double>(k) / static_cast<double>(count - 1));
    }
    return grid;
}

/// A builtin gate name, inline matrix JSON, or a path to a matrix JSON file.
inline std::pair<std::string, ComplexMatrix> parse_gate_spec(const std::string &spec) {
    auto from_json_text = [](const std::string &text) {
        try {
            return matrix_from_json(json::parse(text));
        } catch (const json::exception &e) {
            throw std::invalid_argument(std::string("malformed matrix JSON: ") + e.what());
        }
    };
    if (!spec.empty() && spec.front() == '{') {
        return {"matrix", from_json_text(spec)};
    }
    if (auto m = gates::builtin(spec)) {
        return {spec, *m};
    }
    if (std::filesystem::is_regular_file(spec)) {
        std::ifstream file(spec);
        std::stringstream buffer;
        buffer << file.rdbuf();
        return {spec, from_json_text(buffer.str())};
    }
    throw std::invalid_argument("unknown gate '" + spec + "'");
}

inline std::vector<std::string> split_labels(const std::string &text) {
    std::vector<std::string> labels;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) {
            labels.push_back(item);
        }
    }
    return labels;
}

inline json read_json_file(const std::string &path) {
    std::ifstream file(path);
    if (!file) {
        throw std::invalid_argument("cannot open '" + path + "'");
    }
    try {
        return json::parse(file);
    } catch (const json::exception &e) {
        throw std::invalid_argument("malformed JSON in '" + path + "': " + e.what());
    }
}

inline void write_output(const std::string &text, const std::string &path, std::ostream &out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path);
    if (!file) {
        throw std::invalid_argument("cannot write '" + path + "'");
    }
    file << text;
}

inline size_t distinct_orbit_size(const FiniteAbelianGroup &group, const ComplexMatrix &op) {
    std::vector<ComplexMatrix> distinct;
    for (const auto &[g, image] : orbit(group, op)) {
        bool seen = false;
        for (const auto &d : distinct) {
            if ((d - image).norm() <= kClassifyTolerance * op.norm()) {
                seen = true;
            }
        }
        if (!seen) {
            distinct.push_back(image);
        }
    }
    return distinct.size();
}

struct Check {
    std::string name;
    double residual = 0;
    double threshold = 0;
    bool pass = false;
};

/// The invariant battery behind `qrf verify`.
inline std::vector<Check> verification_battery(uint64_t seed) {
    std::vector<Check> checks;
    auto add = [&](std::string name, double residual, double threshold) {
        checks.push_back({std::move(name), residual, threshold, residual < threshold});
    };
    std::mt19937_64 rng(seed);

    for (const auto &[name, residual] : z2::operator_identity_suite()) {
        add("identity/" + name, residual, 1e-10);
    }

    ComplexMatrix golden = ComplexMatrix::Zero(4, 4);
    golden(0, 0) = 1;
    golden(1, 2) = 1;
    golden(2, 3) = 1;
    golden(3, 1) = 1;
    Unitary u_ca = z2::parity_preserving_frame_change(z2::frame_change_CA());
    Unitary u_cb = z2::parity_preserving_frame_change(z2::frame_change_CB());
    add("golden/restricted_U_CA", (z2::restricted_to_physical(u_ca.matrix()) - golden).norm(), 1e-15);
    add("subspace/U_CA", z2::subspace_invariance_residual(u_ca.matrix()), 1e-12);
    add("subspace/U_CB", z2::subspace_invariance_residual(u_cb.matrix()), 1e-12);

    for (const std::string factors : {"2", "3", "4", "2,2"}) {
        FiniteAbelianGroup group = parse_group(factors);
        SystemLayout layout = SystemLayout::uniform({"F0", "F1", "R"}, group.order());
        FrameChange fc(layout, group, "F0", "F1");
        double worst = 0;
        for (int k = 0; k < 10; k++) {
            worst = std::max(worst, verify_gate_transform(fc, haar_unitary(group.order(), rng), {"R"}));
        }
        std::string name = factors;
        std::replace(name.begin(), name.end(), ',', 'x');
        add("transform/Z" + name, worst, 1e-10);
    }

    FiniteAbelianGroup z2group = z2::group();
    GateClass rx = classify_gate(z2group, gates::RX(0.7));
    GateClass z = classify_gate(z2group, gates::Z());
    GateClass h = classify_gate(z2group, gates::H());
    bool trichotomy = rx == GateClass::robust() && z == GateClass::phase(Character{{1}}) && h == GateClass::entangling();
    add("classify/trichotomy", trichotomy ? 0.0 : 1.0, 0.5);

    Circuit bell = z2::bell_circuit();
    FrameChange to_b = z2::frame_change_CB();
    ComplexityReport report = overhead_report(bell, to_b);
    bool counts = report.n_ent_old == 1 && report.n_ent_new == 2 && report.saturated;
    add("compile/bell_counts", counts ? 0.0 : 1.0, 0.5);
    ComplexMatrix expected = to_b.dense() * circuit_global_unitary(bell).matrix() * to_b.dense().adjoint();
    add("compile/bell_unitary", frobenius_distance(expected, circuit_global_unitary(compile_circuit(bell, to_b)).matrix()), 1e-9);

    double worst_c = 0;
    double worst_t = 0;
    for (int k = 0; k < 1000; k++) {
        ComplementarityCheck c = complementarity_check(PureState(haar_state(4, rng)));
        worst_c = std::max(worst_c, c.residual);
        worst_t = std::max(worst_t, c.residual_total);
    }
    add("complementarity/C2+D2+P2", worst_c, 1e-10);
    add("complementarity/C2+D2_total", worst_t, 1e-10);

    z2::ProtocolResult exact = z2::run_protocol(0, {}, seed);
    double theory = std::abs(exact.frame_a.report.d2_purity - 1) + std::abs(exact.frame_a.report.c2) +
                    std::abs(exact.frame_b.report.d2_purity) + std::abs(exact.frame_b.report.c2 - 1);
    add("protocol/theory_rows", theory, 1e-10);
    add("protocol/invariant_delta", std::abs(exact.invariant_delta), 1e-12);

    z2::SweepResult sweep = z2::lambda_sweep(parse_grid("0:pi/2:33"));
    add("sweep/conservation", sweep.rejected == 0 ? sweep.max_residual : 1.0, 1e-9);

    DensityMatrix target = DensityMatrix::from(PureState(haar_state(8, rng)));
    DensityMatrix rebuilt = reconstruct_state(exact_frequencies(target)).rho;
    add("tomography/exact", frobenius_distance(target.matrix(), rebuilt.matrix()), 1e-10);
    return checks;
}

inline json protocol_to_json(const z2::ProtocolResult &result, const z2::NoiseModel &noise) {
    json frames = json::array();
    for (const auto *frame : {&result.frame_a, &result.frame_b}) {
        const ResourceReport &r = frame->report;
        frames.push_back({
            {"frame", r.frame},
            {"D2", r.d2_purity},
            {"C2", r.c2},
            {"total", r.total()},
            {"D2_bloch", r.d2},
            {"P2", r.p2},
            {"pair", {r.pair.first, r.pair.second}},
            {"local", r.local},
            {"min_raw_eigenvalue", frame->min_raw_eigenvalue},
            {"projected", frame->projected},
        });
    }
    return {
        {"shots", result.shots},
        {"mode", result.shots == 0 ? "exact" : "sampled"},
        {"seed", result.seed},
        {"noise",
         {{"p2q", noise.two_qubit_depolarizing_prob},
          {"p1q", noise.one_qubit_depolarizing_prob},
          {"ro", noise.readout_flip_prob}}},
        {"frames", frames},
        {"invariant_delta", result.invariant_delta},
    };
}

inline int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Quantum reference frame toolkit"};
    app.require_subcommand(1);

    uint64_t seed = 1;
    std::string out_path;
    std::string format = "json";
    app.add_option("--seed", seed, "Random seed");
    app.add_option("--out", out_path, "Output file (default: stdout)");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));

    std::string group_spec = "2";
    std::string gate_spec;

    auto *classify = app.add_subcommand("classify", "Classify a local gate under the regular representation");
    classify->add_option("--group", group_spec, "Cyclic factors, e.g. 2 or 2,2");
    classify->add_option("--gate", gate_spec, "Builtin name, matrix JSON, or matrix JSON file")->required();

    std::string layout_spec = "A,B,C";
    std::string from_frame;
    std::string to_frame;
    std::string support_spec;
    auto *transform = app.add_subcommand("transform", "Controlled form of a local gate after a frame change");
    transform->add_option("--group", group_spec, "Cyclic factors");
    transform->add_option("--layout", layout_spec, "Comma-separated subsystem labels");
    transform->add_option("--from", from_frame, "Current frame")->required();
    transform->add_option("--to", to_frame, "New frame")->required();
    transform->add_option("--gate", gate_spec, "Builtin name, matrix JSON, or matrix JSON file")->required();
    transform->add_option("--support", support_spec, "Comma-separated labels the gate acts on")->required();

    std::string in_path;
    std::string report_path;
    std::string compile_group;
    auto *compile = app.add_subcommand("compile", "Recompile a circuit into another frame");
    compile->add_option("--in", in_path, "Circuit JSON")->required();
    compile->add_option("--to-frame", to_frame, "Target frame")->required();
    compile->add_option("--report", report_path, "Complexity report JSON");
    compile->add_option("--group", compile_group, "Cyclic factors (default: Z_d for local dimension d)");

    uint64_t shots = 0;
    std::string noise_spec;
    std::string estimator_name = "mle";
    bool strict = false;
    auto *protocol = app.add_subcommand("protocol", "Simulate the two-frame tomography protocol");
    protocol->add_option("--shots", shots, "Shots per setting; 0 selects exact expectations");
    protocol->add_option("--noise", noise_spec, "e.g. p2q=0.02,p1q=0.001,ro=0.01");
    protocol->add_option("--estimator", estimator_name, "Estimator for sampled data")
        ->check(CLI::IsMember({"mle", "linear"}));
    protocol->add_flag("--strict", strict, "Fail when a linear estimate needed PSD projection");

    std::string family = "default";
    std::string grid_spec = "0:pi/2:33";
    auto *sweep = app.add_subcommand("sweep", "Resource conservation along a family of physical states");
    sweep->add_option("--family", family, "State family")->check(CLI::IsMember({"default"}));
    sweep->add_option("--grid", grid_spec, "start:stop:count");
    sweep->add_flag("--strict", strict, "Reject points whose local carrier has nonzero predictability");

    auto *verify = app.add_subcommand("verify", "Run the invariant battery");

    for (auto *sub : {classify, transform, compile, protocol, sweep, verify}) {
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUserError;
    }

    try {
        if (*classify) {
            FiniteAbelianGroup group = parse_group(group_spec);
            auto [name, matrix] = parse_gate_spec(gate_spec);
            if (!is_unitary(matrix)) {
                throw std::invalid_argument("gate is not unitary");
            }
            GateClass cls = classify_gate(group, matrix);
            size_t orbit_size = distinct_orbit_size(group, matrix);
            if (format == "csv") {
                std::string chi = cls.character ? GroupElement{cls.character->label}.str() : "";
                write_output("gate,class,character,orbit_size_distinct\n" + name + "," + cls.name() + "," + chi + "," +
                                 std::to_string(orbit_size) + "\n",
                             out_path, out);
            } else {
                json j = {{"gate", name}, {"group", group.factors()}, {"class", cls.name()}, {"orbit_size_distinct", orbit_size}};
                if (cls.character) {
                    j["character"] = cls.character->label;
                }
                write_output(j.dump(2) + "\n", out_path, out);
            }
            return kExitOk;
        }

        if (format == "csv" && !(*protocol || *sweep || *verify)) {
            throw std::invalid_argument("csv output is only available for classify, protocol, sweep and verify");
        }

        if (*transform) {
            FiniteAbelianGroup group = parse_group(group_spec);
            SystemLayout layout = SystemLayout::uniform(split_labels(layout_spec), group.order());
            FrameChange fc(layout, group, from_frame, to_frame);
            auto [name, matrix] = parse_gate_spec(gate_spec);
            std::vector<std::string> support = split_labels(support_spec);
            ControlledOperator op = transform_operator(fc, matrix, support);
            json j = controlled_to_json(op);
            j["gate"] = name;
            j["class"] = classify_gate(group, matrix).name();
            j["residual"] = verify_gate_transform(fc, matrix, support);
            write_output(j.dump(2) + "\n", out_path, out);
            return kExitOk;
        }

        if (*compile) {
            Circuit circuit = circuit_from_json(read_json_file(in_path));
            FiniteAbelianGroup group = compile_group.empty()
                                           ? make_group({static_cast<int>(circuit.layout().dims().front())})
                                           : parse_group(compile_group);
            FrameChange fc(circuit.layout(), group, circuit.frame(), to_frame);
            Circuit compiled = compile_circuit(circuit, fc);
            ComplexityReport report = overhead_report(circuit, fc);
            if (report_path.empty()) {
                json j = {{"circuit", circuit_to_json(compiled)}, {"report", report_to_json(report)}};
                write_output(j.dump(2) + "\n", out_path, out);
            } else {
                write_output(circuit_to_json(compiled).dump(2) + "\n", out_path, out);
                write_output(report_to_json(report).dump(2) + "\n", report_path, out);
            }
            return kExitOk;
        }

        if (*protocol) {
            z2::NoiseModel noise = z2::NoiseModel::parse(noise_spec);
            Estimator estimator = estimator_name == "linear" ? Estimator::LinearProjected : Estimator::MaximumLikelihood;
            z2::ProtocolResult result = z2::run_protocol(shots, noise, seed, estimator);
            if (format == "csv") {
                std::ostringstream csv;
                csv << "frame,D2,C2,total\n" << std::fixed << std::setprecision(6);
                for (const auto *frame : {&result.frame_a, &result.frame_b}) {
                    csv << frame->report.frame << ',' << frame->report.d2_purity << ',' << frame->report.c2 << ','
                        << frame->report.total() << '\n';
                }
                write_output(csv.str(), out_path, out);
            } else {
                write_output(protocol_to_json(result, noise).dump(2) + "\n", out_path, out);
            }
            bool warned = false;
            for (const auto *frame : {&result.frame_a, &result.frame_b}) {
                if (frame->projected) {
                    err << "warning: frame " << frame->report.frame
                        << " linear estimate left the PSD cone (min eigenvalue " << frame->min_raw_eigenvalue << ")\n";
                    warned = true;
                }
            }
            return strict && warned ? kExitCheckFailed : kExitOk;
        }

        if (*sweep) {
            z2::SweepOptions options;
            options.require_zero_predictability = strict;
            z2::SweepResult result = z2::lambda_sweep(parse_grid(grid_spec), options);
            if (result.max_residual > options.tolerance) {
                throw InvariantViolation("conservation law broken along the default family");
            }
            if (format == "json") {
                json points = json::array();
                for (const auto &p : result.points) {
                    json reports = json::array();
                    for (const auto &r : p.reports) {
                        reports.push_back(to_json(r));
                    }
                    points.push_back({{"lambda", p.lambda}, {"accepted", p.accepted}, {"reason", p.reason}, {"frames", reports}});
                }
                json j = {
                    {"family", family},
                    {"points", points},
                    {"max_residual", result.max_residual},
                    {"rejected", result.rejected},
                    {"c2_nondecreasing_frame_C", result.c2_nondecreasing_frame_c},
                    {"d2_nonincreasing_frame_C", result.d2_nonincreasing_frame_c},
                };
                write_output(j.dump(2) + "\n", out_path, out);
            } else {
                std::ostringstream csv;
                csv << "lambda," << csv_header() << ",accepted\n";
                for (const auto &p : result.points) {
                    if (!p.accepted) {
                        csv << std::fixed << std::setprecision(6) << p.lambda << ",,,,,,,0\n";
                        continue;
                    }
                    for (const auto &r : p.reports) {
                        csv << std::fixed << std::setprecision(6) << p.lambda << ',' << csv_row(r) << ",1\n";
                    }
                }
                write_output(csv.str(), out_path, out);
            }
            for (const auto &p : result.points) {
                if (!p.accepted) {
                    err << "warning: lambda=" << p.lambda << " rejected: " << p.reason << "\n";
                }
            }
            return strict && result.rejected > 0 ? kExitCheckFailed : kExitOk;
        }

        if (*verify) {
            std::vector<Check> checks = verification_battery(seed);
            bool all = true;
            for (const auto &c : checks) {
                all = all && c.pass;
            }
            if (format == "csv") {
                std::ostringstream csv;
                csv << "check,residual,threshold,pass\n";
                for (const auto &c : checks) {
                    csv << c.name << ',' << std::scientific << std::setprecision(3) << c.residual << ',' << c.threshold << ','
                        << (c.pass ? 1 : 0) << '\n';
                }
                write_output(csv.str(), out_path, out);
            } else {
                json list = json::array();
                for (const auto &c : checks) {
                    list.push_back({{"name", c.name}, {"residual", c.residual}, {"threshold", c.threshold}, {"pass", c.pass}});
                }
                write_output(json{{"checks", list}, {"pass", all}}.dump(2) + "\n", out_path, out);
            }
            return all ? kExitOk : kExitCheckFailed;
        }
    } catch (const InvariantViolation &e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << "\n";
        return kExitUserError;
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUserError;
}

}  // namespace qrf::cli
