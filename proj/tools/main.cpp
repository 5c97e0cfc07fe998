// Copyright 2026 The qdimer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// qdimer command line: simulate the Hubbard-dimer Renyi-entropy experiment.
// Subcommands: evolve, renyi, scan, compile, truthtable, analyze.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdimer/adiabatic.hpp"
#include "qdimer/hubbard.hpp"
#include "qdimer/lowering.hpp"
#include "qdimer/noise.hpp"
#include "qdimer/scaling.hpp"
#include "qdimer/shot_record.hpp"
#include "qdimer/swap_test.hpp"

using json = nlohmann::json;
using namespace qdimer;

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_output(const std::string &path, const std::string &content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw std::runtime_error("cannot open output file '" + path + "'");
    }
    os << content;
}

/// CSV with the resolved run configuration echoed as a leading comment.
std::string csv_document(const json &config, const std::string &header,
                         const std::vector<std::string> &rows) {
    std::ostringstream os;
    os << "# config " << config.dump() << "\n" << header << "\n";
    for (const std::string &r : rows) {
        os << r << "\n";
    }
    return os.str();
}

json load_json_file(const std::string &path) {
    std::ifstream is(path);
    if (!is) {
        throw std::runtime_error("cannot open file '" + path + "'");
    }
    json j;
    is >> j;
    return j;
}

/// Fills options the user did not pass from the config file.
class ConfigMerge {
  public:
    explicit ConfigMerge(json cfg) : cfg_(std::move(cfg)) {}

    template <typename T>
    void merge(const CLI::Option *opt, const char *key, T &var) const {
        if (opt->count() == 0 && cfg_.contains(key)) {
            var = cfg_.at(key).get<T>();
        }
    }

  private:
    json cfg_;
};

ShotRecord load_record(const std::string &path) {
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
        return ShotRecord::from_json(load_json_file(path));
    }
    std::ifstream is(path);
    if (!is) {
        throw std::runtime_error("cannot open shot record '" + path + "'");
    }
    return ShotRecord::read_csv(is);
}

struct CommonOpts {
    std::string method = "I";
    std::vector<double> u_values;
    double delta = -1.0;
    double tau = -1.0;
    std::uint64_t shots = 0;
    double p1 = 0.0;
    double p2 = 0.0;
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "csv";
};

adiabatic::TrotterSchedule make_schedule(adiabatic::Method method, double u,
                                         double delta, double tau) {
    if (method == adiabatic::Method::I) {
        return adiabatic::TrotterSchedule::method_i_preset(
            u, delta > 0 ? delta : 0.1, tau > 0 ? tau : (delta > 0 ? delta : 0.1));
    }
    return adiabatic::TrotterSchedule::method_ii_preset(u, delta > 0 ? delta : 0.25);
}

std::vector<double> default_u_grid(adiabatic::Method method) {
    if (method == adiabatic::Method::I) {
        return {0, 1, 2, 3, 4, 5, 6};
    }
    return {1, 2, 3, 4, 5};
}

json gate_json(const Gate &g) {
    json j;
    j["kind"] = gate_name(g.kind);
    json qs = json::array();
    for (int i = 0; i < gate_arity(g.kind); ++i) {
        qs.push_back(g.qubits[i]);
    }
    j["qubits"] = qs;
    if (g.kind == GateKind::XX || g.kind == GateKind::Rz || g.kind == GateKind::R) {
        j["angle"] = g.theta;
    }
    if (g.kind == GateKind::R) {
        j["phi"] = g.phi;
    }
    return j;
}

Gate gate_from_json(const json &j) {
    const std::string kind = j.at("kind").get<std::string>();
    const auto qs = j.at("qubits").get<std::vector<int>>();
    const double angle = j.value("angle", 0.0);
    const double phi = j.value("phi", 0.0);
    if (kind == "H") return Gate::h(qs.at(0));
    if (kind == "R") return Gate::r(qs.at(0), angle, phi);
    if (kind == "Rz") return Gate::rz(qs.at(0), angle);
    if (kind == "Rx") return Gate::rx(qs.at(0), angle);
    if (kind == "Ry") return Gate::ry(qs.at(0), angle);
    if (kind == "XX") return Gate::xx(qs.at(0), qs.at(1), angle);
    if (kind == "Rzz") return Gate::rzz(qs.at(0), qs.at(1), angle);
    if (kind == "CNOT") return Gate::cnot(qs.at(0), qs.at(1));
    if (kind == "Swap") return Gate::swap(qs.at(0), qs.at(1));
    if (kind == "CSwap") return Gate::cswap(qs.at(0), qs.at(1), qs.at(2));
    throw std::invalid_argument("unknown gate kind '" + kind + "'");
}

// ---------------------------------------------------------------- evolve --

int cmd_evolve(const CommonOpts &opt, bool correct, double correction_param) {
    const adiabatic::Method method = adiabatic::method_from_name(opt.method);
    const std::vector<double> us =
        opt.u_values.empty() ? default_u_grid(method) : opt.u_values;
    const bool noisy = opt.shots > 0 && (opt.p1 > 0.0 || opt.p2 > 0.0);

    json config = {{"command", "evolve"},
                   {"method", adiabatic::method_name(method)},
                   {"U", us},
                   {"shots", opt.shots},
                   {"p1", opt.p1},
                   {"p2", opt.p2},
                   {"seed", opt.seed},
                   {"correct", correct}};

    NoiseModel noise;
    noise.p1 = opt.p1;
    noise.p2 = opt.p2;

    double offset = 0.0;
    if (correct && method == adiabatic::Method::II) {
        if (std::isnan(correction_param)) {
            // measured from the full gate sequence at U = 0
            NoiseModel ref_noise = noise;
            ref_noise.seed = derive_seed(opt.seed, 9000);
            offset = adiabatic::measure_method_ii_offset(
                opt.delta > 0 ? opt.delta : 0.25, opt.shots > 0 ? opt.shots : 100000,
                ref_noise);
        } else {
            offset = correction_param;
        }
        config["correction_param"] = offset;
    } else if (correct) {
        if (std::isnan(correction_param)) {
            throw std::invalid_argument("method I correction requires --correction-param (slope)");
        }
        config["correction_param"] = correction_param;
    }

    std::vector<std::string> rows;
    json jrows = json::array();
    for (double u : us) {
        const auto schedule = make_schedule(method, u, opt.delta, opt.tau);
        config["delta"] = schedule.delta;

        adiabatic::EnergyEstimate est;
        if (opt.shots == 0) {
            est = adiabatic::estimate_energy_exact(schedule);
        } else if (noisy) {
            NoiseModel run_noise = noise;
            run_noise.seed = derive_seed(opt.seed, static_cast<std::uint64_t>(u * 1000));
            est = adiabatic::estimate_energy_noisy(schedule, opt.shots, run_noise);
        } else {
            est = adiabatic::estimate_energy_sampled(
                schedule, opt.shots, derive_seed(opt.seed, static_cast<std::uint64_t>(u * 1000)));
        }
        if (correct) {
            const double param =
                (method == adiabatic::Method::II) ? offset : correction_param;
            est.corrected = adiabatic::apply_energy_correction(
                                {{u, est.h_expect}}, method, param)[0].h;
        }
        const double h_exact = hubbard::exact_ground_state({u}).ground_energy;

        std::ostringstream row;
        row << fmt_double(u) << "," << adiabatic::method_name(method) << ","
            << fmt_double(schedule.delta) << "," << fmt_double(schedule.tau) << ","
            << schedule.n_steps << "," << fmt_double(h_exact) << ","
            << fmt_double(est.h_expect) << ","
            << (est.corrected ? fmt_double(*est.corrected) : "");
        rows.push_back(row.str());

        json jr = {{"U", u},
                   {"method", adiabatic::method_name(method)},
                   {"delta", schedule.delta},
                   {"tau", schedule.tau},
                   {"n_steps", schedule.n_steps},
                   {"h_exact", h_exact},
                   {"h_sim", est.h_expect},
                   {"x1", est.x1},
                   {"x2", est.x2},
                   {"z1z2", est.z1z2}};
        if (est.corrected) {
            jr["h_corrected"] = *est.corrected;
        }
        jrows.push_back(jr);
    }

    if (opt.format == "json") {
        write_output(opt.out, json{{"config", config}, {"rows", jrows}}.dump(2) + "\n");
    } else {
        write_output(opt.out, csv_document(config,
            "U,method,delta,tau,n_steps,h_exact,h_sim,h_corrected", rows));
    }
    return 0;
}

// ----------------------------------------------------------------- renyi --

int cmd_renyi(const CommonOpts &opt, bool final_hadamards) {
    const adiabatic::Method method = adiabatic::method_from_name(opt.method);
    const std::vector<double> us =
        opt.u_values.empty() ? default_u_grid(method) : opt.u_values;
    const bool noisy = opt.shots > 0 && (opt.p1 > 0.0 || opt.p2 > 0.0);

    const json config = {{"command", "renyi"},
                         {"method", adiabatic::method_name(method)},
                         {"U", us},
                         {"shots", opt.shots},
                         {"p1", opt.p1},
                         {"p2", opt.p2},
                         {"seed", opt.seed},
                         {"final_hadamards", final_hadamards}};

    std::vector<std::string> rows;
    json jrows = json::array();
    for (double u : us) {
        const auto schedule = make_schedule(method, u, opt.delta, opt.tau);
        const Circuit circuit = renyi::build_swap_test_circuit(schedule, final_hadamards);

        renyi::R2Estimate raw, post;
        if (opt.shots == 0) {
            StateVector s(5);
            s.apply(circuit);
            const auto probs = s.probabilities();
            raw = renyi::r2_from_probabilities(probs, false);
            post = renyi::r2_from_probabilities(probs, true);
        } else if (noisy) {
            NoiseModel noise;
            noise.p1 = opt.p1;
            noise.p2 = opt.p2;
            noise.seed = derive_seed(opt.seed, static_cast<std::uint64_t>(u * 1000));
            const ShotRecord rec =
                run_noisy(lower_circuit(circuit).native_circuit, noise, opt.shots);
            raw = renyi::estimate_r2(rec, false);
            post = renyi::estimate_r2(rec, true);
        } else {
            StateVector s(5);
            s.apply(circuit);
            const ShotRecord rec = s.sample_shots(
                opt.shots, derive_seed(opt.seed, static_cast<std::uint64_t>(u * 1000)));
            raw = renyi::estimate_r2(rec, false);
            post = renyi::estimate_r2(rec, true);
        }

        std::ostringstream row;
        row << fmt_double(u) << "," << adiabatic::method_name(method) << ","
            << fmt_double(raw.r2) << "," << fmt_double(post.r2) << ","
            << fmt_double(post.yield_fraction) << "," << fmt_double(raw.std_err) << ","
            << fmt_double(post.std_err);
        rows.push_back(row.str());
        jrows.push_back({{"U", u},
                         {"r2_raw", raw.r2},
                         {"r2_post", post.r2},
                         {"r2_defined", post.r2_defined},
                         {"yield", post.yield_fraction},
                         {"std_err_raw", raw.std_err},
                         {"std_err_post", post.std_err}});
    }

    if (opt.format == "json") {
        write_output(opt.out, json{{"config", config}, {"rows", jrows}}.dump(2) + "\n");
    } else {
        write_output(opt.out, csv_document(config,
            "U,method,r2_raw,r2_post,yield,std_err_raw,std_err_post", rows));
    }
    return 0;
}

// ------------------------------------------------------------------ scan --

/// Exact-diagonalization reference curve, CSV `U,R2_exact,E_exact`.
int cmd_scan_exact(std::vector<double> grid, const std::string &out,
                   const std::string &format) {
    if (grid.empty()) {
        grid = analysis::default_u_grid();
    }
    const json config = {{"command", "scan"}, {"metric", "exact"}, {"grid", grid}};
    std::vector<std::string> rows;
    json jrows = json::array();
    for (double u : grid) {
        const auto res = hubbard::exact_ground_state({u});
        const double r2 = hubbard::exact_r2({u});
        rows.push_back(fmt_double(u) + "," + fmt_double(r2) + "," +
                       fmt_double(res.ground_energy));
        jrows.push_back({{"U", u}, {"R2_exact", r2}, {"E_exact", res.ground_energy}});
    }
    if (format == "json") {
        write_output(out, json{{"config", config}, {"rows", jrows}}.dump(2) + "\n");
    } else {
        write_output(out, csv_document(config, "U,R2_exact,E_exact", rows));
    }
    return 0;
}

int cmd_scan(const std::string &metric, const std::string &vary, double fixed,
             std::vector<double> grid, const std::string &out, const std::string &format) {
    if (metric == "exact") {
        return cmd_scan_exact(std::move(grid), out, format);
    }
    const bool vary_tau = (vary == "tau");
    if (!vary_tau && vary != "delta") {
        throw std::invalid_argument("scan: --vary must be tau or delta");
    }
    double fixed_value = fixed;
    if (fixed_value <= 0.0) {
        fixed_value = vary_tau ? 0.05 : 10.0;
    }
    if (grid.empty()) {
        if (metric == "depth") {
            grid = vary_tau ? analysis::kDepthTauGrid : analysis::kDepthDeltaGrid;
        } else if (metric == "eps_r2") {
            grid = vary_tau ? analysis::kEpsR2TauGrid : analysis::kEpsR2DeltaGrid;
        } else if (metric == "eps_psi") {
            grid = vary_tau ? analysis::kEpsR2TauGrid : analysis::kEpsPsiDeltaGrid;
        } else {
            throw std::invalid_argument(
                "scan: --metric must be eps_r2, eps_psi, depth or exact");
        }
    }

    std::vector<analysis::ScalingPoint> points;
    if (metric == "depth") {
        points = analysis::depth_scan(grid, vary_tau, fixed_value);
    } else if (metric == "eps_r2" || metric == "eps_psi") {
        points = analysis::sweep_epsilon(metric == "eps_r2", grid, vary_tau, fixed_value);
    } else {
        throw std::invalid_argument("scan: --metric must be eps_r2, eps_psi or depth");
    }
    const analysis::FitResult fit = analysis::loglog_fit(points);

    const json config = {{"command", "scan"}, {"metric", metric}, {"vary", vary},
                         {"fixed", fixed_value}, {"grid", grid}};
    const json fit_json = {{"slope", fit.slope},
                           {"intercept", fit.intercept},
                           {"r_squared", fit.r_squared}};

    if (format == "json") {
        json points_json = json::array();
        for (const auto &p : points) {
            points_json.push_back({{"parameter", p.parameter}, {"value", p.value}});
        }
        write_output(out, json{{"config", config}, {"points", points_json},
                               {"fit", fit_json}}.dump(2) + "\n");
    } else {
        std::vector<std::string> rows;
        for (const auto &p : points) {
            rows.push_back(vary + "," + fmt_double(p.parameter) + "," + metric + "," +
                           fmt_double(p.value));
        }
        write_output(out, csv_document(config,
            "param_name,param_value,metric_name,metric_value", rows));
        std::cout << fit_json.dump() << "\n";
    }
    return 0;
}

// --------------------------------------------------------------- compile --

int cmd_compile(const std::string &target, double theta, double phi,
                const CommonOpts &opt, const SignParams &signs) {
    Circuit logical(5);
    bool have_circuit = false;

    if (!target.empty()) {
        std::string name = target;
        for (char &c : name) {
            c = static_cast<char>(std::tolower(c));
        }
        if (name == "h") logical = Circuit(1), logical.append(Gate::h(0));
        else if (name == "rx") logical = Circuit(1), logical.append(Gate::rx(0, theta));
        else if (name == "ry") logical = Circuit(1), logical.append(Gate::ry(0, theta));
        else if (name == "rz") logical = Circuit(1), logical.append(Gate::rz(0, theta));
        else if (name == "r") logical = Circuit(1), logical.append(Gate::r(0, theta, phi));
        else if (name == "cnot") logical = Circuit(2), logical.append(Gate::cnot(0, 1));
        else if (name == "swap") logical = Circuit(2), logical.append(Gate::swap(0, 1));
        else if (name == "rzz") logical = Circuit(2), logical.append(Gate::rzz(0, 1, theta));
        else if (name == "xx") logical = Circuit(2), logical.append(Gate::xx(0, 1, theta));
        else if (name == "cswap") logical = Circuit(3), logical.append(Gate::cswap(0, 1, 2));
        else {
            // treat as a circuit file
            const json j = load_json_file(target);
            logical = Circuit(j.at("num_qubits").get<int>());
            for (const auto &gj : j.at("gates")) {
                logical.append(gate_from_json(gj));
            }
        }
        have_circuit = true;
    }
    if (!have_circuit) {
        // full measurement circuit for the given schedule
        const adiabatic::Method method = adiabatic::method_from_name(opt.method);
        const double u = opt.u_values.empty() ? 5.0 : opt.u_values.front();
        logical = renyi::build_swap_test_circuit(make_schedule(method, u, opt.delta, opt.tau));
    }

    const LoweringResult lowered = lower_circuit(logical, signs);
    const double residual =
        unitary_distance(circuit_unitary(lowered.native_circuit), circuit_unitary(logical));

    std::ostringstream os;
    for (const Gate &g : lowered.native_circuit.gates) {
        os << gate_json(g).dump() << "\n";
    }
    const json summary = {{"entangling_count", lowered.entangling_count},
                          {"single_qubit_count", lowered.single_qubit_count},
                          {"depth", lowered.depth},
                          {"residual", residual}};
    os << summary.dump() << "\n";
    write_output(opt.out, os.str());

    if (residual > 1e-8) {
        std::cerr << "compile: verification residual " << residual << " exceeds 1e-8\n";
        return 2;
    }
    return 0;
}

// ------------------------------------------------------------ truthtable --

int cmd_truthtable(const CommonOpts &opt) {
    renyi::TruthTable table;
    if (opt.shots == 0) {
        if (opt.p1 > 0.0 || opt.p2 > 0.0) {
            throw std::invalid_argument("truthtable: noisy tables need --shots > 0");
        }
        table = renyi::cswap_truth_table();
    } else {
        NoiseModel noise;
        noise.p1 = opt.p1;
        noise.p2 = opt.p2;
        noise.seed = opt.seed;
        table = renyi::cswap_truth_table(noise, opt.shots);
    }

    const json config = {{"command", "truthtable"}, {"shots", opt.shots},
                         {"p1", opt.p1}, {"p2", opt.p2}, {"seed", opt.seed}};
    if (opt.format == "json") {
        json rows = json::array();
        for (int out = 0; out < 8; ++out) {
            json row = json::array();
            for (int in = 0; in < 8; ++in) {
                row.push_back(table.p[out][in]);
            }
            rows.push_back(row);
        }
        write_output(opt.out, json{{"config", config},
                                   {"transfer_matrix", rows},
                                   {"average_success", table.average_success()},
                                   {"control_marginal", table.control_marginal()}}
                                  .dump(2) + "\n");
    } else {
        std::vector<std::string> rows;
        for (int out = 0; out < 8; ++out) {
            std::ostringstream row;
            row << out;
            for (int in = 0; in < 8; ++in) {
                row << "," << fmt_double(table.p[out][in]);
            }
            rows.push_back(row.str());
        }
        write_output(opt.out, csv_document(config, "output,in0,in1,in2,in3,in4,in5,in6,in7", rows));
        std::cout << json{{"average_success", table.average_success()},
                          {"control_marginal", table.control_marginal()}}.dump() << "\n";
    }
    return 0;
}

// --------------------------------------------------------------- analyze --

int cmd_analyze(const std::vector<std::string> &files, const std::string &spam_path,
                const std::string &out, const std::string &format) {
    if (files.empty()) {
        throw std::invalid_argument("analyze: at least one input record is required");
    }
    std::optional<SpamModel> spam;
    if (!spam_path.empty()) {
        spam = SpamModel::from_json(load_json_file(spam_path));
    }

    json config = {{"command", "analyze"}, {"files", files}, {"spam", spam_path}};
    json reports = json::array();
    std::vector<std::string> rows;
    int num_qubits = -1;

    for (const std::string &file : files) {
        const ShotRecord rec = load_record(file);
        if (num_qubits < 0) {
            num_qubits = rec.num_qubits;
        } else if (rec.num_qubits != num_qubits) {
            throw std::invalid_argument("analyze: inconsistent qubit counts across files");
        }
        if (rec.num_qubits != 5) {
            throw std::invalid_argument("analyze: expected 5-qubit swap-test records");
        }
        if (spam && spam->num_qubits() != rec.num_qubits) {
            throw std::invalid_argument("analyze: confusion-matrix dimension mismatch");
        }

        std::vector<double> probs = rec.frequencies();
        if (spam) {
            probs = correct_spam(probs, *spam);
        }
        renyi::R2Estimate raw = renyi::r2_from_probabilities(probs, false);
        renyi::R2Estimate post = renyi::r2_from_probabilities(probs, true);
        // binomial error bars from the effective kept-shot counts
        const double total = static_cast<double>(rec.total_shots());
        if (raw.r2_defined) {
            raw.std_err = std::sqrt(std::max(0.0, 1.0 - raw.r2 * raw.r2) / total);
        }
        if (post.r2_defined && post.yield_fraction > 0.0) {
            post.std_err = std::sqrt(std::max(0.0, 1.0 - post.r2 * post.r2) /
                                     (total * post.yield_fraction));
        }

        reports.push_back({{"file", file},
                           {"total_shots", rec.total_shots()},
                           {"r2_raw", raw.r2},
                           {"r2_post", post.r2},
                           {"r2_defined", post.r2_defined},
                           {"yield", post.yield_fraction},
                           {"std_err_raw", raw.std_err},
                           {"std_err_post", post.std_err}});
        std::ostringstream row;
        row << file << "," << fmt_double(raw.r2) << "," << fmt_double(post.r2) << ","
            << (post.r2_defined ? "1" : "0") << "," << fmt_double(post.yield_fraction)
            << "," << fmt_double(raw.std_err) << "," << fmt_double(post.std_err);
        rows.push_back(row.str());
    }

    if (format == "json") {
        write_output(out, json{{"config", config}, {"reports", reports}}.dump(2) + "\n");
    } else {
        write_output(out, csv_document(config,
            "file,r2_raw,r2_post,r2_defined,yield,std_err_raw,std_err_post", rows));
    }
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Hubbard-dimer adiabatic preparation and Renyi-entropy swap test "
                 "on a trapped-ion native gate set"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (flags override it)")
        ->expected(1);

    // pre-scan for --config so its values can back-fill unset options
    json cfg = json::object();
    for (int k = 1; k + 1 < argc; ++k) {
        if (std::string(argv[k]) == "--config") {
            std::ifstream is(argv[k + 1]);
            if (!is) {
                std::cerr << "error: cannot open config file '" << argv[k + 1] << "'\n\n"
                          << app.help() << std::endl;
                return 1;
            }
            try {
                is >> cfg;
            } catch (const std::exception &e) {
                std::cerr << "error: bad config file: " << e.what() << "\n";
                return 1;
            }
        }
    }
    const ConfigMerge merged(cfg);

    CommonOpts opt;
    bool correct = false;
    double correction_param = std::numeric_limits<double>::quiet_NaN();
    bool no_final_hadamards = false;
    bool post_select = true;
    std::string scan_metric = "eps_r2", scan_vary = "tau";
    double scan_fixed = -1.0;
    std::vector<double> scan_grid;
    std::string compile_target;
    double compile_theta = 0.0, compile_phi = 0.0;
    SignParams signs;
    std::vector<std::string> analyze_files;
    std::string spam_path;

    struct CommonOptHandles {
        CLI::Option *method = nullptr;
        CLI::Option *u = nullptr;
        CLI::Option *delta = nullptr;
        CLI::Option *tau = nullptr;
        CLI::Option *shots = nullptr;
        CLI::Option *p1 = nullptr;
        CLI::Option *p2 = nullptr;
        CLI::Option *seed = nullptr;
        CLI::Option *out = nullptr;
        CLI::Option *format = nullptr;
    };

    const auto add_common = [&](CLI::App *cmd, bool wants_schedule) {
        CommonOptHandles h;
        cmd->add_option("--config", config_path, "JSON config file (flags override it)");
        if (wants_schedule) {
            h.method = cmd->add_option("--method", opt.method, "schedule method (I or II)");
            h.u = cmd->add_option("--U,--u", opt.u_values, "interaction strengths");
            h.delta = cmd->add_option("--delta", opt.delta, "Trotter step size");
            h.tau = cmd->add_option("--tau", opt.tau, "evolution time per unit U (method I)");
        }
        h.shots = cmd->add_option("--shots", opt.shots, "shots per run (0 = exact mode)");
        h.p1 = cmd->add_option("--p1", opt.p1, "single-qubit depolarizing probability");
        h.p2 = cmd->add_option("--p2", opt.p2, "two-qubit depolarizing probability");
        h.seed = cmd->add_option("--seed", opt.seed, "master random seed");
        h.out = cmd->add_option("--out", opt.out, "output path (default stdout)");
        h.format = cmd->add_option("--format", opt.format, "csv or json")
                       ->check(CLI::IsMember({"csv", "json"}));
        return h;
    };

    CLI::App *evolve = app.add_subcommand("evolve", "adiabatic energy curve <H>(U)");
    auto evolve_opts = add_common(evolve, true);
    CLI::Option *o_correct = evolve->add_flag("--correct", correct, "apply the energy correction");
    CLI::Option *o_cparam = evolve->add_option(
        "--correction-param", correction_param,
        "method I slope, or method II offset (omit to auto-measure at U=0)");

    CLI::App *renyi_cmd = app.add_subcommand("renyi", "swap-test R2 curve with post-selection");
    auto renyi_opts = add_common(renyi_cmd, true);
    renyi_cmd->add_flag("--no-final-hadamards", no_final_hadamards,
                        "drop the trailing data-qubit Hadamards");
    renyi_cmd->add_flag("--post-select,!--no-post-select", post_select,
                        "post-select on the C-Swap symmetry (both columns are always reported)");

    CLI::App *scan = app.add_subcommand("scan", "Trotter error and depth scaling fits");
    scan->add_option("--config", config_path, "JSON config file (flags override it)");
    scan->add_option("--metric", scan_metric, "eps_r2, eps_psi, depth or exact");
    scan->add_option("--vary", scan_vary, "tau or delta");
    scan->add_option("--fixed", scan_fixed, "value of the non-varied parameter");
    scan->add_option("--grid", scan_grid, "parameter grid values");
    scan->add_option("--out", opt.out, "output path");
    scan->add_option("--format", opt.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    CLI::App *compile = app.add_subcommand("compile", "lower gates to the native set");
    compile->add_option("target", compile_target,
                        "gate name (h, cnot, swap, cswap, rzz, rx, ry, xx) or circuit JSON file");
    compile->add_option("--theta", compile_theta, "rotation angle");
    compile->add_option("--phi", compile_phi, "R-gate axis angle");
    compile->add_option("--alpha", signs.alpha, "XX sign calibration");
    compile->add_option("--beta", signs.beta, "XX sign calibration");
    compile->add_option("--gamma", signs.gamma, "XX sign calibration");
    auto compile_opts = add_common(compile, true);

    CLI::App *truthtable = app.add_subcommand("truthtable", "C-Swap state-transfer matrix");
    auto tt_opts = add_common(truthtable, false);

    CLI::App *analyze = app.add_subcommand("analyze", "re-analyze shot records "
                                           "(SPAM correction + post-selection)");
    analyze->add_option("--config", config_path, "JSON config file (flags override it)");
    analyze->add_option("--in", analyze_files, "shot record files (CSV or JSON)");
    CLI::Option *o_spam = analyze->add_option("--spam", spam_path, "per-qubit confusion matrix JSON");
    analyze->add_option("--out", opt.out, "output path");
    analyze->add_option("--format", opt.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        // config-file fallbacks for options the user did not pass
        const auto merge_all = [&](const CommonOptHandles &h) {
            if (h.method) merged.merge(h.method, "method", opt.method);
            if (h.u) merged.merge(h.u, "U", opt.u_values);
            if (h.delta) merged.merge(h.delta, "delta", opt.delta);
            if (h.tau) merged.merge(h.tau, "tau", opt.tau);
            merged.merge(h.shots, "shots", opt.shots);
            merged.merge(h.p1, "p1", opt.p1);
            merged.merge(h.p2, "p2", opt.p2);
            merged.merge(h.seed, "seed", opt.seed);
            merged.merge(h.out, "out", opt.out);
            merged.merge(h.format, "format", opt.format);
        };

        if (evolve->parsed()) {
            merge_all(evolve_opts);
            merged.merge(o_correct, "correct", correct);
            merged.merge(o_cparam, "correction_param", correction_param);
            return cmd_evolve(opt, correct, correction_param);
        }
        if (renyi_cmd->parsed()) {
            merge_all(renyi_opts);
            return cmd_renyi(opt, !no_final_hadamards);
        }
        if (scan->parsed()) {
            return cmd_scan(scan_metric, scan_vary, scan_fixed, scan_grid, opt.out, opt.format);
        }
        if (compile->parsed()) {
            merge_all(compile_opts);
            return cmd_compile(compile_target, compile_theta, compile_phi, opt, signs);
        }
        if (truthtable->parsed()) {
            merge_all(tt_opts);
            return cmd_truthtable(opt);
        }
        if (analyze->parsed()) {
            merged.merge(o_spam, "spam", spam_path);
            return cmd_analyze(analyze_files, spam_path, opt.out, opt.format);
        }
        std::cerr << app.help() << std::endl;
        return 1;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
