// qpath: interferometer pre/post-selection analysis from the command line.
//
//   qpath paradox                      built-in three-box reproduction (self-checking)
//   qpath analyze SCENARIO ...         exact analytics on a scenario file
//   qpath mc SCENARIO ...              Born sampling and weak-pointer runs
//   qpath export-scenario              emit the built-in scenario as JSON

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qpath/analysis.hpp"
#include "qpath/circuit.hpp"
#include "qpath/errors.hpp"
#include "qpath/montecarlo.hpp"
#include "qpath/paradox.hpp"
#include "qpath/report.hpp"
#include "qpath/scenario.hpp"

namespace {

using namespace qpath;

struct OutputOptions {
    std::string out_path;
    bool json_stdout = false;
};

void add_output_flags(CLI::App* cmd, OutputOptions& opts) {
    cmd->add_option("--out", opts.out_path,
                    "Write the JSON report to this path");
    cmd->add_flag("--json", opts.json_stdout,
                  "Print the JSON report instead of the table");
}

void emit_report(const Report& report, const OutputOptions& opts) {
    const nlohmann::ordered_json doc = report_to_json(report);
    if (opts.json_stdout) {
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << render_table(report);
    }
    if (!opts.out_path.empty()) {
        std::ofstream out(opts.out_path);
        if (!out) {
            throw Error("cannot write report to '" + opts.out_path + "'");
        }
        out << doc.dump(2) << "\n";
    }
}

// Earliest checkpoint strictly between the source and the post-selection
// whose labeling contains the rail name.
std::string resolve_probe_stage(const Scenario& scenario,
                                const std::string& rail) {
    const Circuit& circuit = scenario.circuit;
    const std::size_t source =
        circuit.checkpoint_index(scenario.input.stage_tag());
    const std::size_t post =
        circuit.checkpoint_index(scenario.postselect.stage_tag());
    for (std::size_t k = source + 1; k < post; ++k) {
        const std::string& name = circuit.checkpoint_name(k);
        for (const std::string& label : circuit.labels_at(name)) {
            if (label == rail) return name;
        }
    }
    throw Error("no stage strictly between input and post-selection has a "
                "rail named '" + rail + "'; use --stage");
}

void add_weak_values(Report& report, const PpsEnsemble& ensemble,
                     const std::string& stage) {
    Complex sum{0.0, 0.0};
    for (const std::string& rail :
         ensemble.circuit().labels_at(stage)) {
        const WeakValue w = path_weak_value(ensemble, stage, rail);
        report.add("weak_value." + rail, stage, w.value, kAlgebraTol);
        sum += w.value;
    }
    report.add_checked("weak_value.sum", stage, sum, Complex{1.0, 0.0},
                       kAlgebraTol);
}

void add_kd(Report& report, const PpsEnsemble& ensemble,
            const std::string& stage) {
    const Basis paths = rail_basis(ensemble.circuit(), stage);
    const Basis finals = final_basis_containing_f(ensemble, stage);
    const KdDistribution kd = kd_distribution(ensemble, paths, finals, stage);
    for (std::size_t a = 0; a < kd.rows(); ++a) {
        for (std::size_t b = 0; b < kd.cols(); ++b) {
            report.add("kd.q." + kd.intermediate_names[a] + "_" +
                           kd.final_names[b],
                       stage, kd.q(a, b), kAlgebraTol);
        }
    }
    report.add_checked("kd.total", stage, kd.total(), Complex{1.0, 0.0},
                       kAlgebraTol);
    report.add("kd.negativity", stage, Complex{negativity(kd), 0.0},
               kAlgebraTol);
    report.add("kd.imaginarity", stage, Complex{imaginarity(kd), 0.0},
               kAlgebraTol);
}

void add_pps(Report& report, const PpsEnsemble& ensemble,
             const std::string& stage) {
    const Operator op = pps_operator(ensemble, stage);
    const Basis basis = rail_basis(ensemble.circuit(), stage);
    const OperatorDecomposition d = decompose(op, basis, basis);
    for (std::size_t i = 0; i < d.left.size(); ++i) {
        for (std::size_t j = 0; j < d.right.size(); ++j) {
            report.add("pps.coeff." + d.left.names[i] + "_" + d.right.names[j],
                       stage, d.coeff(i, j), kAlgebraTol);
        }
    }
    report.add_checked("pps.trace", stage, trace(op), Complex{1.0, 0.0},
                       kAlgebraTol);
}

void add_decomposition(Report& report, const PpsEnsemble& ensemble,
                       const std::string& stage, const std::string& left_stage,
                       const std::string& right_stage, bool identity_operator) {
    const Circuit& circuit = ensemble.circuit();
    const Operator op = identity_operator ? Operator::identity(circuit.rails())
                                          : pps_operator(ensemble, stage);
    const Basis left =
        transport_basis(circuit, rail_basis(circuit, left_stage), stage);
    const Basis right =
        transport_basis(circuit, rail_basis(circuit, right_stage), stage);
    const OperatorDecomposition d = decompose(op, left, right);
    for (std::size_t i = 0; i < d.left.size(); ++i) {
        for (std::size_t j = 0; j < d.right.size(); ++j) {
            report.add("decompose.coeff." + d.left.names[i] + "_" +
                           d.right.names[j],
                       stage, d.coeff(i, j), kAlgebraTol);
        }
    }
}

int cmd_paradox(const OutputOptions& opts) {
    const Report report = run_paradox_checks(build_three_box());
    emit_report(report, opts);
    return report_passed(report) ? 0 : 2;
}

int cmd_analyze(const std::string& scenario_path, const std::string& stage,
                bool weak_values, bool kd, bool pps,
                const std::vector<std::string>& decompose_stages,
                const std::string& operator_choice, const OutputOptions& opts) {
    const Scenario scenario = load_scenario(scenario_path);
    const PpsEnsemble ensemble(scenario.circuit, scenario.input,
                               scenario.postselect);
    Report report;
    report.command = "analyze";
    report.meta["scenario"] = scenario_path;
    report.meta["stage"] = stage;
    scenario.circuit.checkpoint_index(stage);  // fail early on bad names

    report.add("transition.f_psi", "any", ensemble.transition_amplitude(),
               kAlgebraTol);
    if (weak_values) add_weak_values(report, ensemble, stage);
    if (kd) add_kd(report, ensemble, stage);
    if (pps) add_pps(report, ensemble, stage);
    if (!decompose_stages.empty()) {
        add_decomposition(report, ensemble, stage, decompose_stages.at(0),
                          decompose_stages.at(1),
                          operator_choice == "identity");
    }
    emit_report(report, opts);
    return 0;
}

int cmd_mc(const std::string& scenario_path, std::uint64_t shots,
           std::uint64_t seed, unsigned workers, double coupling, double width,
           const std::string& path_rail, const std::string& stage_flag,
           const std::vector<double>& sweep, const OutputOptions& opts) {
    const Scenario scenario = load_scenario(scenario_path);
    ShotConfig config;
    config.shots = shots;
    config.seed = seed;
    config.workers = workers;

    Report report;
    report.command = "mc";
    report.meta["scenario"] = scenario_path;
    report.meta["shots"] = shots;
    report.meta["seed"] = seed;
    report.meta["workers"] = workers;

    const std::string output = scenario.circuit.output_checkpoint();
    const DetectionCounts detections =
        sample_detections(scenario.circuit, scenario.input, config);
    const StateVector out_state =
        scenario.circuit.propagate(scenario.input, output);
    for (std::size_t i = 0; i < detections.counts.size(); ++i) {
        const std::string& rail = detections.labels[i];
        report.add("detection.count." + rail, output,
                   Complex{static_cast<double>(detections.counts[i]), 0.0}, 0.0);
        report.add("detection.fraction." + rail, output,
                   Complex{static_cast<double>(detections.counts[i]) /
                               static_cast<double>(detections.shots),
                           0.0},
                   0.0);
        report.add("detection.prob." + rail, output,
                   Complex{std::norm(out_state[i]), 0.0}, kAlgebraTol);
    }

    if (!path_rail.empty()) {
        const PpsEnsemble ensemble(scenario.circuit, scenario.input,
                                   scenario.postselect);
        const std::string probe_stage =
            stage_flag.empty() ? resolve_probe_stage(scenario, path_rail)
                               : stage_flag;
        report.meta["path"] = path_rail;
        report.meta["stage"] = probe_stage;
        report.meta["sigma"] = width;

        auto add_run = [&](const std::string& prefix,
                           const PointerRunResult& run) {
            const PointerBranches branches =
                pointer_branches(ensemble, run.pointer);
            const WeakValue analytic = path_weak_value(
                ensemble, run.pointer.stage, run.pointer.rail);
            report.add(prefix + ".g", probe_stage,
                       Complex{run.pointer.coupling, 0.0}, 0.0);
            report.add(prefix + ".estimate", probe_stage,
                       Complex{run.estimate, 0.0}, 3.0 * run.estimate_stderr);
            report.add(prefix + ".estimate_stderr", probe_stage,
                       Complex{run.estimate_stderr, 0.0}, 0.0);
            report.add(prefix + ".mean_shift", probe_stage,
                       Complex{run.mean_shift, 0.0}, 0.0);
            report.add(prefix + ".stderr", probe_stage,
                       Complex{run.stderr_shift, 0.0}, 0.0);
            report.add(prefix + ".accepted", probe_stage,
                       Complex{static_cast<double>(run.accepted_shots), 0.0},
                       0.0);
            report.add(prefix + ".acceptance_rate", probe_stage,
                       Complex{static_cast<double>(run.accepted_shots) /
                                   static_cast<double>(run.config.shots),
                               0.0},
                       0.0);
            report.add(prefix + ".analytic.weak_value", probe_stage,
                       analytic.value, kAlgebraTol);
            report.add(prefix + ".analytic.conditional_mean", probe_stage,
                       Complex{analytic_conditional_mean(
                                   branches, run.pointer.coupling,
                                   run.pointer.width),
                               0.0},
                       kAlgebraTol);
            if (!run.weak_regime) {
                report.add(prefix + ".weak_regime_warning", probe_stage,
                           Complex{1.0, 0.0}, 0.0);
            }
        };

        if (!sweep.empty()) {
            const std::vector<PointerRunResult> runs = coupling_sweep(
                ensemble, probe_stage, path_rail, sweep, width, config);
            for (std::size_t k = 0; k < runs.size(); ++k) {
                add_run("sweep." + std::to_string(k), runs[k]);
            }
        } else {
            PointerConfig pointer;
            pointer.coupling = coupling;
            pointer.width = width;
            pointer.stage = probe_stage;
            pointer.rail = path_rail;
            add_run("pointer", weak_pointer_run(ensemble, pointer, config));
        }
    }

    emit_report(report, opts);
    return 0;
}

int cmd_export(const OutputOptions& opts) {
    const nlohmann::ordered_json doc = scenario_to_json(three_box_scenario());
    if (opts.out_path.empty()) {
        std::cout << doc.dump(2) << "\n";
    } else {
        std::ofstream out(opts.out_path);
        if (!out) {
            throw Error("cannot write scenario to '" + opts.out_path + "'");
        }
        out << doc.dump(2) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-path interferometer pre/post-selection toolkit"};
    app.require_subcommand(1);

    OutputOptions paradox_opts;
    CLI::App* paradox_cmd = app.add_subcommand(
        "paradox", "Reproduce and self-check the built-in three-box network");
    add_output_flags(paradox_cmd, paradox_opts);

    std::string analyze_scenario;
    std::string analyze_stage;
    bool analyze_weak_values = false;
    bool analyze_kd = false;
    bool analyze_pps = false;
    std::vector<std::string> analyze_decompose;
    std::string analyze_operator = "pps";
    OutputOptions analyze_opts;
    CLI::App* analyze_cmd =
        app.add_subcommand("analyze", "Exact analytics on a scenario file");
    analyze_cmd->add_option("scenario", analyze_scenario, "Scenario JSON path")
        ->required();
    analyze_cmd->add_option("--stage", analyze_stage,
                            "Checkpoint the analyses are evaluated at")
        ->required();
    analyze_cmd->add_flag("--weak-values", analyze_weak_values,
                          "Path-projector weak values and their sum");
    analyze_cmd->add_flag("--kd", analyze_kd,
                          "Quasiprobability table, negativity, imaginarity");
    analyze_cmd->add_flag("--pps", analyze_pps,
                          "Normalized pre/post-selected operator table");
    analyze_cmd
        ->add_option("--decompose", analyze_decompose,
                     "LEFT RIGHT checkpoint names for an operator expansion")
        ->expected(2);
    analyze_cmd
        ->add_option("--operator", analyze_operator,
                     "Operator for --decompose: pps or identity")
        ->check(CLI::IsMember({"pps", "identity"}));
    add_output_flags(analyze_cmd, analyze_opts);

    std::string mc_scenario;
    std::uint64_t mc_shots = 1'000'000;
    std::uint64_t mc_seed = 1;
    unsigned mc_workers = 1;
    double mc_g = 0.01;
    double mc_sigma = 1.0;
    std::string mc_path;
    std::string mc_stage;
    std::vector<double> mc_sweep;
    OutputOptions mc_opts;
    CLI::App* mc_cmd = app.add_subcommand(
        "mc", "Born-rule sampling and weak-pointer simulation");
    mc_cmd->add_option("scenario", mc_scenario, "Scenario JSON path")
        ->required();
    mc_cmd->add_option("--shots", mc_shots, "Shots per run");
    mc_cmd->add_option("--seed", mc_seed, "Random seed");
    mc_cmd->add_option("--workers", mc_workers,
                       "Worker threads (never changes results)");
    mc_cmd->add_option("--g", mc_g, "Pointer coupling strength");
    mc_cmd->add_option("--sigma", mc_sigma, "Pointer width");
    mc_cmd->add_option("--path", mc_path,
                       "Rail name whose projector the pointer probes");
    mc_cmd->add_option("--stage", mc_stage,
                       "Probe checkpoint (default: earliest one with --path)");
    mc_cmd->add_option("--sweep", mc_sweep,
                       "Comma-separated ascending couplings")
        ->delimiter(',');
    add_output_flags(mc_cmd, mc_opts);

    OutputOptions export_opts;
    CLI::App* export_cmd = app.add_subcommand(
        "export-scenario", "Emit the built-in three-box scenario as JSON");
    add_output_flags(export_cmd, export_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (paradox_cmd->parsed()) return cmd_paradox(paradox_opts);
        if (analyze_cmd->parsed()) {
            return cmd_analyze(analyze_scenario, analyze_stage,
                               analyze_weak_values, analyze_kd, analyze_pps,
                               analyze_decompose, analyze_operator,
                               analyze_opts);
        }
        if (mc_cmd->parsed()) {
            return cmd_mc(mc_scenario, mc_shots, mc_seed, mc_workers, mc_g,
                          mc_sigma, mc_path, mc_stage, mc_sweep, mc_opts);
        }
        if (export_cmd->parsed()) return cmd_export(export_opts);
    } catch (const AnomalousPostselection& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
