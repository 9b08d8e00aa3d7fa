// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 classtrack contributors

#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "classtrack/bench.hpp"
#include "classtrack/ingest.hpp"
#include "classtrack/metrics.hpp"
#include "classtrack/scenario.hpp"
#include "classtrack/tracker.hpp"

namespace {

using namespace classtrack;

int run_gen(const std::string& spec_path, const std::string& out_dir) {
    const ScenarioSpec spec = load_scenario_spec(spec_path);
    const SequenceBundle bundle = generate(spec);
    write_sequence(bundle, out_dir);
    std::cout << "wrote " << bundle.metadata.num_frames << " frames to " << out_dir << "\n";
    return 0;
}

int run_track(const std::string& seq_dir, const std::string& config_path,
              const std::string& out_path, bool parallel, bool iou_only) {
    TrackerConfig config;
    if (!config_path.empty()) {
        config = load_tracker_config(config_path);
    }
    if (parallel) {
        config.parallel = true;
    }
    const SequenceBundle bundle = load_sequence(seq_dir);
    const auto results = run_sequence(bundle.detections_per_frame, config,
                                      {MatchStrategy::PerClass, iou_only});
    write_results(results, out_path);

    long long outputs = 0;
    for (const auto& frame : results) outputs += static_cast<long long>(frame.outputs.size());
    std::cout << "tracked " << results.size() << " frames, " << outputs << " confirmed outputs -> "
              << out_path << "\n";
    return 0;
}

int run_eval(const std::string& results_path, const std::string& gt_path, double threshold,
             const std::string& out_path) {
    const auto results = load_results(results_path);
    SequenceBundle bundle;
    load_ground_truth(gt_path, bundle);
    const TrackingMetrics metrics = evaluate(results, bundle.ground_truth, threshold);
    std::cout << format_metrics(metrics);
    if (!out_path.empty()) {
        write_metrics_csv(metrics, out_path);
    }
    return 0;
}

int run_bench(const std::string& suite, int repetitions, int warmup, bool parallel,
              const std::string& out_path) {
    std::vector<ScenarioSpec> specs;
    if (suite == "table1") {
        specs = table1_suite();
    } else if (std::filesystem::exists(suite)) {
        specs = load_scenario_suite(suite);
    } else {
        throw std::runtime_error("unknown suite: " + suite + " (use `table1` or a JSON file)");
    }

    TrackerConfig config;
    config.parallel = parallel;
    const auto reports = run_benchmark(specs, repetitions, config, warmup);
    emit_report(reports, out_path);

    for (const auto& report : reports) {
        std::cout << "(";
        for (std::size_t i = 0; i < report.scenario_label.size(); ++i) {
            std::cout << (i ? "," : "") << report.scenario_label[i];
        }
        std::cout << ") partitioned " << report.partitioned_total_ms << " ms, monolithic "
                  << report.monolithic_mean_ms << " ms\n";
    }
    std::cout << "report -> " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"class-partitioned multi-object tracking"};
    app.require_subcommand(1);

    std::string spec_path, out_dir;
    auto* gen = app.add_subcommand("gen", "generate a synthetic sequence from a scenario spec");
    gen->add_option("--spec", spec_path, "scenario spec JSON file")->required();
    gen->add_option("--out", out_dir, "output sequence directory")->required();

    std::string seq_dir, config_path, track_out;
    bool parallel = false, iou_only = false;
    auto* track = app.add_subcommand("track", "run the tracker over a sequence directory");
    track->add_option("--seq", seq_dir, "sequence directory (detections.csv, ...)")->required();
    track->add_option("--config", config_path, "tracker config file (key = value)");
    track->add_option("--out", track_out, "output results CSV")->required();
    track->add_flag("--parallel", parallel, "run per-class matching on worker threads");
    track->add_flag("--iou-only", iou_only, "disable the appearance stage (geometric baseline)");

    std::string results_path, gt_path, eval_out;
    double threshold = 0.5;
    auto* eval = app.add_subcommand("eval", "score results against ground truth (CLEAR metrics)");
    eval->add_option("--results", results_path, "results CSV")->required();
    eval->add_option("--gt", gt_path, "ground truth CSV")->required();
    eval->add_option("--threshold", threshold, "IoU match threshold")->capture_default_str();
    eval->add_option("--out", eval_out, "also write the metrics as CSV");

    std::string suite = "table1", bench_out = "bench_report.csv";
    int repetitions = 50, warmup = 5;
    bool bench_parallel = false;
    auto* bench = app.add_subcommand("bench", "time partitioned vs monolithic matching");
    bench->add_option("--suite", suite, "`table1` or a JSON file with a spec array")
        ->capture_default_str();
    bench->add_option("--reps", repetitions, "measured repetitions per scenario")
        ->capture_default_str();
    bench->add_option("--warmup", warmup, "discarded warm-up repetitions")->capture_default_str();
    bench->add_option("--out", bench_out, "report CSV path")->capture_default_str();
    bench->add_flag("--parallel", bench_parallel, "use per-class worker threads while timing");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return run_gen(spec_path, out_dir);
        if (track->parsed()) return run_track(seq_dir, config_path, track_out, parallel, iou_only);
        if (eval->parsed()) return run_eval(results_path, gt_path, threshold, eval_out);
        if (bench->parsed()) return run_bench(suite, repetitions, warmup, bench_parallel, bench_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
