// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 classtrack contributors

#include "classtrack/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace classtrack {

namespace {

struct Accumulator {
    double sum = 0.0;
    double sum_sq = 0.0;
    long long count = 0;

    void add(double value) {
        sum += value;
        sum_sq += value * value;
        ++count;
    }
    double mean() const { return count > 0 ? sum / count : 0.0; }
    double std_dev() const {
        if (count < 2) return 0.0;
        const double m = mean();
        return std::sqrt(std::max(0.0, sum_sq / count - m * m));
    }
};

std::string scenario_name(const std::vector<int>& counts) {
    std::string name = "(";
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (i > 0) name += ',';
        name += std::to_string(counts[i]);
    }
    name += ')';
    return name;
}

}  // namespace

std::vector<TimingReport> run_benchmark(const std::vector<ScenarioSpec>& specs, int repetitions,
                                        const TrackerConfig& config, int warmup) {
    if (repetitions < 1) {
        throw std::invalid_argument("repetitions must be at least 1");
    }
    if (warmup < 0) {
        throw std::invalid_argument("warmup must be non-negative");
    }

    std::vector<TimingReport> reports;
    reports.reserve(specs.size());
    for (const auto& spec : specs) {
        const SequenceBundle bundle = generate(spec);

        TimingReport report;
        report.scenario_label = spec.class_counts;
        report.step_counts = step_count_model(spec.class_counts);

        std::map<int, Accumulator> per_class;
        Accumulator partitioned_max;
        Accumulator partitioned_sum;
        Accumulator monolithic;

        auto measure_partitioned = [&]() {
            const auto frames = run_sequence(bundle.detections_per_frame, config,
                                             {MatchStrategy::PerClass, false});
            report.stage2_invocations = 0;
            for (const auto& frame : frames) {
                double frame_max = 0.0;
                double frame_sum = 0.0;
                for (const auto& stats : frame.diagnostics.per_class) {
                    const double ms = stats.match_seconds * 1e3;
                    per_class[stats.class_id].add(ms);
                    frame_max = std::max(frame_max, ms);
                    frame_sum += ms;
                }
                partitioned_max.add(frame_max);
                partitioned_sum.add(frame_sum);
                report.stage2_invocations += frame.diagnostics.stage2_invocations;
            }
        };
        auto measure_monolithic = [&]() {
            const auto frames = run_sequence(bundle.detections_per_frame, config,
                                             {MatchStrategy::Monolithic, false});
            for (const auto& frame : frames) {
                double frame_total = 0.0;
                for (const auto& stats : frame.diagnostics.per_class) {
                    frame_total += stats.match_seconds * 1e3;
                }
                monolithic.add(frame_total);
            }
        };

        for (int rep = 0; rep < warmup; ++rep) {
            run_sequence(bundle.detections_per_frame, config, {MatchStrategy::PerClass, false});
            run_sequence(bundle.detections_per_frame, config, {MatchStrategy::Monolithic, false});
        }
        // Alternate the measurement order so cache and frequency drift cannot
        // systematically favor either formulation.
        for (int rep = 0; rep < repetitions; ++rep) {
            if (rep % 2 == 0) {
                measure_partitioned();
                measure_monolithic();
            } else {
                measure_monolithic();
                measure_partitioned();
            }
        }

        for (const auto& [cls, acc] : per_class) {
            report.per_class_times[cls] = {acc.mean(), acc.std_dev()};
        }
        report.partitioned_total_ms = partitioned_max.mean();
        report.partitioned_sequential_ms = partitioned_sum.mean();
        report.monolithic_mean_ms = monolithic.mean();
        report.monolithic_std_ms = monolithic.std_dev();
        reports.push_back(std::move(report));
    }
    return reports;
}

void emit_report(const std::vector<TimingReport>& reports, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write file: " + path);
    }

    int max_classes = 0;
    for (const auto& report : reports) {
        max_classes = std::max(max_classes, static_cast<int>(report.scenario_label.size()));
    }

    out << "scenario";
    for (int c = 0; c < max_classes; ++c) {
        out << ",class" << c << "_mean_ms,class" << c << "_std_ms";
    }
    out << ",partitioned_match_ms,partitioned_sequential_ms,monolithic_match_ms,"
           "monolithic_std_ms,steps_monolithic,steps_partitioned_sequential,"
           "steps_partitioned_parallel,stage2_invocations\n";

    char buf[64];
    auto put = [&](double value) {
        std::snprintf(buf, sizeof(buf), "%.6f", value);
        out << ',' << buf;
    };
    for (const auto& report : reports) {
        out << '"' << scenario_name(report.scenario_label) << '"';
        for (int c = 0; c < max_classes; ++c) {
            const auto it = report.per_class_times.find(c);
            put(it != report.per_class_times.end() ? it->second.mean_ms : 0.0);
            put(it != report.per_class_times.end() ? it->second.std_ms : 0.0);
        }
        put(report.partitioned_total_ms);
        put(report.partitioned_sequential_ms);
        put(report.monolithic_mean_ms);
        put(report.monolithic_std_ms);
        out << ',' << report.step_counts.monolithic << ','
            << report.step_counts.partitioned_sequential << ','
            << report.step_counts.partitioned_parallel << ',' << report.stage2_invocations
            << '\n';
    }
}

}  // namespace classtrack
