// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 classtrack contributors

#pragma once

#include <map>
#include <string>
#include <vector>

#include "classtrack/assignment.hpp"
#include "classtrack/scenario.hpp"
#include "classtrack/tracker.hpp"

namespace classtrack {

struct ClassTiming {
    double mean_ms = 0.0;
    double std_ms = 0.0;
};

/// Match-time comparison of the per-class and monolithic formulations over
/// one scenario. Timings cover cost-matrix population plus solve only;
/// partitioned_total_ms models fully concurrent class workers by averaging
/// the per-frame maximum over classes.
struct TimingReport {
    std::vector<int> scenario_label;  // class counts
    std::map<int, ClassTiming> per_class_times;
    double partitioned_total_ms = 0.0;
    double partitioned_sequential_ms = 0.0;  // per-frame sum over classes, averaged
    double monolithic_mean_ms = 0.0;
    double monolithic_std_ms = 0.0;
    StepCounts step_counts;
    long long stage2_invocations = 0;
};

/// Runs every scenario through the partitioned tracker and the monolithic
/// baseline, `repetitions` times each after `warmup` discarded repetitions,
/// and aggregates per-frame match times over all frames and runs.
std::vector<TimingReport> run_benchmark(const std::vector<ScenarioSpec>& specs, int repetitions,
                                        const TrackerConfig& config, int warmup = 5);

/// One CSV row per scenario: per-class mean/std, partitioned and monolithic
/// match times, and the step-count model columns.
void emit_report(const std::vector<TimingReport>& reports, const std::string& path);

}  // namespace classtrack
