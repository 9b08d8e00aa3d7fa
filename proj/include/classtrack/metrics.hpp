// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 classtrack contributors

#pragma once

#include <string>
#include <vector>

#include "classtrack/ingest.hpp"

namespace classtrack {

/// CLEAR-MOT scores. MOTP is the mean IoU over matched pairs (0 when nothing
/// matched); MOTA = 1 - (misses + false_positives + id_switches) / gt_count.
struct TrackingMetrics {
    double mota = 0.0;
    double motp = 0.0;
    long long id_switches = 0;
    long long false_positives = 0;
    long long misses = 0;
    long long gt_count = 0;
};

/// Frame-by-frame GT-to-hypothesis matching on IoU with a persistence
/// preference: a ground-truth object keeps its previously matched track id
/// whenever that pairing still clears the threshold; leftovers are matched by
/// the assignment solver on 1 - IoU costs. An ID switch is counted whenever a
/// ground-truth object's matched id differs from the id it last matched.
/// Throws std::invalid_argument when the ground truth is empty or the
/// threshold is outside (0, 1).
TrackingMetrics evaluate(const std::vector<std::vector<ResultEntry>>& results,
                         const std::vector<std::vector<GroundTruthEntry>>& ground_truth,
                         double iou_threshold = 0.5);

TrackingMetrics evaluate(const std::vector<FrameResult>& results,
                         const std::vector<std::vector<GroundTruthEntry>>& ground_truth,
                         double iou_threshold = 0.5);

std::vector<std::vector<ResultEntry>> to_result_frames(const std::vector<FrameResult>& results);

std::string format_metrics(const TrackingMetrics& metrics);
void write_metrics_csv(const TrackingMetrics& metrics, const std::string& path);

}  // namespace classtrack
