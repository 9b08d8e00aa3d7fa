// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 classtrack contributors

#include "classtrack/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

#include "classtrack/assignment.hpp"

namespace classtrack {

TrackingMetrics evaluate(const std::vector<std::vector<ResultEntry>>& results,
                         const std::vector<std::vector<GroundTruthEntry>>& ground_truth,
                         double iou_threshold) {
    if (!(iou_threshold > 0.0) || iou_threshold >= 1.0) {
        throw std::invalid_argument("iou_threshold must lie in (0, 1)");
    }

    TrackingMetrics m;
    double iou_sum = 0.0;
    long long matched_total = 0;
    std::map<int, int> last_matched_id;  // ground-truth object -> last matched track id

    const std::size_t frames = std::max(results.size(), ground_truth.size());
    for (std::size_t f = 0; f < frames; ++f) {
        static const std::vector<GroundTruthEntry> no_gt;
        static const std::vector<ResultEntry> no_hyp;
        const auto& gt = f < ground_truth.size() ? ground_truth[f] : no_gt;
        const auto& hyp = f < results.size() ? results[f] : no_hyp;
        m.gt_count += static_cast<long long>(gt.size());

        std::vector<int> gt_match(gt.size(), -1);   // index into hyp
        std::vector<char> hyp_taken(hyp.size(), 0);

        // Persistence: keep last frame's pairing while it clears the threshold.
        for (std::size_t g = 0; g < gt.size(); ++g) {
            const auto it = last_matched_id.find(gt[g].object_id);
            if (it == last_matched_id.end()) continue;
            for (std::size_t t = 0; t < hyp.size(); ++t) {
                if (hyp_taken[t] || hyp[t].track_id != it->second) continue;
                if (iou(gt[g].box, hyp[t].box) >= iou_threshold) {
                    gt_match[g] = static_cast<int>(t);
                    hyp_taken[t] = 1;
                }
                break;
            }
        }

        // Remaining pairs through the assignment solver on 1 - IoU.
        std::vector<int> free_gt, free_hyp;
        for (std::size_t g = 0; g < gt.size(); ++g) {
            if (gt_match[g] < 0) free_gt.push_back(static_cast<int>(g));
        }
        for (std::size_t t = 0; t < hyp.size(); ++t) {
            if (!hyp_taken[t]) free_hyp.push_back(static_cast<int>(t));
        }
        if (!free_gt.empty() && !free_hyp.empty()) {
            std::vector<double> costs(free_gt.size() * free_hyp.size());
            for (std::size_t a = 0; a < free_gt.size(); ++a) {
                for (std::size_t b = 0; b < free_hyp.size(); ++b) {
                    costs[a * free_hyp.size() + b] =
                        1.0 - iou(gt[free_gt[a]].box, hyp[free_hyp[b]].box);
                }
            }
            const auto assignment =
                solve(pad_costs(costs, static_cast<int>(free_gt.size()),
                                static_cast<int>(free_hyp.size()), 1.0));
            for (const auto& [a, b] : assignment.matches) {
                if (costs[static_cast<std::size_t>(a) * free_hyp.size() + b] <=
                    1.0 - iou_threshold) {
                    gt_match[free_gt[a]] = free_hyp[b];
                    hyp_taken[free_hyp[b]] = 1;
                }
            }
        }

        long long matched_here = 0;
        for (std::size_t g = 0; g < gt.size(); ++g) {
            if (gt_match[g] < 0) continue;
            ++matched_here;
            const auto& pair = hyp[gt_match[g]];
            iou_sum += iou(gt[g].box, pair.box);
            const auto it = last_matched_id.find(gt[g].object_id);
            if (it != last_matched_id.end() && it->second != pair.track_id) {
                m.id_switches += 1;
            }
            last_matched_id[gt[g].object_id] = pair.track_id;
        }
        matched_total += matched_here;
        m.misses += static_cast<long long>(gt.size()) - matched_here;
        m.false_positives += static_cast<long long>(hyp.size()) - matched_here;
    }

    if (m.gt_count == 0) {
        throw std::invalid_argument("MOTA is undefined for empty ground truth");
    }
    m.mota = 1.0 - static_cast<double>(m.misses + m.false_positives + m.id_switches) /
                       static_cast<double>(m.gt_count);
    m.motp = matched_total > 0 ? iou_sum / static_cast<double>(matched_total) : 0.0;
    return m;
}

std::vector<std::vector<ResultEntry>> to_result_frames(const std::vector<FrameResult>& results) {
    std::vector<std::vector<ResultEntry>> frames;
    for (const auto& frame : results) {
        if (frame.frame_index > static_cast<int>(frames.size())) {
            frames.resize(frame.frame_index);
        }
        for (const auto& output : frame.outputs) {
            frames[frame.frame_index - 1].push_back({output.track_id, output.class_id, output.box});
        }
    }
    return frames;
}

TrackingMetrics evaluate(const std::vector<FrameResult>& results,
                         const std::vector<std::vector<GroundTruthEntry>>& ground_truth,
                         double iou_threshold) {
    return evaluate(to_result_frames(results), ground_truth, iou_threshold);
}

std::string format_metrics(const TrackingMetrics& metrics) {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "MOTA   %.3f\nMOTP   %.3f\nIDS    %lld\nFP     %lld\nmisses %lld\nGT     %lld\n",
                  metrics.mota, metrics.motp, metrics.id_switches, metrics.false_positives,
                  metrics.misses, metrics.gt_count);
    return buf;
}

void write_metrics_csv(const TrackingMetrics& metrics, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write file: " + path);
    }
    out << "mota,motp,id_switches,false_positives,misses,gt_count\n";
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%lld,%lld,%lld,%lld\n", metrics.mota, metrics.motp,
                  metrics.id_switches, metrics.false_positives, metrics.misses, metrics.gt_count);
    out << buf;
}

}  // namespace classtrack
