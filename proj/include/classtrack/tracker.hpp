// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 classtrack contributors

#pragma once

#include <Eigen/Dense>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "classtrack/appearance.hpp"
#include "classtrack/geometry.hpp"
#include "classtrack/kalman.hpp"

namespace classtrack {

/// Detector output for one object in one frame.
struct Detection {
    BoundingBox box;
    int class_id = 0;
    double confidence = 1.0;
    std::optional<Eigen::VectorXd> embedding;
};

enum class TrackStatus { Tentative, Confirmed };

/// One tracked identity: Kalman state, bounded appearance history, and
/// lifecycle counters. The class id is fixed for the track's lifetime.
struct Track {
    int id = 0;
    int class_id = 0;
    KalmanState state;
    FeatureHistory features;
    TrackStatus status = TrackStatus::Tentative;
    int hits = 0;               // matched frames, counted toward confirmation
    int time_since_update = 0;  // frames since the last matched detection
    int age = 0;                // total frames alive

    bool confirmed() const { return status == TrackStatus::Confirmed; }
};

struct TrackerConfig {
    double stage1_gate = 1.0;    // max admissible CIoU cost (tau_1)
    double stage2_gate = 0.4;    // max admissible cosine cost (tau_2)
    int n_init = 3;              // consecutive matches required for confirmation
    int max_age = 30;            // unmatched frames a confirmed track survives
    int h = 50;                  // feature history capacity
    double k = 1.0;              // padding constant for cost matrices
    double min_confidence = 0.5; // detection acceptance threshold
    bool parallel = false;       // per-class worker threads on/off

    void validate() const;  // throws std::invalid_argument on out-of-range values
};

/// Parses a `key = value` file whose keys match the TrackerConfig fields.
TrackerConfig load_tracker_config(const std::string& path);

/// The monolithic strategy solves one padded matrix over all classes with
/// cross-class entries at the dummy value; it exists as the baseline for the
/// benchmark and produces the same confirmed outputs as per-class matching.
enum class MatchStrategy { PerClass, Monolithic };

struct RunOptions {
    MatchStrategy strategy = MatchStrategy::PerClass;
    bool iou_only = false;  // disable the appearance stage entirely
};

/// Per-class association bookkeeping for one frame.
struct ClassMatchStats {
    int class_id = 0;  // -1 for the monolithic pseudo-class
    int track_count = 0;
    int detection_count = 0;
    int stage1_dim = 0;  // padded dimension max(tracks, detections)
    bool stage2_invoked = false;
    int stage2_track_count = 0;
    int stage2_detection_count = 0;
    int stage2_dim = 0;
    long long cosine_evaluations = 0;
    double match_seconds = 0.0;  // cost-matrix population + solve, both stages
};

struct FrameDiagnostics {
    std::vector<ClassMatchStats> per_class;  // ascending class id
    /// Square dimension of the class-aware monolithic problem,
    /// sum over classes of max(tracks, detections).
    int monolithic_dim = 0;
    int stage2_invocations = 0;
    long long cosine_evaluations = 0;
};

struct TrackOutput {
    int track_id = 0;
    int class_id = 0;
    BoundingBox box;
};

struct FrameResult {
    int frame_index = 0;
    std::vector<TrackOutput> outputs;  // confirmed tracks updated this frame
    FrameDiagnostics diagnostics;
};

/// Indices of the tracks and detections belonging to one class.
struct ClassPartition {
    std::vector<int> track_indices;
    std::vector<int> detection_indices;
};

/// Splits tracks and detections by class id. Classes with neither tracks nor
/// detections are absent from the map.
std::map<int, ClassPartition> partition_by_class(const std::vector<Track>& tracks,
                                                 const std::vector<Detection>& detections);

struct MatchResult {
    std::vector<std::pair<int, int>> matches;  // (track index, detection index)
    std::vector<int> unmatched_tracks;
    std::vector<int> unmatched_detections;
};

/// Two-stage cascade over one class: CIoU association first, cosine
/// association over the leftovers that carry appearance information.
/// All tracks and detections must share one class id.
MatchResult match_class(const std::vector<Track>& tracks, const std::vector<Detection>& detections,
                        const TrackerConfig& config, bool use_appearance = true,
                        ClassMatchStats* stats = nullptr);

class Tracker {
public:
    explicit Tracker(TrackerConfig config, RunOptions options = {});

    /// Runs one frame: predict, partition, match (concurrently per class when
    /// configured), update lifecycles, seed new tracks. Frame indices must be
    /// strictly increasing; a repeated index throws std::logic_error.
    FrameResult step(const std::vector<Detection>& detections, int frame_index);

    const std::vector<Track>& tracks() const { return tracks_; }
    const TrackerConfig& config() const { return config_; }

private:
    TrackerConfig config_;
    RunOptions options_;
    std::vector<Track> tracks_;
    int next_id_ = 1;
    int embedding_dim_ = -1;  // latched on the first embedding seen
    long long last_frame_ = std::numeric_limits<long long>::min();
};

/// Folds step() over all frames from a fresh tracker. Frame i of the input is
/// frame index i + 1.
std::vector<FrameResult> run_sequence(const std::vector<std::vector<Detection>>& detections_per_frame,
                                      const TrackerConfig& config, RunOptions options = {});

}  // namespace classtrack
