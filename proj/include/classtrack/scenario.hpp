// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 classtrack contributors

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "classtrack/ingest.hpp"

namespace classtrack {

enum class EventKind { Occlusion, Misclassify, Dropout };

/// Scripted per-object disturbance over an inclusive 1-based frame range.
/// Occlusion and Dropout suppress the detection; Misclassify relabels it.
/// Ground truth is never altered by events.
struct FrameEvent {
    EventKind kind = EventKind::Dropout;
    int object_id = 0;
    int first_frame = 0;
    int last_frame = 0;
    int wrong_class = -1;  // Misclassify only

    bool covers(int frame) const { return frame >= first_frame && frame <= last_frame; }
};

/// Explicit trajectory for one object; when angular_velocity is nonzero the
/// object follows a circular arc whose tangent at frame 1 points along
/// `heading`, otherwise a straight line.
struct TrajectorySpec {
    double start_x = 0.0;
    double start_y = 0.0;
    double speed = 0.0;             // pixels per frame
    double heading = 0.0;           // radians
    double angular_velocity = 0.0;  // radians per frame
};

/// Parametric synthetic multi-class sequence. Objects are numbered 1..total
/// in class order (all of class 0 first). Everything derives deterministically
/// from the seed.
struct ScenarioSpec {
    std::vector<int> class_counts;
    int num_frames = 100;
    int image_width = 1920;
    int image_height = 1080;
    double base_speed = 3.0;  // auto-generated speeds are drawn around this
    double curve_rate = 0.0;  // default angular velocity when auto-generating
    std::vector<TrajectorySpec> trajectories;  // optional override, one per object
    int embedding_dim = 16;
    double embedding_noise = 0.0;  // std of per-frame perturbation of base embeddings
    double detection_noise = 0.0;  // std of box-coordinate jitter
    std::vector<FrameEvent> events;
    std::uint64_t seed = 1;

    int total_objects() const;
    void validate() const;  // throws std::invalid_argument on bad counts or event references
};

/// Deterministic generation of detections plus ground truth for a spec. With
/// embedding_dim > 0 each object carries a unit-norm base embedding;
/// distinct objects' base embeddings have pairwise cosine similarity < 0.5.
SequenceBundle generate(const ScenarioSpec& spec);

/// The seven benchmark class distributions, sharing frame count, noise and
/// seed defaults: (2,2,2), (3,2,1), (1,1,4), (6,0,0), (0,0,6), (3,3,3), (4,4,4).
std::vector<ScenarioSpec> table1_suite();

/// Reads a scenario spec from a JSON file (see README for the schema).
ScenarioSpec load_scenario_spec(const std::string& path);

/// Reads a suite file holding either one spec object or an array of specs.
std::vector<ScenarioSpec> load_scenario_suite(const std::string& path);

}  // namespace classtrack
