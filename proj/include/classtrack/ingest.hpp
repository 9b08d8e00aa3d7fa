// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 classtrack contributors

#pragma once

#include <string>
#include <vector>

#include "classtrack/tracker.hpp"

namespace classtrack {

struct SequenceMetadata {
    int num_frames = 0;
    int image_width = 0;
    int image_height = 0;
    int embedding_dim = 0;
};

struct GroundTruthEntry {
    int object_id = 0;
    int class_id = 0;
    BoundingBox box;
};

struct ResultEntry {
    int track_id = 0;
    int class_id = 0;
    BoundingBox box;
};

/// In-memory sequence: frame-indexed detections plus optional embeddings and
/// ground truth. Index 0 holds frame 1.
struct SequenceBundle {
    std::vector<std::vector<Detection>> detections_per_frame;
    std::vector<std::vector<GroundTruthEntry>> ground_truth;
    SequenceMetadata metadata;
    bool has_embeddings = false;
};

// CSV formats (no header rows):
//   detections:   frame,-1,x,y,w,h,confidence,class_id
//   embeddings:   frame,detection_index,v1,...,vF
//   ground truth: frame,object_id,x,y,w,h,class_id
//   results:      frame,track_id,x,y,w,h,class_id
// Frames are 1-based; malformed rows raise errors naming the offending line.

SequenceBundle load_detections(const std::string& path);
void load_embeddings(const std::string& path, SequenceBundle& bundle);
void load_ground_truth(const std::string& path, SequenceBundle& bundle);

void write_detections(const SequenceBundle& bundle, const std::string& path);
void write_embeddings(const SequenceBundle& bundle, const std::string& path);
void write_ground_truth(const SequenceBundle& bundle, const std::string& path);

void write_results(const std::vector<FrameResult>& results, const std::string& path);
std::vector<std::vector<ResultEntry>> load_results(const std::string& path);

/// Directory layout used by the CLI: detections.csv, embeddings.csv (when
/// embeddings exist), ground_truth.csv (when ground truth exists), meta.json.
void write_sequence(const SequenceBundle& bundle, const std::string& dir);
SequenceBundle load_sequence(const std::string& dir);

}  // namespace classtrack
