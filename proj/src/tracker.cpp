// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 classtrack contributors

#include "classtrack/tracker.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "classtrack/assignment.hpp"

namespace classtrack {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

struct CascadeContext {
    const TrackerConfig& config;
    bool use_appearance;
    bool class_aware;  // cross-class entries pinned at the dummy value (monolithic mode)
};

constexpr double kCrossClassMarker = -1.0;

// Builds the padded stage matrix from a raw block where cross-class pairs are
// marked; markers become the dummy value V = max(genuine) + k.
CostMatrix padded_matrix(std::vector<double> block, int rows, int cols, double k) {
    double max_cost = 0.0;
    for (double c : block) {
        if (c != kCrossClassMarker) max_cost = std::max(max_cost, c);
    }
    CostMatrix m;
    m.n = std::max(rows, cols);
    m.real_rows = rows;
    m.real_cols = cols;
    m.dummy_value = max_cost + k;
    m.values.assign(static_cast<std::size_t>(m.n) * m.n, m.dummy_value);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            const double c = block[static_cast<std::size_t>(i) * cols + j];
            m.at(i, j) = (c == kCrossClassMarker) ? m.dummy_value : c;
        }
    }
    return m;
}

MatchResult run_cascade(const std::vector<Track>& tracks, const std::vector<int>& track_indices,
                        const std::vector<Detection>& detections,
                        const std::vector<int>& detection_indices, const CascadeContext& ctx,
                        ClassMatchStats& stats) {
    MatchResult result;
    const int p = static_cast<int>(track_indices.size());
    const int d = static_cast<int>(detection_indices.size());
    stats.track_count = p;
    stats.detection_count = d;
    stats.stage1_dim = std::max(p, d);

    if (p == 0 || d == 0) {
        result.unmatched_tracks = track_indices;
        result.unmatched_detections = detection_indices;
        return result;
    }

    std::vector<int> leftover_tracks;
    std::vector<int> leftover_detections;

    // Stage 1: CIoU association over predicted track boxes.
    const auto stage1_start = Clock::now();
    std::vector<double> block(static_cast<std::size_t>(p) * d);
    for (int i = 0; i < p; ++i) {
        const Track& track = tracks[track_indices[i]];
        const BoundingBox predicted = state_box(track.state);
        for (int j = 0; j < d; ++j) {
            const Detection& det = detections[detection_indices[j]];
            block[static_cast<std::size_t>(i) * d + j] =
                (ctx.class_aware && track.class_id != det.class_id)
                    ? kCrossClassMarker
                    : ciou_cost(predicted, det.box);
        }
    }
    const CostMatrix stage1 = padded_matrix(std::move(block), p, d, ctx.config.k);
    const Assignment solved1 = solve(stage1);
    stats.match_seconds += seconds_since(stage1_start);

    for (const auto& [i, j] : solved1.matches) {
        const int ti = track_indices[i];
        const int dj = detection_indices[j];
        const bool same_class = tracks[ti].class_id == detections[dj].class_id;
        if (same_class && stage1.at(i, j) <= ctx.config.stage1_gate) {
            result.matches.emplace_back(ti, dj);
        } else {
            leftover_tracks.push_back(ti);
            leftover_detections.push_back(dj);
        }
    }
    for (int i : solved1.unmatched_predictions) leftover_tracks.push_back(track_indices[i]);
    for (int j : solved1.unmatched_detections) leftover_detections.push_back(detection_indices[j]);

    // Stage 2: cosine association over the leftovers that carry appearance data.
    if (ctx.use_appearance) {
        std::vector<int> s2_tracks;
        std::vector<int> s2_detections;
        for (int ti : leftover_tracks) {
            if (!tracks[ti].features.empty()) s2_tracks.push_back(ti);
        }
        for (int dj : leftover_detections) {
            if (detections[dj].embedding.has_value()) s2_detections.push_back(dj);
        }

        const int p2 = static_cast<int>(s2_tracks.size());
        const int d2 = static_cast<int>(s2_detections.size());
        if (p2 > 0 && d2 > 0) {
            stats.stage2_invoked = true;
            stats.stage2_track_count = p2;
            stats.stage2_detection_count = d2;
            stats.stage2_dim = std::max(p2, d2);

            const auto stage2_start = Clock::now();
            std::vector<double> block2(static_cast<std::size_t>(p2) * d2);
            for (int i = 0; i < p2; ++i) {
                const Track& track = tracks[s2_tracks[i]];
                for (int j = 0; j < d2; ++j) {
                    const Detection& det = detections[s2_detections[j]];
                    if (ctx.class_aware && track.class_id != det.class_id) {
                        block2[static_cast<std::size_t>(i) * d2 + j] = kCrossClassMarker;
                    } else {
                        block2[static_cast<std::size_t>(i) * d2 + j] =
                            track.features.cosine_cost(*det.embedding);
                        stats.cosine_evaluations += track.features.size();
                    }
                }
            }
            const CostMatrix stage2 = padded_matrix(std::move(block2), p2, d2, ctx.config.k);
            const Assignment solved2 = solve(stage2);
            stats.match_seconds += seconds_since(stage2_start);

            for (const auto& [i, j] : solved2.matches) {
                const int ti = s2_tracks[i];
                const int dj = s2_detections[j];
                const bool same_class = tracks[ti].class_id == detections[dj].class_id;
                if (same_class && stage2.at(i, j) <= ctx.config.stage2_gate) {
                    result.matches.emplace_back(ti, dj);
                    std::erase(leftover_tracks, ti);
                    std::erase(leftover_detections, dj);
                }
            }
        }
    }

    std::sort(leftover_tracks.begin(), leftover_tracks.end());
    std::sort(leftover_detections.begin(), leftover_detections.end());
    result.unmatched_tracks = std::move(leftover_tracks);
    result.unmatched_detections = std::move(leftover_detections);
    return result;
}

}  // namespace

void TrackerConfig::validate() const {
    if (!(stage1_gate > 0.0) || stage1_gate > 2.0) {
        throw std::invalid_argument("stage1_gate must lie in (0, 2]");
    }
    if (!(stage2_gate > 0.0) || stage2_gate > 2.0) {
        throw std::invalid_argument("stage2_gate must lie in (0, 2]");
    }
    if (n_init < 1) throw std::invalid_argument("n_init must be at least 1");
    if (max_age < 1) throw std::invalid_argument("max_age must be at least 1");
    if (h < 1) throw std::invalid_argument("h must be at least 1");
    if (!(k > 0.0)) throw std::invalid_argument("k must be positive");
    if (min_confidence < 0.0 || min_confidence >= 1.0) {
        throw std::invalid_argument("min_confidence must lie in [0, 1)");
    }
}

TrackerConfig load_tracker_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file: " + path);
    }

    TrackerConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected `key = value`");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "stage1_gate") {
                config.stage1_gate = std::stod(value);
            } else if (key == "stage2_gate") {
                config.stage2_gate = std::stod(value);
            } else if (key == "n_init") {
                config.n_init = std::stoi(value);
            } else if (key == "max_age") {
                config.max_age = std::stoi(value);
            } else if (key == "h") {
                config.h = std::stoi(value);
            } else if (key == "k") {
                config.k = std::stod(value);
            } else if (key == "min_confidence") {
                config.min_confidence = std::stod(value);
            } else if (key == "parallel") {
                if (value == "true" || value == "1") {
                    config.parallel = true;
                } else if (value == "false" || value == "0") {
                    config.parallel = false;
                } else {
                    throw std::invalid_argument("expected true/false");
                }
            } else {
                throw std::invalid_argument("unknown key");
            }
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": bad entry `" +
                                     key + "`: " + e.what());
        }
    }
    config.validate();
    return config;
}

std::map<int, ClassPartition> partition_by_class(const std::vector<Track>& tracks,
                                                 const std::vector<Detection>& detections) {
    std::map<int, ClassPartition> partitions;
    for (int i = 0; i < static_cast<int>(tracks.size()); ++i) {
        partitions[tracks[i].class_id].track_indices.push_back(i);
    }
    for (int j = 0; j < static_cast<int>(detections.size()); ++j) {
        partitions[detections[j].class_id].detection_indices.push_back(j);
    }
    return partitions;
}

MatchResult match_class(const std::vector<Track>& tracks, const std::vector<Detection>& detections,
                        const TrackerConfig& config, bool use_appearance,
                        ClassMatchStats* stats) {
    int class_id = 0;
    bool have_class = false;
    for (const auto& t : tracks) {
        if (!have_class) {
            class_id = t.class_id;
            have_class = true;
        } else if (t.class_id != class_id) {
            throw std::invalid_argument("match_class requires a single class");
        }
    }
    for (const auto& det : detections) {
        if (!have_class) {
            class_id = det.class_id;
            have_class = true;
        } else if (det.class_id != class_id) {
            throw std::invalid_argument("match_class requires a single class");
        }
    }

    std::vector<int> track_indices(tracks.size());
    std::vector<int> detection_indices(detections.size());
    std::iota(track_indices.begin(), track_indices.end(), 0);
    std::iota(detection_indices.begin(), detection_indices.end(), 0);

    ClassMatchStats local;
    local.class_id = class_id;
    const CascadeContext ctx{config, use_appearance, false};
    MatchResult result =
        run_cascade(tracks, track_indices, detections, detection_indices, ctx, local);
    if (stats) *stats = local;
    return result;
}

Tracker::Tracker(TrackerConfig config, RunOptions options)
    : config_(std::move(config)), options_(options) {
    config_.validate();
}

FrameResult Tracker::step(const std::vector<Detection>& detections, int frame_index) {
    if (frame_index <= last_frame_) {
        throw std::logic_error("frame index " + std::to_string(frame_index) +
                               " repeats or precedes an already processed frame");
    }

    // Acceptance threshold and input validation before any state mutation.
    std::vector<Detection> accepted;
    accepted.reserve(detections.size());
    int embedding_dim = embedding_dim_;
    for (const auto& det : detections) {
        validate_box(det.box);
        if (det.confidence < 0.0 || det.confidence > 1.0 || !std::isfinite(det.confidence)) {
            throw std::invalid_argument("detection confidence must lie in [0, 1]");
        }
        if (det.embedding.has_value()) {
            if (embedding_dim < 0) {
                embedding_dim = static_cast<int>(det.embedding->size());
            } else if (static_cast<int>(det.embedding->size()) != embedding_dim) {
                throw std::invalid_argument("detections carry embeddings of mixed dimensions");
            }
        }
        if (det.confidence >= config_.min_confidence) {
            accepted.push_back(det);
        }
    }
    embedding_dim_ = embedding_dim;
    last_frame_ = frame_index;

    for (auto& track : tracks_) {
        track.state = predict(track.state);
        track.age += 1;
    }

    // Per-class counts drive the class-aware monolithic dimension diagnostic
    // in both strategies.
    std::map<int, std::pair<int, int>> class_counts;
    for (const auto& track : tracks_) class_counts[track.class_id].first += 1;
    for (const auto& det : accepted) class_counts[det.class_id].second += 1;
    int monolithic_dim = 0;
    for (const auto& [cls, counts] : class_counts) {
        monolithic_dim += std::max(counts.first, counts.second);
    }

    std::map<int, ClassPartition> partitions;
    if (options_.strategy == MatchStrategy::PerClass) {
        partitions = partition_by_class(tracks_, accepted);
    } else {
        ClassPartition& all = partitions[-1];
        all.track_indices.resize(tracks_.size());
        all.detection_indices.resize(accepted.size());
        std::iota(all.track_indices.begin(), all.track_indices.end(), 0);
        std::iota(all.detection_indices.begin(), all.detection_indices.end(), 0);
    }

    const int partition_count = static_cast<int>(partitions.size());
    std::vector<const ClassPartition*> slots(partition_count);
    std::vector<ClassMatchStats> stats(partition_count);
    std::vector<MatchResult> matches(partition_count);
    {
        int slot = 0;
        for (const auto& [cls, partition] : partitions) {
            slots[slot] = &partition;
            stats[slot].class_id = cls;
            ++slot;
        }
    }

    const CascadeContext ctx{config_, !options_.iou_only,
                             options_.strategy == MatchStrategy::Monolithic};
    auto worker = [&](int slot) {
        matches[slot] = run_cascade(tracks_, slots[slot]->track_indices, accepted,
                                    slots[slot]->detection_indices, ctx, stats[slot]);
        // Workers own the tracks of their partition exclusively.
        for (const auto& [ti, dj] : matches[slot].matches) {
            Track& track = tracks_[ti];
            const Detection& det = accepted[dj];
            track.state = update(track.state, det.box);
            if (det.embedding.has_value()) {
                track.features.push(*det.embedding);
            }
            track.hits += 1;
            track.time_since_update = 0;
            if (track.status == TrackStatus::Tentative && track.hits >= config_.n_init) {
                track.status = TrackStatus::Confirmed;
            }
        }
        for (int ti : matches[slot].unmatched_tracks) {
            tracks_[ti].time_since_update += 1;
        }
    };

    if (config_.parallel && partition_count > 1) {
        std::vector<std::thread> threads;
        threads.reserve(partition_count);
        for (int slot = 0; slot < partition_count; ++slot) {
            threads.emplace_back(worker, slot);
        }
        for (auto& thread : threads) thread.join();
    } else {
        for (int slot = 0; slot < partition_count; ++slot) worker(slot);
    }

    // Merge phase: deletions, then new tracks in detection order.
    std::erase_if(tracks_, [this](const Track& track) {
        if (track.status == TrackStatus::Tentative) return track.time_since_update > 0;
        return track.time_since_update > config_.max_age;
    });

    std::vector<int> new_track_detections;
    for (const auto& match : matches) {
        new_track_detections.insert(new_track_detections.end(),
                                    match.unmatched_detections.begin(),
                                    match.unmatched_detections.end());
    }
    std::sort(new_track_detections.begin(), new_track_detections.end());
    for (int dj : new_track_detections) {
        const Detection& det = accepted[dj];
        Track track{next_id_++, det.class_id, initiate(det.box), FeatureHistory(config_.h),
                    TrackStatus::Tentative, 1, 0, 1};
        if (det.embedding.has_value()) {
            track.features.push(*det.embedding);
        }
        if (track.hits >= config_.n_init) {
            track.status = TrackStatus::Confirmed;
        }
        tracks_.push_back(std::move(track));
    }

    FrameResult result;
    result.frame_index = frame_index;
    for (const auto& track : tracks_) {
        if (track.confirmed() && track.time_since_update == 0) {
            result.outputs.push_back({track.id, track.class_id, state_box(track.state)});
        }
    }
    result.diagnostics.per_class = std::move(stats);
    result.diagnostics.monolithic_dim = monolithic_dim;
    for (const auto& s : result.diagnostics.per_class) {
        result.diagnostics.stage2_invocations += s.stage2_invoked ? 1 : 0;
        result.diagnostics.cosine_evaluations += s.cosine_evaluations;
    }
    return result;
}

std::vector<FrameResult> run_sequence(const std::vector<std::vector<Detection>>& detections_per_frame,
                                      const TrackerConfig& config, RunOptions options) {
    Tracker tracker(config, options);
    std::vector<FrameResult> results;
    results.reserve(detections_per_frame.size());
    for (std::size_t i = 0; i < detections_per_frame.size(); ++i) {
        results.push_back(tracker.step(detections_per_frame[i], static_cast<int>(i) + 1));
    }
    return results;
}

}  // namespace classtrack
