// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 classtrack contributors

#include "classtrack/ingest.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace classtrack {

namespace {

namespace fs = std::filesystem;

std::string location(const std::string& path, int line_no) {
    return path + ":" + std::to_string(line_no);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_double(const std::string& field, const std::string& path, int line_no) {
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(field, &consumed);
    } catch (const std::exception&) {
        throw std::runtime_error(location(path, line_no) + ": not a number: `" + field + "`");
    }
    while (consumed < field.size() && std::isspace(static_cast<unsigned char>(field[consumed]))) {
        ++consumed;
    }
    if (consumed != field.size() || !std::isfinite(value)) {
        throw std::runtime_error(location(path, line_no) + ": not a finite number: `" + field + "`");
    }
    return value;
}

int parse_int(const std::string& field, const std::string& path, int line_no) {
    const double value = parse_double(field, path, line_no);
    if (value != std::floor(value)) {
        throw std::runtime_error(location(path, line_no) + ": expected an integer: `" + field + "`");
    }
    return static_cast<int>(value);
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open file: " + path);
    }
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write file: " + path);
    }
    return out;
}

BoundingBox parse_box(const std::vector<std::string>& fields, std::size_t first,
                      const std::string& path, int line_no) {
    BoundingBox box{parse_double(fields[first], path, line_no),
                    parse_double(fields[first + 1], path, line_no),
                    parse_double(fields[first + 2], path, line_no),
                    parse_double(fields[first + 3], path, line_no)};
    if (box.w <= 0.0 || box.h <= 0.0) {
        throw std::runtime_error(location(path, line_no) + ": box extent must be positive");
    }
    return box;
}

std::string fmt(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    return buf;
}

}  // namespace

SequenceBundle load_detections(const std::string& path) {
    auto in = open_input(path);
    SequenceBundle bundle;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_fields(line);
        if (fields.size() != 8) {
            throw std::runtime_error(location(path, line_no) + ": expected 8 fields, got " +
                                     std::to_string(fields.size()));
        }
        const int frame = parse_int(fields[0], path, line_no);
        if (frame < 1) {
            throw std::runtime_error(location(path, line_no) + ": frame numbers start at 1");
        }
        Detection det;
        det.box = parse_box(fields, 2, path, line_no);
        det.confidence = parse_double(fields[6], path, line_no);
        det.class_id = parse_int(fields[7], path, line_no);
        if (det.confidence < 0.0 || det.confidence > 1.0) {
            throw std::runtime_error(location(path, line_no) + ": confidence must lie in [0, 1]");
        }
        if (frame > static_cast<int>(bundle.detections_per_frame.size())) {
            bundle.detections_per_frame.resize(frame);
        }
        bundle.detections_per_frame[frame - 1].push_back(std::move(det));
    }
    bundle.metadata.num_frames = static_cast<int>(bundle.detections_per_frame.size());
    return bundle;
}

void load_embeddings(const std::string& path, SequenceBundle& bundle) {
    auto in = open_input(path);
    std::string line;
    int line_no = 0;
    int dim = bundle.metadata.embedding_dim;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_fields(line);
        if (fields.size() < 3) {
            throw std::runtime_error(location(path, line_no) + ": expected frame, index and at least one component");
        }
        const int row_dim = static_cast<int>(fields.size()) - 2;
        if (dim == 0) {
            dim = row_dim;
        } else if (row_dim != dim) {
            throw std::runtime_error(location(path, line_no) + ": embedding dimension " +
                                     std::to_string(row_dim) + " does not match " +
                                     std::to_string(dim));
        }
        const int frame = parse_int(fields[0], path, line_no);
        const int index = parse_int(fields[1], path, line_no);
        if (frame < 1 || frame > static_cast<int>(bundle.detections_per_frame.size())) {
            throw std::runtime_error(location(path, line_no) + ": frame " + std::to_string(frame) +
                                     " is outside the sequence");
        }
        auto& frame_dets = bundle.detections_per_frame[frame - 1];
        if (index < 0 || index >= static_cast<int>(frame_dets.size())) {
            throw std::runtime_error(location(path, line_no) + ": detection index " +
                                     std::to_string(index) + " is out of range for frame " +
                                     std::to_string(frame));
        }
        if (frame_dets[index].embedding.has_value()) {
            throw std::runtime_error(location(path, line_no) + ": duplicate embedding for frame " +
                                     std::to_string(frame) + ", detection " + std::to_string(index));
        }
        Eigen::VectorXd embedding(dim);
        for (int i = 0; i < dim; ++i) {
            embedding(i) = parse_double(fields[i + 2], path, line_no);
        }
        frame_dets[index].embedding = std::move(embedding);
    }
    bundle.metadata.embedding_dim = dim;
    bundle.has_embeddings = dim > 0;
}

void load_ground_truth(const std::string& path, SequenceBundle& bundle) {
    auto in = open_input(path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_fields(line);
        if (fields.size() != 7) {
            throw std::runtime_error(location(path, line_no) + ": expected 7 fields, got " +
                                     std::to_string(fields.size()));
        }
        const int frame = parse_int(fields[0], path, line_no);
        if (frame < 1) {
            throw std::runtime_error(location(path, line_no) + ": frame numbers start at 1");
        }
        GroundTruthEntry entry;
        entry.object_id = parse_int(fields[1], path, line_no);
        entry.box = parse_box(fields, 2, path, line_no);
        entry.class_id = parse_int(fields[6], path, line_no);
        if (frame > static_cast<int>(bundle.ground_truth.size())) {
            bundle.ground_truth.resize(frame);
        }
        bundle.ground_truth[frame - 1].push_back(entry);
    }
    const int frames = std::max(static_cast<int>(bundle.ground_truth.size()),
                                bundle.metadata.num_frames);
    bundle.ground_truth.resize(frames);
    bundle.detections_per_frame.resize(frames);
    bundle.metadata.num_frames = frames;
}

void write_detections(const SequenceBundle& bundle, const std::string& path) {
    auto out = open_output(path);
    for (std::size_t f = 0; f < bundle.detections_per_frame.size(); ++f) {
        for (const auto& det : bundle.detections_per_frame[f]) {
            out << (f + 1) << ",-1," << fmt(det.box.x) << ',' << fmt(det.box.y) << ','
                << fmt(det.box.w) << ',' << fmt(det.box.h) << ',' << fmt(det.confidence) << ','
                << det.class_id << '\n';
        }
    }
}

void write_embeddings(const SequenceBundle& bundle, const std::string& path) {
    auto out = open_output(path);
    for (std::size_t f = 0; f < bundle.detections_per_frame.size(); ++f) {
        const auto& dets = bundle.detections_per_frame[f];
        for (std::size_t i = 0; i < dets.size(); ++i) {
            if (!dets[i].embedding.has_value()) continue;
            out << (f + 1) << ',' << i;
            for (int c = 0; c < dets[i].embedding->size(); ++c) {
                out << ',' << fmt((*dets[i].embedding)(c));
            }
            out << '\n';
        }
    }
}

void write_ground_truth(const SequenceBundle& bundle, const std::string& path) {
    auto out = open_output(path);
    for (std::size_t f = 0; f < bundle.ground_truth.size(); ++f) {
        for (const auto& entry : bundle.ground_truth[f]) {
            out << (f + 1) << ',' << entry.object_id << ',' << fmt(entry.box.x) << ','
                << fmt(entry.box.y) << ',' << fmt(entry.box.w) << ',' << fmt(entry.box.h) << ','
                << entry.class_id << '\n';
        }
    }
}

void write_results(const std::vector<FrameResult>& results, const std::string& path) {
    auto out = open_output(path);
    for (const auto& frame : results) {
        for (const auto& output : frame.outputs) {
            out << frame.frame_index << ',' << output.track_id << ',' << fmt(output.box.x) << ','
                << fmt(output.box.y) << ',' << fmt(output.box.w) << ',' << fmt(output.box.h) << ','
                << output.class_id << '\n';
        }
    }
}

std::vector<std::vector<ResultEntry>> load_results(const std::string& path) {
    auto in = open_input(path);
    std::vector<std::vector<ResultEntry>> frames;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_fields(line);
        if (fields.size() != 7) {
            throw std::runtime_error(location(path, line_no) + ": expected 7 fields, got " +
                                     std::to_string(fields.size()));
        }
        const int frame = parse_int(fields[0], path, line_no);
        if (frame < 1) {
            throw std::runtime_error(location(path, line_no) + ": frame numbers start at 1");
        }
        ResultEntry entry;
        entry.track_id = parse_int(fields[1], path, line_no);
        entry.box = parse_box(fields, 2, path, line_no);
        entry.class_id = parse_int(fields[6], path, line_no);
        if (frame > static_cast<int>(frames.size())) {
            frames.resize(frame);
        }
        frames[frame - 1].push_back(entry);
    }
    return frames;
}

void write_sequence(const SequenceBundle& bundle, const std::string& dir) {
    fs::create_directories(dir);
    const fs::path base(dir);
    write_detections(bundle, (base / "detections.csv").string());
    if (bundle.has_embeddings) {
        write_embeddings(bundle, (base / "embeddings.csv").string());
    }
    bool any_gt = false;
    for (const auto& frame : bundle.ground_truth) any_gt = any_gt || !frame.empty();
    if (any_gt) {
        write_ground_truth(bundle, (base / "ground_truth.csv").string());
    }
    nlohmann::json meta{{"num_frames", bundle.metadata.num_frames},
                        {"image_width", bundle.metadata.image_width},
                        {"image_height", bundle.metadata.image_height},
                        {"embedding_dim", bundle.metadata.embedding_dim}};
    open_output((base / "meta.json").string()) << meta.dump(2) << '\n';
}

SequenceBundle load_sequence(const std::string& dir) {
    const fs::path base(dir);
    const auto detections_path = base / "detections.csv";
    if (!fs::exists(detections_path)) {
        throw std::runtime_error("no detections.csv under " + dir);
    }
    SequenceBundle bundle = load_detections(detections_path.string());

    const auto meta_path = base / "meta.json";
    if (fs::exists(meta_path)) {
        nlohmann::json meta;
        open_input(meta_path.string()) >> meta;
        bundle.metadata.num_frames = meta.value("num_frames", bundle.metadata.num_frames);
        bundle.metadata.image_width = meta.value("image_width", 0);
        bundle.metadata.image_height = meta.value("image_height", 0);
        // Frames missing from the detection file count as empty frames up to
        // the declared frame count.
        if (bundle.metadata.num_frames > static_cast<int>(bundle.detections_per_frame.size())) {
            bundle.detections_per_frame.resize(bundle.metadata.num_frames);
        }
    }

    const auto embeddings_path = base / "embeddings.csv";
    if (fs::exists(embeddings_path)) {
        load_embeddings(embeddings_path.string(), bundle);
    }
    const auto gt_path = base / "ground_truth.csv";
    if (fs::exists(gt_path)) {
        load_ground_truth(gt_path.string(), bundle);
    }
    return bundle;
}

}  // namespace classtrack
