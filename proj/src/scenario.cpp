// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 classtrack contributors

#include "classtrack/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace classtrack {

namespace {

// Uniform and gaussian draws built on raw mt19937_64 output, so sequences are
// identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() {  // [0, 1)
        return static_cast<double>(engine_() >> 11) * (1.0 / 9007199254740992.0);
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double gaussian() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

private:
    std::mt19937_64 engine_;
};

struct ObjectState {
    int id = 0;
    int class_id = 0;
    double width = 0.0;
    double height = 0.0;
    TrajectorySpec trajectory;
    Eigen::VectorXd base_embedding;
    bool departed = false;
};

std::pair<double, double> trajectory_position(const TrajectorySpec& t, int frames_elapsed) {
    const double time = static_cast<double>(frames_elapsed);
    if (t.angular_velocity == 0.0) {
        return {t.start_x + t.speed * time * std::cos(t.heading),
                t.start_y + t.speed * time * std::sin(t.heading)};
    }
    // Circular arc whose tangent at frame 1 points along the heading.
    const double radius = t.speed / std::abs(t.angular_velocity);
    const double side = t.angular_velocity > 0.0 ? 1.0 : -1.0;
    const double center_x = t.start_x - side * radius * std::sin(t.heading);
    const double center_y = t.start_y + side * radius * std::cos(t.heading);
    const double phi0 = std::atan2(t.start_y - center_y, t.start_x - center_x);
    const double phi = phi0 + t.angular_velocity * time;
    return {center_x + radius * std::cos(phi), center_y + radius * std::sin(phi)};
}

Eigen::VectorXd draw_base_embedding(Rng& rng, int dim, const std::vector<ObjectState>& accepted) {
    for (int attempt = 0; attempt < 10000; ++attempt) {
        Eigen::VectorXd v(dim);
        for (int i = 0; i < dim; ++i) v(i) = rng.gaussian();
        const double norm = v.norm();
        if (norm == 0.0) continue;
        v /= norm;
        bool distinct = true;
        for (const auto& other : accepted) {
            if (other.base_embedding.size() > 0 && other.base_embedding.dot(v) >= 0.5) {
                distinct = false;
                break;
            }
        }
        if (distinct) return v;
    }
    throw std::invalid_argument(
        "cannot draw base embeddings with pairwise cosine < 0.5; raise embedding_dim");
}

}  // namespace

int ScenarioSpec::total_objects() const {
    int total = 0;
    for (int count : class_counts) total += count;
    return total;
}

void ScenarioSpec::validate() const {
    for (int count : class_counts) {
        if (count < 0) throw std::invalid_argument("class counts must be non-negative");
    }
    if (total_objects() == 0) {
        throw std::invalid_argument("at least one object is required");
    }
    if (num_frames < 1) throw std::invalid_argument("num_frames must be at least 1");
    if (image_width < 1 || image_height < 1) {
        throw std::invalid_argument("image size must be positive");
    }
    if (embedding_dim < 0) throw std::invalid_argument("embedding_dim must be non-negative");
    if (embedding_noise < 0.0 || detection_noise < 0.0) {
        throw std::invalid_argument("noise stds must be non-negative");
    }
    if (!trajectories.empty() &&
        static_cast<int>(trajectories.size()) != total_objects()) {
        throw std::invalid_argument("trajectories must cover every object or be empty");
    }
    for (const auto& event : events) {
        if (event.object_id < 1 || event.object_id > total_objects()) {
            throw std::invalid_argument("event references object " +
                                        std::to_string(event.object_id) +
                                        " outside 1.." + std::to_string(total_objects()));
        }
        if (event.first_frame < 1 || event.last_frame > num_frames ||
            event.first_frame > event.last_frame) {
            throw std::invalid_argument("event frame range is outside the sequence");
        }
        if (event.kind == EventKind::Misclassify && event.wrong_class < 0) {
            throw std::invalid_argument("misclassify events need a non-negative class");
        }
    }
}

SequenceBundle generate(const ScenarioSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);

    const int total = spec.total_objects();
    std::vector<ObjectState> objects;
    objects.reserve(total);

    // Placement grid keeps objects separated so geometric matching stays
    // unambiguous unless a scenario deliberately scripts otherwise.
    const int grid_cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(total))));
    const int grid_rows = (total + grid_cols - 1) / grid_cols;
    const double margin = std::min(spec.image_width, spec.image_height) * 0.15;
    const double cell_w = (spec.image_width - 2.0 * margin) / grid_cols;
    const double cell_h = (spec.image_height - 2.0 * margin) / grid_rows;

    int object_id = 1;
    for (int class_id = 0; class_id < static_cast<int>(spec.class_counts.size()); ++class_id) {
        for (int i = 0; i < spec.class_counts[class_id]; ++i) {
            ObjectState obj;
            obj.id = object_id++;
            obj.class_id = class_id;
            const double scale = rng.uniform(0.9, 1.1);
            obj.width = (48.0 + 20.0 * (class_id % 3)) * scale;
            obj.height = (36.0 + 14.0 * (class_id % 3)) * scale;

            const int cell = obj.id - 1;
            const double cx = margin + (cell % grid_cols + 0.5) * cell_w +
                              rng.uniform(-cell_w / 8.0, cell_w / 8.0);
            const double cy = margin + (cell / grid_cols + 0.5) * cell_h +
                              rng.uniform(-cell_h / 8.0, cell_h / 8.0);

            TrajectorySpec t;
            t.start_x = cx;
            t.start_y = cy;
            t.heading = rng.uniform(0.0, 2.0 * M_PI);
            t.speed = spec.base_speed * rng.uniform(0.7, 1.3);
            if (spec.curve_rate != 0.0) {
                const double side = rng.uniform() < 0.5 ? 1.0 : -1.0;
                t.angular_velocity = spec.curve_rate * side * rng.uniform(0.8, 1.2);
            }
            obj.trajectory = t;
            objects.push_back(std::move(obj));
        }
    }
    if (!spec.trajectories.empty()) {
        for (int i = 0; i < total; ++i) objects[i].trajectory = spec.trajectories[i];
    }
    if (spec.embedding_dim > 0) {
        for (auto& obj : objects) {
            obj.base_embedding = draw_base_embedding(rng, spec.embedding_dim, objects);
        }
    }

    SequenceBundle bundle;
    bundle.detections_per_frame.resize(spec.num_frames);
    bundle.ground_truth.resize(spec.num_frames);
    bundle.metadata = {spec.num_frames, spec.image_width, spec.image_height, spec.embedding_dim};
    bundle.has_embeddings = spec.embedding_dim > 0;

    for (int frame = 1; frame <= spec.num_frames; ++frame) {
        for (auto& obj : objects) {
            if (obj.departed) continue;
            const auto [cx, cy] = trajectory_position(obj.trajectory, frame - 1);
            if (cx < 0.0 || cx > spec.image_width || cy < 0.0 || cy > spec.image_height) {
                obj.departed = true;
                continue;
            }

            BoundingBox box{cx - obj.width / 2.0, cy - obj.height / 2.0, obj.width, obj.height};
            box.x = std::clamp(box.x, 0.0, spec.image_width - box.w);
            box.y = std::clamp(box.y, 0.0, spec.image_height - box.h);
            bundle.ground_truth[frame - 1].push_back({obj.id, obj.class_id, box});

            bool suppressed = false;
            int detected_class = obj.class_id;
            for (const auto& event : spec.events) {
                if (event.object_id != obj.id || !event.covers(frame)) continue;
                if (event.kind == EventKind::Misclassify) {
                    detected_class = event.wrong_class;
                } else {
                    suppressed = true;
                }
            }

            // Noise draws are consumed for every live object, suppressed or
            // not, so scripted events never shift the other objects' data.
            Detection det;
            det.box = box;
            det.confidence = 1.0;
            if (spec.detection_noise > 0.0) {
                det.box.x += spec.detection_noise * rng.gaussian();
                det.box.y += spec.detection_noise * rng.gaussian();
                det.box.w = std::max(1.0, det.box.w + spec.detection_noise * rng.gaussian());
                det.box.h = std::max(1.0, det.box.h + spec.detection_noise * rng.gaussian());
                det.confidence = rng.uniform(0.75, 1.0);
            }
            if (spec.embedding_dim > 0) {
                Eigen::VectorXd embedding = obj.base_embedding;
                if (spec.embedding_noise > 0.0) {
                    for (int c = 0; c < embedding.size(); ++c) {
                        embedding(c) += spec.embedding_noise * rng.gaussian();
                    }
                    if (embedding.norm() < 1e-9) embedding = obj.base_embedding;
                }
                det.embedding = std::move(embedding);
            }
            det.class_id = detected_class;

            if (!suppressed) {
                bundle.detections_per_frame[frame - 1].push_back(std::move(det));
            }
        }
    }
    return bundle;
}

std::vector<ScenarioSpec> table1_suite() {
    const std::vector<std::vector<int>> distributions = {
        {2, 2, 2}, {3, 2, 1}, {1, 1, 4}, {6, 0, 0}, {0, 0, 6}, {3, 3, 3}, {4, 4, 4}};
    std::vector<ScenarioSpec> suite;
    suite.reserve(distributions.size());
    for (const auto& counts : distributions) {
        ScenarioSpec spec;
        spec.class_counts = counts;
        spec.num_frames = 200;
        spec.image_width = 1920;
        spec.image_height = 1080;
        spec.base_speed = 0.9;  // slow enough that nobody leaves the frame
        spec.embedding_dim = 16;
        spec.embedding_noise = 0.05;
        spec.detection_noise = 1.0;
        spec.seed = 7;
        suite.push_back(std::move(spec));
    }
    return suite;
}

namespace {

ScenarioSpec parse_spec_json(const nlohmann::json& j, const std::string& path) {
    ScenarioSpec spec;
    try {
        spec.class_counts = j.at("class_counts").get<std::vector<int>>();
        spec.num_frames = j.value("num_frames", spec.num_frames);
        if (j.contains("image_size")) {
            spec.image_width = j["image_size"].at(0).get<int>();
            spec.image_height = j["image_size"].at(1).get<int>();
        }
        spec.base_speed = j.value("base_speed", spec.base_speed);
        spec.curve_rate = j.value("curve_rate", spec.curve_rate);
        spec.embedding_dim = j.value("embedding_dim", spec.embedding_dim);
        spec.embedding_noise = j.value("embedding_noise", spec.embedding_noise);
        spec.detection_noise = j.value("detection_noise", spec.detection_noise);
        spec.seed = j.value("seed", spec.seed);
        if (j.contains("trajectories")) {
            for (const auto& t : j["trajectories"]) {
                TrajectorySpec out;
                out.start_x = t.at("start").at(0).get<double>();
                out.start_y = t.at("start").at(1).get<double>();
                out.speed = t.value("speed", 0.0);
                out.heading = t.value("heading", 0.0);
                out.angular_velocity = t.value("angular_velocity", 0.0);
                spec.trajectories.push_back(out);
            }
        }
        if (j.contains("events")) {
            for (const auto& e : j["events"]) {
                FrameEvent event;
                const std::string kind = e.at("kind").get<std::string>();
                if (kind == "occlusion") {
                    event.kind = EventKind::Occlusion;
                } else if (kind == "misclassify") {
                    event.kind = EventKind::Misclassify;
                } else if (kind == "dropout") {
                    event.kind = EventKind::Dropout;
                } else {
                    throw std::invalid_argument("unknown event kind: " + kind);
                }
                event.object_id = e.at("object").get<int>();
                event.first_frame = e.at("frames").at(0).get<int>();
                event.last_frame = e.at("frames").at(1).get<int>();
                if (event.kind == EventKind::Misclassify) {
                    event.wrong_class = e.at("class").get<int>();
                }
                spec.events.push_back(event);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": bad scenario spec: " + e.what());
    }
    spec.validate();
    return spec;
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open scenario spec: " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": invalid JSON: " + e.what());
    }
    return j;
}

}  // namespace

ScenarioSpec load_scenario_spec(const std::string& path) {
    const nlohmann::json j = read_json(path);
    if (!j.is_object()) {
        throw std::runtime_error(path + ": expected a scenario spec object");
    }
    return parse_spec_json(j, path);
}

std::vector<ScenarioSpec> load_scenario_suite(const std::string& path) {
    const nlohmann::json j = read_json(path);
    std::vector<ScenarioSpec> specs;
    if (j.is_object()) {
        specs.push_back(parse_spec_json(j, path));
    } else if (j.is_array()) {
        for (const auto& entry : j) {
            specs.push_back(parse_spec_json(entry, path));
        }
    } else {
        throw std::runtime_error(path + ": expected a spec object or an array of specs");
    }
    if (specs.empty()) {
        throw std::runtime_error(path + ": the suite is empty");
    }
    return specs;
}

}  // namespace classtrack
