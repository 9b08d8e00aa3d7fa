// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 classtrack contributors

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "classtrack/assignment.hpp"
#include "classtrack/bench.hpp"
#include "classtrack/geometry.hpp"
#include "classtrack/ingest.hpp"
#include "classtrack/kalman.hpp"
#include "classtrack/metrics.hpp"
#include "classtrack/scenario.hpp"
#include "classtrack/tracker.hpp"

namespace py = pybind11;
using namespace classtrack;

PYBIND11_MODULE(_classtrack, m) {
    m.doc() = "class-partitioned multi-object tracking core";

    // ---- geometry -------------------------------------------------------
    py::class_<BoundingBox>(m, "BoundingBox")
        .def(py::init<double, double, double, double>(), py::arg("x"), py::arg("y"),
             py::arg("w"), py::arg("h"))
        .def_readwrite("x", &BoundingBox::x)
        .def_readwrite("y", &BoundingBox::y)
        .def_readwrite("w", &BoundingBox::w)
        .def_readwrite("h", &BoundingBox::h)
        .def("__repr__", [](const BoundingBox& b) {
            return "BoundingBox(" + std::to_string(b.x) + ", " + std::to_string(b.y) + ", " +
                   std::to_string(b.w) + ", " + std::to_string(b.h) + ")";
        });
    m.def("iou", &iou, py::arg("a"), py::arg("b"));
    m.def("ciou", &ciou, py::arg("a"), py::arg("b"));
    m.def("iou_cost", &iou_cost, py::arg("a"), py::arg("b"));
    m.def("ciou_cost", &ciou_cost, py::arg("a"), py::arg("b"));

    // ---- assignment -----------------------------------------------------
    py::class_<CostMatrix>(m, "CostMatrix")
        .def_readonly("n", &CostMatrix::n)
        .def_readonly("real_rows", &CostMatrix::real_rows)
        .def_readonly("real_cols", &CostMatrix::real_cols)
        .def_readonly("dummy_value", &CostMatrix::dummy_value)
        .def("at", [](const CostMatrix& m_, int r, int c) { return m_.at(r, c); });
    py::class_<Assignment>(m, "Assignment")
        .def_readonly("pairs", &Assignment::pairs)
        .def_readonly("total_cost", &Assignment::total_cost)
        .def_readonly("matches", &Assignment::matches)
        .def_readonly("unmatched_predictions", &Assignment::unmatched_predictions)
        .def_readonly("unmatched_detections", &Assignment::unmatched_detections);
    m.def(
        "pad_costs",
        [](const std::vector<std::vector<double>>& raw, double k) { return pad_costs(raw, k); },
        py::arg("raw"), py::arg("k") = 1.0);
    m.def("solve", &solve, py::arg("matrix"));
    m.def("brute_force_solve", &brute_force_solve, py::arg("matrix"));
    m.def(
        "step_count_model",
        [](const std::vector<int>& sizes) {
            const auto counts = step_count_model(sizes);
            return py::make_tuple(counts.monolithic, counts.partitioned_sequential,
                                  counts.partitioned_parallel);
        },
        py::arg("class_sizes"));

    // ---- motion ---------------------------------------------------------
    py::class_<KalmanState>(m, "KalmanState")
        .def_readwrite("mean", &KalmanState::mean)
        .def_readwrite("covariance", &KalmanState::covariance);
    m.def("initiate", [](const BoundingBox& b) { return initiate(b); }, py::arg("box"));
    m.def("predict", [](const KalmanState& s) { return predict(s); }, py::arg("state"));
    m.def(
        "update", [](const KalmanState& s, const BoundingBox& b) { return update(s, b); },
        py::arg("state"), py::arg("box"));
    m.def(
        "gating_distance",
        [](const KalmanState& s, const BoundingBox& b) { return gating_distance(s, b); },
        py::arg("state"), py::arg("box"));
    m.def("state_box", &state_box, py::arg("state"));

    // ---- appearance -----------------------------------------------------
    py::class_<FeatureHistory>(m, "FeatureHistory")
        .def(py::init<int>(), py::arg("capacity"))
        .def("push", &FeatureHistory::push, py::arg("embedding"))
        .def("cosine_cost", &FeatureHistory::cosine_cost, py::arg("query"))
        .def("__len__", &FeatureHistory::size)
        .def_property_readonly("capacity", &FeatureHistory::capacity);

    // ---- tracker --------------------------------------------------------
    py::class_<Detection>(m, "Detection")
        .def(py::init([](const BoundingBox& box, int class_id, double confidence,
                         std::optional<Eigen::VectorXd> embedding) {
                 return Detection{box, class_id, confidence, std::move(embedding)};
             }),
             py::arg("box"), py::arg("class_id") = 0, py::arg("confidence") = 1.0,
             py::arg("embedding") = py::none())
        .def_readwrite("box", &Detection::box)
        .def_readwrite("class_id", &Detection::class_id)
        .def_readwrite("confidence", &Detection::confidence)
        .def_readwrite("embedding", &Detection::embedding);

    py::class_<TrackerConfig>(m, "TrackerConfig")
        .def(py::init<>())
        .def_readwrite("stage1_gate", &TrackerConfig::stage1_gate)
        .def_readwrite("stage2_gate", &TrackerConfig::stage2_gate)
        .def_readwrite("n_init", &TrackerConfig::n_init)
        .def_readwrite("max_age", &TrackerConfig::max_age)
        .def_readwrite("h", &TrackerConfig::h)
        .def_readwrite("k", &TrackerConfig::k)
        .def_readwrite("min_confidence", &TrackerConfig::min_confidence)
        .def_readwrite("parallel", &TrackerConfig::parallel);
    m.def("load_tracker_config", &load_tracker_config, py::arg("path"));

    py::class_<ClassMatchStats>(m, "ClassMatchStats")
        .def_readonly("class_id", &ClassMatchStats::class_id)
        .def_readonly("track_count", &ClassMatchStats::track_count)
        .def_readonly("detection_count", &ClassMatchStats::detection_count)
        .def_readonly("stage1_dim", &ClassMatchStats::stage1_dim)
        .def_readonly("stage2_invoked", &ClassMatchStats::stage2_invoked)
        .def_readonly("cosine_evaluations", &ClassMatchStats::cosine_evaluations)
        .def_readonly("match_seconds", &ClassMatchStats::match_seconds);
    py::class_<FrameDiagnostics>(m, "FrameDiagnostics")
        .def_readonly("per_class", &FrameDiagnostics::per_class)
        .def_readonly("monolithic_dim", &FrameDiagnostics::monolithic_dim)
        .def_readonly("stage2_invocations", &FrameDiagnostics::stage2_invocations)
        .def_readonly("cosine_evaluations", &FrameDiagnostics::cosine_evaluations);
    py::class_<TrackOutput>(m, "TrackOutput")
        .def_readonly("track_id", &TrackOutput::track_id)
        .def_readonly("class_id", &TrackOutput::class_id)
        .def_readonly("box", &TrackOutput::box);
    py::class_<FrameResult>(m, "FrameResult")
        .def_readonly("frame_index", &FrameResult::frame_index)
        .def_readonly("outputs", &FrameResult::outputs)
        .def_readonly("diagnostics", &FrameResult::diagnostics);

    py::enum_<MatchStrategy>(m, "MatchStrategy")
        .value("PER_CLASS", MatchStrategy::PerClass)
        .value("MONOLITHIC", MatchStrategy::Monolithic);
    py::class_<RunOptions>(m, "RunOptions")
        .def(py::init([](MatchStrategy strategy, bool iou_only) {
                 return RunOptions{strategy, iou_only};
             }),
             py::arg("strategy") = MatchStrategy::PerClass, py::arg("iou_only") = false)
        .def_readwrite("strategy", &RunOptions::strategy)
        .def_readwrite("iou_only", &RunOptions::iou_only);

    py::class_<Tracker>(m, "Tracker")
        .def(py::init<TrackerConfig, RunOptions>(), py::arg("config") = TrackerConfig{},
             py::arg("options") = RunOptions{})
        .def("step", &Tracker::step, py::arg("detections"), py::arg("frame_index"));
    m.def("run_sequence", &run_sequence, py::arg("detections_per_frame"), py::arg("config"),
          py::arg("options") = RunOptions{});

    // ---- scenario + ingest ----------------------------------------------
    py::enum_<EventKind>(m, "EventKind")
        .value("OCCLUSION", EventKind::Occlusion)
        .value("MISCLASSIFY", EventKind::Misclassify)
        .value("DROPOUT", EventKind::Dropout);
    py::class_<FrameEvent>(m, "FrameEvent")
        .def(py::init([](EventKind kind, int object_id, int first_frame, int last_frame,
                         int wrong_class) {
                 return FrameEvent{kind, object_id, first_frame, last_frame, wrong_class};
             }),
             py::arg("kind"), py::arg("object_id"), py::arg("first_frame"),
             py::arg("last_frame"), py::arg("wrong_class") = -1);
    py::class_<TrajectorySpec>(m, "TrajectorySpec")
        .def(py::init([](double sx, double sy, double speed, double heading, double omega) {
                 return TrajectorySpec{sx, sy, speed, heading, omega};
             }),
             py::arg("start_x"), py::arg("start_y"), py::arg("speed") = 0.0,
             py::arg("heading") = 0.0, py::arg("angular_velocity") = 0.0);
    py::class_<ScenarioSpec>(m, "ScenarioSpec")
        .def(py::init<>())
        .def_readwrite("class_counts", &ScenarioSpec::class_counts)
        .def_readwrite("num_frames", &ScenarioSpec::num_frames)
        .def_readwrite("image_width", &ScenarioSpec::image_width)
        .def_readwrite("image_height", &ScenarioSpec::image_height)
        .def_readwrite("base_speed", &ScenarioSpec::base_speed)
        .def_readwrite("curve_rate", &ScenarioSpec::curve_rate)
        .def_readwrite("trajectories", &ScenarioSpec::trajectories)
        .def_readwrite("embedding_dim", &ScenarioSpec::embedding_dim)
        .def_readwrite("embedding_noise", &ScenarioSpec::embedding_noise)
        .def_readwrite("detection_noise", &ScenarioSpec::detection_noise)
        .def_readwrite("events", &ScenarioSpec::events)
        .def_readwrite("seed", &ScenarioSpec::seed);

    py::class_<SequenceMetadata>(m, "SequenceMetadata")
        .def_readonly("num_frames", &SequenceMetadata::num_frames)
        .def_readonly("image_width", &SequenceMetadata::image_width)
        .def_readonly("image_height", &SequenceMetadata::image_height)
        .def_readonly("embedding_dim", &SequenceMetadata::embedding_dim);
    py::class_<GroundTruthEntry>(m, "GroundTruthEntry")
        .def_readonly("object_id", &GroundTruthEntry::object_id)
        .def_readonly("class_id", &GroundTruthEntry::class_id)
        .def_readonly("box", &GroundTruthEntry::box);
    py::class_<SequenceBundle>(m, "SequenceBundle")
        .def_readonly("detections_per_frame", &SequenceBundle::detections_per_frame)
        .def_readonly("ground_truth", &SequenceBundle::ground_truth)
        .def_readonly("metadata", &SequenceBundle::metadata)
        .def_readonly("has_embeddings", &SequenceBundle::has_embeddings);

    m.def("generate", &generate, py::arg("spec"));
    m.def("table1_suite", &table1_suite);
    m.def("load_scenario_spec", &load_scenario_spec, py::arg("path"));
    m.def("write_sequence", &write_sequence, py::arg("bundle"), py::arg("dir"));
    m.def("load_sequence", &load_sequence, py::arg("dir"));
    m.def("write_results", &write_results, py::arg("results"), py::arg("path"));

    // ---- metrics ---------------------------------------------------------
    py::class_<TrackingMetrics>(m, "TrackingMetrics")
        .def_readonly("mota", &TrackingMetrics::mota)
        .def_readonly("motp", &TrackingMetrics::motp)
        .def_readonly("id_switches", &TrackingMetrics::id_switches)
        .def_readonly("false_positives", &TrackingMetrics::false_positives)
        .def_readonly("misses", &TrackingMetrics::misses)
        .def_readonly("gt_count", &TrackingMetrics::gt_count);
    m.def(
        "evaluate",
        [](const std::vector<FrameResult>& results,
           const std::vector<std::vector<GroundTruthEntry>>& gt, double threshold) {
            return evaluate(results, gt, threshold);
        },
        py::arg("results"), py::arg("ground_truth"), py::arg("iou_threshold") = 0.5);

    // ---- bench ------------------------------------------------------------
    py::class_<ClassTiming>(m, "ClassTiming")
        .def_readonly("mean_ms", &ClassTiming::mean_ms)
        .def_readonly("std_ms", &ClassTiming::std_ms);
    py::class_<TimingReport>(m, "TimingReport")
        .def_readonly("scenario_label", &TimingReport::scenario_label)
        .def_readonly("per_class_times", &TimingReport::per_class_times)
        .def_readonly("partitioned_total_ms", &TimingReport::partitioned_total_ms)
        .def_readonly("partitioned_sequential_ms", &TimingReport::partitioned_sequential_ms)
        .def_readonly("monolithic_mean_ms", &TimingReport::monolithic_mean_ms)
        .def_readonly("monolithic_std_ms", &TimingReport::monolithic_std_ms)
        .def_readonly("stage2_invocations", &TimingReport::stage2_invocations);
    m.def("run_benchmark", &run_benchmark, py::arg("specs"), py::arg("repetitions"),
          py::arg("config") = TrackerConfig{}, py::arg("warmup") = 5);
    m.def("emit_report", &emit_report, py::arg("reports"), py::arg("path"));
}
