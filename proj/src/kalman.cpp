// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 classtrack contributors

#include "classtrack/kalman.hpp"

#include <algorithm>

namespace classtrack {

namespace {

constexpr double kMinExtent = 1e-4;  // keeps state_box valid under long dead reckoning

using Matrix48d = Eigen::Matrix<double, 4, 8>;
using Matrix4d = Eigen::Matrix<double, 4, 4>;

Matrix8d transition_matrix() {
    Matrix8d f = Matrix8d::Identity();
    for (int i = 0; i < 4; ++i) f(i, i + 4) = 1.0;
    return f;
}

Matrix48d measurement_matrix() {
    Matrix48d h = Matrix48d::Zero();
    for (int i = 0; i < 4; ++i) h(i, i) = 1.0;
    return h;
}

Matrix8d process_noise(double height, const KalmanParams& p) {
    Vector8d std;
    std << p.std_weight_position * height, p.std_weight_position * height, 1e-2,
        p.std_weight_position * height, p.std_weight_velocity * height,
        p.std_weight_velocity * height, 1e-5, p.std_weight_velocity * height;
    return std.array().square().matrix().asDiagonal();
}

Matrix4d measurement_noise(double height, const KalmanParams& p) {
    Vector4d std;
    std << p.std_weight_position * height, p.std_weight_position * height, 1e-1,
        p.std_weight_position * height;
    return std.array().square().matrix().asDiagonal();
}

void clamp_extent(Vector8d& mean) {
    mean(2) = std::max(mean(2), kMinExtent);  // aspect ratio
    mean(3) = std::max(mean(3), kMinExtent);  // height
}

void symmetrize(Matrix8d& p) {
    p = ((p + p.transpose()) * 0.5).eval();
}

}  // namespace

Vector4d to_measurement(const BoundingBox& box) {
    validate_box(box);
    Vector4d z;
    z << box.cx(), box.cy(), box.w / box.h, box.h;
    return z;
}

BoundingBox state_box(const KalmanState& state) {
    const double h = state.mean(3);
    const double w = state.mean(2) * h;
    return BoundingBox{state.mean(0) - w / 2.0, state.mean(1) - h / 2.0, w, h};
}

KalmanState initiate(const BoundingBox& box, const KalmanParams& params) {
    const Vector4d z = to_measurement(box);
    KalmanState s;
    s.mean.head<4>() = z;

    const double h = box.h;
    Vector8d std;
    std << 2.0 * params.std_weight_position * h, 2.0 * params.std_weight_position * h, 1e-2,
        2.0 * params.std_weight_position * h, 10.0 * params.std_weight_velocity * h,
        10.0 * params.std_weight_velocity * h, 1e-5, 10.0 * params.std_weight_velocity * h;
    s.covariance = std.array().square().matrix().asDiagonal();
    return s;
}

KalmanState predict(const KalmanState& state, const KalmanParams& params) {
    static const Matrix8d f = transition_matrix();
    KalmanState next;
    next.mean = f * state.mean;
    next.covariance = f * state.covariance * f.transpose() + process_noise(state.mean(3), params);
    clamp_extent(next.mean);
    symmetrize(next.covariance);
    return next;
}

KalmanState update(const KalmanState& state, const BoundingBox& box, const KalmanParams& params) {
    static const Matrix48d h = measurement_matrix();
    const Vector4d z = to_measurement(box);
    const Matrix4d r = measurement_noise(state.mean(3), params);

    const Matrix4d s = h * state.covariance * h.transpose() + r;
    const Eigen::Matrix<double, 8, 4> gain =
        s.ldlt().solve(h * state.covariance.transpose()).transpose();
    const Vector4d innovation = z - h * state.mean;

    KalmanState posterior;
    posterior.mean = state.mean + gain * innovation;
    const Matrix8d left = Matrix8d::Identity() - gain * h;
    posterior.covariance =
        left * state.covariance * left.transpose() + gain * r * gain.transpose();
    clamp_extent(posterior.mean);
    symmetrize(posterior.covariance);
    return posterior;
}

double gating_distance(const KalmanState& state, const BoundingBox& box,
                       const KalmanParams& params) {
    static const Matrix48d h = measurement_matrix();
    const Vector4d z = to_measurement(box);
    const Matrix4d s = h * state.covariance * h.transpose() + measurement_noise(state.mean(3), params);
    const Vector4d innovation = z - h * state.mean;
    return innovation.dot(s.ldlt().solve(innovation));
}

}  // namespace classtrack
