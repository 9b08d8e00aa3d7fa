// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 classtrack contributors

#pragma once

#include <Eigen/Dense>

#include "classtrack/geometry.hpp"

namespace classtrack {

using Vector4d = Eigen::Matrix<double, 4, 1>;
using Vector8d = Eigen::Matrix<double, 8, 1>;
using Matrix8d = Eigen::Matrix<double, 8, 8>;

/// Constant-velocity filter state over the measurement (cx, cy, a, h) and its
/// per-frame velocities, where a = w / h. Time step is fixed at one frame.
struct KalmanState {
    Vector8d mean = Vector8d::Zero();
    Matrix8d covariance = Matrix8d::Zero();
};

/// Noise scaling relative to the box height.
struct KalmanParams {
    double std_weight_position = 1.0 / 20.0;
    double std_weight_velocity = 1.0 / 160.0;
};

Vector4d to_measurement(const BoundingBox& box);  // (cx, cy, a, h)
BoundingBox state_box(const KalmanState& state);

/// New state centered on the box with zero velocity and a height-scaled
/// diagonal covariance.
KalmanState initiate(const BoundingBox& box, const KalmanParams& params = {});

/// One constant-velocity step; covariance picks up height-scaled process noise.
KalmanState predict(const KalmanState& state, const KalmanParams& params = {});

/// Measurement correction from a matched detection box (Joseph form, so the
/// covariance stays symmetric positive-semidefinite).
KalmanState update(const KalmanState& state, const BoundingBox& box,
                   const KalmanParams& params = {});

/// Squared Mahalanobis distance of the box under the projected state
/// distribution (4 degrees of freedom).
double gating_distance(const KalmanState& state, const BoundingBox& box,
                       const KalmanParams& params = {});

}  // namespace classtrack
