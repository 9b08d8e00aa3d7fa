// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 classtrack contributors

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "classtrack/kalman.hpp"

using namespace classtrack;

namespace {

double min_eigenvalue(const Matrix8d& m) {
    Eigen::SelfAdjointEigenSolver<Matrix8d> solver(m);
    return solver.eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("initiate converts the box to center, aspect, height with zero velocity") {
    const auto s = initiate({0.0, 0.0, 2.0, 2.0});
    CHECK(s.mean(0) == 1.0);
    CHECK(s.mean(1) == 1.0);
    CHECK(s.mean(2) == 1.0);
    CHECK(s.mean(3) == 2.0);
    for (int i = 4; i < 8; ++i) CHECK(s.mean(i) == 0.0);

    const auto t = initiate({10.0, 20.0, 4.0, 8.0});
    CHECK(t.mean(0) == 12.0);
    CHECK(t.mean(1) == 24.0);
    CHECK(t.mean(2) == 0.5);
    CHECK(t.mean(3) == 8.0);

    CHECK(min_eigenvalue(t.covariance) > 0.0);
}

TEST_CASE("state_box inverts initiate") {
    const BoundingBox box{10.0, 20.0, 4.0, 8.0};
    const auto back = state_box(initiate(box));
    CHECK(back.x == doctest::Approx(box.x));
    CHECK(back.y == doctest::Approx(box.y));
    CHECK(back.w == doctest::Approx(box.w));
    CHECK(back.h == doctest::Approx(box.h));
}

TEST_CASE("predict leaves a zero-velocity mean in place and inflates the covariance") {
    const auto s = initiate({0.0, 0.0, 4.0, 4.0});
    const auto p = predict(s);
    CHECK(p.mean(0) == s.mean(0));
    CHECK(p.mean(1) == s.mean(1));
    CHECK(p.covariance.trace() > s.covariance.trace());
}

TEST_CASE("predict advances the center by the velocity") {
    KalmanState s = initiate({0.0, 0.0, 2.0, 2.0});
    s.mean(4) = 0.5;  // vx
    const auto p = predict(s);
    CHECK(p.mean(0) == doctest::Approx(1.5));
}

TEST_CASE("k predicts with no update dead-reckon linearly") {
    KalmanState s = initiate({100.0, 100.0, 10.0, 20.0});
    s.mean(4) = 2.0;
    s.mean(5) = -1.5;
    const double cx0 = s.mean(0), cy0 = s.mean(1);
    for (int k = 1; k <= 12; ++k) {
        s = predict(s);
        CHECK(s.mean(0) == doctest::Approx(cx0 + 2.0 * k));
        CHECK(s.mean(1) == doctest::Approx(cy0 - 1.5 * k));
    }
}

TEST_CASE("update with the predicted box leaves the mean unchanged") {
    KalmanState s = initiate({50.0, 60.0, 12.0, 24.0});
    s = predict(s);
    const auto posterior = update(s, state_box(s));
    for (int i = 0; i < 8; ++i) {
        CHECK(posterior.mean(i) == doctest::Approx(s.mean(i)).epsilon(1e-12));
    }
}

TEST_CASE("repeated updates with a stationary box converge to it") {
    // Fixed point of the filter under a constant measurement is the
    // measurement itself. The declared noise weights trust the aspect channel
    // slowly (large measurement noise), so the horizon is generous.
    const BoundingBox target{200.0, 150.0, 30.0, 60.0};
    KalmanState s = initiate({190.0, 160.0, 36.0, 52.0});
    const Vector4d z = to_measurement(target);
    double last_error = 1e30;
    for (int i = 0; i < 100; ++i) {
        s = predict(s);
        s = update(s, target);
        if (i % 10 == 9) {
            const double error = (s.mean.head<4>() - z).cwiseAbs().maxCoeff();
            CHECK(error < last_error);  // monotone approach at coarse steps
            last_error = error;
        }
    }
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(s.mean(i) - z(i)) < 1e-3);
    }
}

TEST_CASE("updates shrink the position variance") {
    KalmanState s = initiate({10.0, 10.0, 8.0, 16.0});
    s = predict(s);
    const double prior_var_x = s.covariance(0, 0);
    const double prior_var_y = s.covariance(1, 1);
    const auto posterior = update(s, {11.0, 9.0, 8.0, 16.0});
    CHECK(posterior.covariance(0, 0) < prior_var_x);
    CHECK(posterior.covariance(1, 1) < prior_var_y);
}

TEST_CASE("covariance stays symmetric PSD across random predict/update interleavings") {
    std::mt19937 rng(31337);
    std::uniform_real_distribution<double> jitter(-5.0, 5.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);

    KalmanState s = initiate({300.0, 300.0, 40.0, 80.0});
    for (int step = 0; step < 500; ++step) {
        if (coin(rng) < 0.6) {
            s = predict(s);
        } else {
            const BoundingBox measured{300.0 + jitter(rng), 300.0 + jitter(rng),
                                       40.0 + jitter(rng) / 4.0, 80.0 + jitter(rng) / 4.0};
            s = update(s, measured);
        }
        CHECK((s.covariance - s.covariance.transpose()).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(min_eigenvalue(s.covariance) > -1e-9);
        CHECK(s.mean(3) > 0.0);
    }
}

TEST_CASE("the filter does not diverge on a noisy stationary object") {
    std::mt19937 rng(7);
    std::normal_distribution<double> noise(0.0, 0.5);

    const BoundingBox truth{400.0, 400.0, 50.0, 50.0};
    KalmanState s = initiate(truth);
    double nis_sum = 0.0;
    const int frames = 500;
    for (int f = 0; f < frames; ++f) {
        s = predict(s);
        const BoundingBox measured{truth.x + noise(rng), truth.y + noise(rng), truth.w, truth.h};
        nis_sum += gating_distance(s, measured);
        s = update(s, measured);
    }
    // 4-dof innovation: the time-averaged normalized innovation stays near 4
    // for a consistent filter; far larger values signal divergence.
    CHECK(nis_sum / frames < 20.0);
    CHECK(std::abs(s.mean(0) - truth.cx()) < 1.0);
    CHECK(std::abs(s.mean(1) - truth.cy()) < 1.0);
}
