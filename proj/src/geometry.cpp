// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 classtrack contributors

#include "classtrack/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace classtrack {

void validate_box(const BoundingBox& box) {
    if (!std::isfinite(box.x) || !std::isfinite(box.y) || !std::isfinite(box.w) ||
        !std::isfinite(box.h)) {
        throw std::invalid_argument("bounding box has non-finite coordinates");
    }
    if (box.w <= 0.0 || box.h <= 0.0) {
        throw std::invalid_argument("bounding box extent must be positive");
    }
}

double iou(const BoundingBox& a, const BoundingBox& b) {
    if (a.x == b.x && a.y == b.y && a.w == b.w && a.h == b.h) {
        return 1.0;
    }
    const double ix = std::min(a.right(), b.right()) - std::max(a.x, b.x);
    const double iy = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
    if (ix <= 0.0 || iy <= 0.0) {
        return 0.0;
    }
    const double inter = ix * iy;
    // The corner round trip (x + w) - x can land a hair off w, so the ratio
    // is clamped back into range.
    return std::clamp(inter / (a.area() + b.area() - inter), 0.0, 1.0);
}

double ciou(const BoundingBox& a, const BoundingBox& b) {
    const double overlap = iou(a, b);

    double value = overlap;
    const double dx = a.cx() - b.cx();
    const double dy = a.cy() - b.cy();
    const double rho2 = dx * dx + dy * dy;
    if (rho2 > 0.0) {
        // Diagonal of the smallest enclosing box; nonzero because w, h > 0.
        const double ex = std::max(a.right(), b.right()) - std::min(a.x, b.x);
        const double ey = std::max(a.bottom(), b.bottom()) - std::min(a.y, b.y);
        value -= rho2 / (ex * ex + ey * ey);
    }

    const double da = std::atan(a.w / a.h) - std::atan(b.w / b.h);
    if (da != 0.0) {
        const double v = (4.0 / (M_PI * M_PI)) * da * da;
        const double alpha = v / ((1.0 - overlap) + v);
        value -= alpha * v;
    }

    return std::max(value, -1.0);
}

double iou_cost(const BoundingBox& a, const BoundingBox& b) {
    return 1.0 - iou(a, b);
}

double ciou_cost(const BoundingBox& a, const BoundingBox& b) {
    return 1.0 - ciou(a, b);
}

}  // namespace classtrack
