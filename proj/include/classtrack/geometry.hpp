// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 classtrack contributors

#pragma once

namespace classtrack {

/// Axis-aligned box in pixel coordinates: top-left corner plus extent.
struct BoundingBox {
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;

    double cx() const { return x + w / 2.0; }
    double cy() const { return y + h / 2.0; }
    double right() const { return x + w; }
    double bottom() const { return y + h; }
    double area() const { return w * h; }
};

/// Throws std::invalid_argument unless w > 0, h > 0 and all fields are finite.
void validate_box(const BoundingBox& box);

/// Intersection over union, in [0, 1]. Equals 1 iff the boxes are identical.
double iou(const BoundingBox& a, const BoundingBox& b);

/// Complete IoU: IoU penalized by the normalized center distance and an
/// aspect-ratio consistency term. Floored at -1 so that ciou_cost stays
/// within [0, 2] even for far-apart boxes with mismatched aspect ratios.
double ciou(const BoundingBox& a, const BoundingBox& b);

/// 1 - iou, in [0, 1].
double iou_cost(const BoundingBox& a, const BoundingBox& b);

/// 1 - ciou, in [0, 2]. Zero iff the boxes are identical.
double ciou_cost(const BoundingBox& a, const BoundingBox& b);

}  // namespace classtrack
