// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 classtrack contributors

#include "classtrack/appearance.hpp"

#include <stdexcept>

namespace classtrack {

FeatureHistory::FeatureHistory(int capacity) : capacity_(capacity) {
    if (capacity <= 0) {
        throw std::invalid_argument("feature history capacity must be positive");
    }
}

void FeatureHistory::push(const Eigen::VectorXd& f) {
    if (!entries_.empty() && f.size() != entries_.front().size()) {
        throw std::invalid_argument("embedding dimension mismatch");
    }
    if (f.norm() == 0.0) {
        throw std::invalid_argument("zero-norm embeddings cannot be stored");
    }
    entries_.push_back(f);
    if (static_cast<int>(entries_.size()) > capacity_) {
        entries_.pop_front();
    }
}

double FeatureHistory::cosine_cost(const Eigen::VectorXd& query) const {
    if (entries_.empty()) {
        throw std::logic_error("cosine cost requires a non-empty feature history");
    }
    if (query.size() != entries_.front().size()) {
        throw std::invalid_argument("embedding dimension mismatch");
    }
    const double query_norm = query.norm();
    if (query_norm == 0.0) {
        throw std::invalid_argument("zero-norm query embedding");
    }

    double best = -1.0;
    for (const auto& entry : entries_) {
        const double cos = entry.dot(query) / (entry.norm() * query_norm);
        best = std::max(best, cos);
    }
    return 1.0 - best;
}

}  // namespace classtrack
