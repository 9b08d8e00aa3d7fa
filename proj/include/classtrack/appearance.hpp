// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 classtrack contributors

#pragma once

#include <Eigen/Dense>
#include <deque>

namespace classtrack {

/// Ring buffer of the last `capacity` appearance embeddings pushed for one
/// track. Entries are stored as given; normalization happens inside the cost.
class FeatureHistory {
public:
    explicit FeatureHistory(int capacity);

    /// Appends f, evicting the oldest entry when full. Throws
    /// std::invalid_argument on a dimension mismatch or a zero-norm vector.
    void push(const Eigen::VectorXd& f);

    /// 1 - max cosine similarity between the query and any stored entry,
    /// in [0, 2]. Throws std::logic_error when the history is empty.
    double cosine_cost(const Eigen::VectorXd& query) const;

    bool empty() const { return entries_.empty(); }
    int size() const { return static_cast<int>(entries_.size()); }
    int capacity() const { return capacity_; }
    int dimension() const { return entries_.empty() ? 0 : static_cast<int>(entries_.front().size()); }
    const std::deque<Eigen::VectorXd>& entries() const { return entries_; }

private:
    int capacity_;
    std::deque<Eigen::VectorXd> entries_;
};

}  // namespace classtrack
