// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 classtrack contributors

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace classtrack {

/// Square cost matrix for the linear assignment problem. A rectangular block
/// of p genuine prediction rows by d genuine detection columns is padded to
/// n = max(p, d) with a dummy cost that strictly dominates every genuine
/// entry, so "unmatched" outcomes stay representable.
struct CostMatrix {
    std::vector<double> values;  // row-major, n * n
    int n = 0;
    int real_rows = 0;  // p, genuine prediction rows
    int real_cols = 0;  // d, genuine detection columns
    double dummy_value = 0.0;

    double at(int row, int col) const { return values[static_cast<std::size_t>(row) * n + col]; }
    double& at(int row, int col) { return values[static_cast<std::size_t>(row) * n + col]; }
};

/// Solution of the assignment problem on a padded matrix. `pairs` is the full
/// permutation including dummy pairings; the remaining fields split it into
/// the tracking-level outcomes.
struct Assignment {
    std::vector<std::pair<int, int>> pairs;       // one (row, col) per row, row-ascending
    double total_cost = 0.0;                      // sum over all selected entries
    std::vector<std::pair<int, int>> matches;     // genuine row paired with genuine column
    std::vector<int> unmatched_predictions;       // genuine rows paired with dummy columns
    std::vector<int> unmatched_detections;        // genuine columns paired with dummy rows
};

/// Pads a p x d block of non-negative costs to a square matrix of dimension
/// max(p, d). Every padding entry equals V = max(block) + k, or k when the
/// block is empty on one side. Throws std::invalid_argument on negative or
/// non-finite costs, k <= 0, or p == d == 0.
CostMatrix pad_costs(const std::vector<std::vector<double>>& raw, double k);

/// Same, over a row-major flat block.
CostMatrix pad_costs(const std::vector<double>& raw, int rows, int cols, double k);

/// Exact minimum-cost assignment in O(n^3) (shortest augmenting paths).
/// Equal-cost optima are resolved toward the lexicographically smallest
/// column sequence (lowest column for row 0, then row 1, ...), so the output
/// is a pure function of the input.
Assignment solve(const CostMatrix& matrix);

/// Exhaustive oracle: enumerates all n! permutations with the same tie-break
/// rule as solve(). Guarded to n <= 9.
Assignment brute_force_solve(const CostMatrix& matrix);

/// Closed-form cost model for matching work, counting cubic solver steps.
struct StepCounts {
    long long monolithic = 0;             // (sum of sizes)^3
    long long partitioned_sequential = 0; // sum of size^3 per class
    long long partitioned_parallel = 0;   // max size^3 over classes
};

/// Throws std::invalid_argument when every class size is zero or any is negative.
StepCounts step_count_model(const std::vector<int>& class_sizes);

}  // namespace classtrack
