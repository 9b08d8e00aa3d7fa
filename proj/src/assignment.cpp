// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 classtrack contributors

#include "classtrack/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace classtrack {

namespace {

CostMatrix pad_block(const std::vector<double>& raw, int rows, int cols, double k) {
    if (rows < 0 || cols < 0 || (rows == 0 && cols == 0)) {
        throw std::invalid_argument("cost block must have at least one row or column");
    }
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw std::invalid_argument("padding constant k must be positive and finite");
    }
    if (raw.size() != static_cast<std::size_t>(rows) * cols) {
        throw std::invalid_argument("cost block size does not match its declared shape");
    }

    double max_cost = 0.0;
    for (double c : raw) {
        if (!std::isfinite(c) || c < 0.0) {
            throw std::invalid_argument("costs must be finite and non-negative");
        }
        max_cost = std::max(max_cost, c);
    }

    CostMatrix m;
    m.n = std::max(rows, cols);
    m.real_rows = rows;
    m.real_cols = cols;
    m.dummy_value = (raw.empty() ? 0.0 : max_cost) + k;
    m.values.assign(static_cast<std::size_t>(m.n) * m.n, m.dummy_value);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            m.at(i, j) = raw[static_cast<std::size_t>(i) * cols + j];
        }
    }
    return m;
}

struct LapResult {
    std::vector<int> row_to_col;
    std::vector<double> u;  // row potentials
    std::vector<double> v;  // column potentials
};

// Shortest-augmenting-path formulation of Kuhn-Munkres, O(n^3).
LapResult solve_lap(const CostMatrix& m) {
    const int n = m.n;
    constexpr double kInf = std::numeric_limits<double>::infinity();

    // 1-based internally; index 0 is the virtual free column.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1, 0.0);
    std::vector<int> col_row(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1, 0);

    for (int i = 1; i <= n; ++i) {
        col_row[0] = i;
        int j0 = 0;
        std::fill(minv.begin(), minv.end(), kInf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const int i0 = col_row[j0];
            int j1 = 0;
            double delta = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = m.at(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[col_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (col_row[j0] != 0);
        do {
            const int j1 = way[j0];
            col_row[j0] = col_row[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    LapResult r;
    r.row_to_col.assign(n, -1);
    r.u.assign(n, 0.0);
    r.v.assign(n, 0.0);
    for (int j = 1; j <= n; ++j) {
        if (col_row[j] != 0) r.row_to_col[col_row[j] - 1] = j - 1;
    }
    for (int i = 0; i < n; ++i) r.u[i] = u[i + 1];
    for (int j = 0; j < n; ++j) r.v[j] = v[j + 1];
    return r;
}

double tie_epsilon(const CostMatrix& m) {
    double scale = 1.0;
    for (double c : m.values) scale = std::max(scale, std::abs(c));
    return 1e-11 * scale;
}

// Iterative Tarjan over the alternating-edge digraph: rows 0..n-1, columns
// n..2n-1; matched edges point column -> row, free admissible edges
// row -> column. A free edge sits on some optimal assignment iff its
// endpoints share a strongly connected component.
class AlternatingGraph {
public:
    AlternatingGraph(int n, const std::vector<std::vector<char>>& admissible,
                     const std::vector<int>& row_to_col, const std::vector<char>& row_alive,
                     const std::vector<char>& col_alive)
        : n_(n), adj_(2 * static_cast<std::size_t>(n)) {
        for (int i = 0; i < n_; ++i) {
            if (!row_alive[i]) continue;
            for (int j = 0; j < n_; ++j) {
                if (!col_alive[j] || !admissible[i][j]) continue;
                if (row_to_col[i] == j) {
                    adj_[n_ + j].push_back(i);
                } else {
                    adj_[i].push_back(n_ + j);
                }
            }
        }
        compute_scc();
    }

    int component(int node) const { return comp_[node]; }

    // Directed path from `from` to `to`, inclusive; empty when unreachable.
    std::vector<int> path(int from, int to) const {
        std::vector<int> parent(adj_.size(), -1);
        std::vector<int> stack{from};
        parent[from] = from;
        while (!stack.empty()) {
            const int cur = stack.back();
            stack.pop_back();
            if (cur == to) break;
            for (int nxt : adj_[cur]) {
                if (parent[nxt] == -1) {
                    parent[nxt] = cur;
                    stack.push_back(nxt);
                }
            }
        }
        if (parent[to] == -1) return {};
        std::vector<int> p;
        for (int cur = to; cur != from; cur = parent[cur]) p.push_back(cur);
        p.push_back(from);
        std::reverse(p.begin(), p.end());
        return p;
    }

private:
    void compute_scc() {
        const int total = static_cast<int>(adj_.size());
        comp_.assign(total, -1);
        std::vector<int> index(total, -1), low(total, 0), on_stack(total, 0);
        std::vector<int> scc_stack;
        int next_index = 0, next_comp = 0;

        // Explicit DFS stack: (node, next child position).
        std::vector<std::pair<int, std::size_t>> dfs;
        for (int root = 0; root < total; ++root) {
            if (index[root] != -1) continue;
            dfs.emplace_back(root, 0);
            while (!dfs.empty()) {
                auto& [node, child] = dfs.back();
                if (child == 0) {
                    index[node] = low[node] = next_index++;
                    scc_stack.push_back(node);
                    on_stack[node] = 1;
                }
                if (child < adj_[node].size()) {
                    const int nxt = adj_[node][child++];
                    if (index[nxt] == -1) {
                        dfs.emplace_back(nxt, 0);
                    } else if (on_stack[nxt]) {
                        low[node] = std::min(low[node], index[nxt]);
                    }
                } else {
                    if (low[node] == index[node]) {
                        while (true) {
                            const int w = scc_stack.back();
                            scc_stack.pop_back();
                            on_stack[w] = 0;
                            comp_[w] = next_comp;
                            if (w == node) break;
                        }
                        ++next_comp;
                    }
                    const int finished = node;
                    dfs.pop_back();
                    if (!dfs.empty()) {
                        low[dfs.back().first] = std::min(low[dfs.back().first], low[finished]);
                    }
                }
            }
        }
    }

    int n_;
    std::vector<std::vector<int>> adj_;
    std::vector<int> comp_;
};

// Rewrites row_to_col into the lexicographically smallest optimal assignment:
// rows are fixed in ascending order to the smallest column that still lies on
// some optimal assignment of the remaining subproblem.
void canonicalize_ties(const CostMatrix& m, LapResult& lap) {
    const int n = m.n;
    if (n <= 1) return;
    const double eps = tie_epsilon(m);

    std::vector<std::vector<char>> admissible(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            admissible[i][j] = (m.at(i, j) - lap.u[i] - lap.v[j] <= eps) ? 1 : 0;
        }
    }

    std::vector<char> row_alive(n, 1), col_alive(n, 1);
    for (int i = 0; i < n; ++i) {
        AlternatingGraph graph(n, admissible, lap.row_to_col, row_alive, col_alive);
        const int current = lap.row_to_col[i];
        for (int j = 0; j < current; ++j) {
            if (!col_alive[j] || !admissible[i][j]) continue;
            if (graph.component(i) != graph.component(n + j)) continue;
            // Rotate the matching along the alternating cycle through (i, j).
            const auto cycle = graph.path(n + j, i);
            for (std::size_t t = 1; t + 1 < cycle.size(); t += 2) {
                lap.row_to_col[cycle[t]] = cycle[t + 1] - n;
            }
            lap.row_to_col[i] = j;
            break;
        }
        row_alive[i] = 0;
        col_alive[lap.row_to_col[i]] = 0;
    }
}

Assignment build_assignment(const CostMatrix& m, const std::vector<int>& row_to_col) {
    Assignment a;
    a.pairs.reserve(m.n);
    for (int i = 0; i < m.n; ++i) {
        const int j = row_to_col[i];
        a.pairs.emplace_back(i, j);
        a.total_cost += m.at(i, j);
        const bool genuine_row = i < m.real_rows;
        const bool genuine_col = j < m.real_cols;
        if (genuine_row && genuine_col) {
            a.matches.emplace_back(i, j);
        } else if (genuine_row) {
            a.unmatched_predictions.push_back(i);
        } else if (genuine_col) {
            a.unmatched_detections.push_back(j);
        }
    }
    std::sort(a.unmatched_detections.begin(), a.unmatched_detections.end());
    return a;
}

void check_matrix(const CostMatrix& m) {
    if (m.n <= 0 || m.values.size() != static_cast<std::size_t>(m.n) * m.n) {
        throw std::invalid_argument("cost matrix shape is inconsistent");
    }
    if (m.n != std::max(m.real_rows, m.real_cols)) {
        throw std::invalid_argument("cost matrix dimension must equal max(real_rows, real_cols)");
    }
}

}  // namespace

CostMatrix pad_costs(const std::vector<std::vector<double>>& raw, double k) {
    const int rows = static_cast<int>(raw.size());
    const int cols = rows == 0 ? 0 : static_cast<int>(raw.front().size());
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(rows) * cols);
    for (const auto& row : raw) {
        if (static_cast<int>(row.size()) != cols) {
            throw std::invalid_argument("cost block rows have unequal lengths");
        }
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return pad_block(flat, rows, cols, k);
}

CostMatrix pad_costs(const std::vector<double>& raw, int rows, int cols, double k) {
    return pad_block(raw, rows, cols, k);
}

Assignment solve(const CostMatrix& matrix) {
    check_matrix(matrix);
    LapResult lap = solve_lap(matrix);
    canonicalize_ties(matrix, lap);
    return build_assignment(matrix, lap.row_to_col);
}

Assignment brute_force_solve(const CostMatrix& matrix) {
    check_matrix(matrix);
    if (matrix.n > 9) {
        throw std::invalid_argument("brute-force oracle is limited to n <= 9");
    }

    std::vector<int> perm(matrix.n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best = perm;
    double best_cost = std::numeric_limits<double>::infinity();
    do {
        double cost = 0.0;
        for (int i = 0; i < matrix.n; ++i) cost += matrix.at(i, perm[i]);
        // Strict improvement keeps the lexicographically first optimum.
        if (cost < best_cost) {
            best_cost = cost;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    return build_assignment(matrix, best);
}

StepCounts step_count_model(const std::vector<int>& class_sizes) {
    long long total = 0;
    long long max_size = 0;
    StepCounts counts;
    for (int size : class_sizes) {
        if (size < 0) {
            throw std::invalid_argument("class sizes must be non-negative");
        }
        const long long s = size;
        total += s;
        max_size = std::max(max_size, s);
        counts.partitioned_sequential += s * s * s;
    }
    if (total == 0) {
        throw std::invalid_argument("at least one class size must be positive");
    }
    counts.monolithic = total * total * total;
    counts.partitioned_parallel = max_size * max_size * max_size;
    return counts;
}

}  // namespace classtrack
