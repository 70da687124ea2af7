#include "vbmot/assignment.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace vbmot {

namespace {

// rows <= cols; 1-based potentials formulation.
std::vector<int> hungarian(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  const int m = static_cast<int>(a.cols());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0), minv(m + 1);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  std::vector<char> used(m + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= m; ++j)
    if (p[j] != 0) row_to_col[static_cast<std::size_t>(p[j] - 1)] = j - 1;
  return row_to_col;
}

}  // namespace

Assignment solve_assignment(const Eigen::MatrixXd& cost) {
  if (!cost.allFinite()) throw std::invalid_argument("assignment costs must be finite");
  Assignment out;
  if (cost.rows() == 0 || cost.cols() == 0) {
    out.row_to_col.assign(static_cast<std::size_t>(cost.rows()), -1);
    return out;
  }
  if (cost.rows() <= cost.cols()) {
    out.row_to_col = hungarian(cost);
  } else {
    const std::vector<int> col_to_row = hungarian(cost.transpose());
    out.row_to_col.assign(static_cast<std::size_t>(cost.rows()), -1);
    for (std::size_t c = 0; c < col_to_row.size(); ++c)
      out.row_to_col[static_cast<std::size_t>(col_to_row[c])] = static_cast<int>(c);
  }
  for (std::size_t r = 0; r < out.row_to_col.size(); ++r)
    if (out.row_to_col[r] >= 0) out.cost += cost(static_cast<Eigen::Index>(r), out.row_to_col[r]);
  return out;
}

double solve_uniform_transport(const Eigen::MatrixXd& cost) {
  const int m = static_cast<int>(cost.rows());
  const int n = static_cast<int>(cost.cols());
  if (m == 0 || n == 0) throw std::invalid_argument("transport needs two non-empty sets");
  if (!cost.allFinite()) throw std::invalid_argument("transport costs must be finite");

  // Supplies n per source, demands m per sink; each unit carries 1/(m n).
  std::vector<long> supply(static_cast<std::size_t>(m), n), demand(static_cast<std::size_t>(n), m);
  Eigen::MatrixXd flow = Eigen::MatrixXd::Zero(m, n);
  const double inf = std::numeric_limits<double>::infinity();
  // Node ids: 0..m-1 sources, m..m+n-1 sinks.
  const int nodes = m + n;
  long remaining = static_cast<long>(m) * n;
  // Relative slack keeps rounding from creating phantom negative cycles.
  const double tol = 1e-12 * (1.0 + cost.cwiseAbs().maxCoeff());
  while (remaining > 0) {
    // Bellman-Ford from all sources with spare supply.
    std::vector<double> dist(static_cast<std::size_t>(nodes), inf);
    std::vector<int> prev(static_cast<std::size_t>(nodes), -1);
    for (int s = 0; s < m; ++s)
      if (supply[static_cast<std::size_t>(s)] > 0) dist[static_cast<std::size_t>(s)] = 0.0;
    for (int iter = 0; iter < nodes; ++iter) {
      bool changed = false;
      for (int s = 0; s < m; ++s) {
        for (int t = 0; t < n; ++t) {
          const auto si = static_cast<std::size_t>(s);
          const auto ti = static_cast<std::size_t>(m + t);
          if (dist[si] < inf && dist[si] + cost(s, t) < dist[ti] - tol) {
            dist[ti] = dist[si] + cost(s, t);
            prev[ti] = s;
            changed = true;
          }
          if (flow(s, t) > 0.5 && dist[ti] < inf && dist[ti] - cost(s, t) < dist[si] - tol) {
            dist[si] = dist[ti] - cost(s, t);
            prev[si] = m + t;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    int best = -1;
    for (int t = 0; t < n; ++t) {
      const auto ti = static_cast<std::size_t>(m + t);
      if (demand[static_cast<std::size_t>(t)] > 0 && dist[ti] < inf && (best < 0 || dist[ti] < dist[static_cast<std::size_t>(m + best)]))
        best = t;
    }
    if (best < 0) throw std::logic_error("transport: no augmenting path");
    // Walk back to find the bottleneck.
    std::vector<int> path{m + best};
    while (prev[static_cast<std::size_t>(path.back())] >= 0) {
      path.push_back(prev[static_cast<std::size_t>(path.back())]);
      if (path.size() > static_cast<std::size_t>(nodes)) throw std::logic_error("transport: cycle in shortest paths");
    }
    const int source = path.back();
    long amount = std::min(supply[static_cast<std::size_t>(source)], demand[static_cast<std::size_t>(best)]);
    for (std::size_t e = path.size() - 1; e > 0; --e) {
      const int from = path[e];
      const int to = path[e - 1];
      if (from >= m) amount = std::min(amount, static_cast<long>(flow(to, from - m) + 0.5));
    }
    for (std::size_t e = path.size() - 1; e > 0; --e) {
      const int from = path[e];
      const int to = path[e - 1];
      if (from < m)
        flow(from, to - m) += static_cast<double>(amount);
      else
        flow(to, from - m) -= static_cast<double>(amount);
    }
    supply[static_cast<std::size_t>(source)] -= amount;
    demand[static_cast<std::size_t>(best)] -= amount;
    remaining -= amount;
  }
  return (flow.array() * cost.array()).sum() / (static_cast<double>(m) * n);
}

}  // namespace vbmot
