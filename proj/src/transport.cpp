#include "rcflow/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "rcflow/common.hpp"

namespace rcflow {

namespace {

struct Cell {
  int row;
  int col;
  double flow;
};

// Spanning-tree basis over the bipartite node set {rows} + {cols}.
// Node ids: 0..m-1 rows, m..m+n-1 cols.
class Basis {
 public:
  Basis(int m, int n) : m_(m), adj_(static_cast<std::size_t>(m + n)) {}

  void add(int cell_index, const Cell& c) {
    adj_[static_cast<std::size_t>(c.row)].push_back(cell_index);
    adj_[static_cast<std::size_t>(m_ + c.col)].push_back(cell_index);
  }

  void remove(int cell_index, const Cell& c) {
    erase(static_cast<std::size_t>(c.row), cell_index);
    erase(static_cast<std::size_t>(m_ + c.col), cell_index);
  }

  const std::vector<int>& incident(int node) const {
    return adj_[static_cast<std::size_t>(node)];
  }

  int col_node(int col) const { return m_ + col; }

 private:
  void erase(std::size_t node, int cell_index) {
    auto& list = adj_[node];
    list.erase(std::find(list.begin(), list.end(), cell_index));
  }

  int m_;
  std::vector<std::vector<int>> adj_;
};

// Least-cost greedy start: allocate in cost order, union-find keeps the
// allocation a forest, zero cells complete it to a spanning tree.
std::vector<Cell> least_cost_start(const std::vector<double>& a,
                                   const std::vector<double>& b,
                                   const Eigen::MatrixXd& cost,
                                   double total_supply) {
  const int m = static_cast<int>(a.size());
  const int n = static_cast<int>(b.size());
  std::vector<int> order(static_cast<std::size_t>(m) *
                         static_cast<std::size_t>(n));
  for (std::size_t c = 0; c < order.size(); ++c) order[c] = static_cast<int>(c);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    const double cx = cost(x / n, x % n);
    const double cy = cost(y / n, y % n);
    return cx != cy ? cx < cy : x < y;
  });

  std::vector<double> rem_a(a), rem_b(b);
  std::vector<int> dsu(static_cast<std::size_t>(m + n));
  for (int i = 0; i < m + n; ++i) dsu[static_cast<std::size_t>(i)] = i;
  auto find = [&](int x) {
    while (dsu[static_cast<std::size_t>(x)] != x) {
      dsu[static_cast<std::size_t>(x)] =
          dsu[static_cast<std::size_t>(dsu[static_cast<std::size_t>(x)])];
      x = dsu[static_cast<std::size_t>(x)];
    }
    return x;
  };

  std::vector<Cell> basic;
  basic.reserve(static_cast<std::size_t>(m + n - 1));
  const double dust = 1e-15 * total_supply;
  for (int idx : order) {
    if (static_cast<int>(basic.size()) == m + n - 1) break;
    const int i = idx / n, j = idx % n;
    const double f = std::min(rem_a[static_cast<std::size_t>(i)],
                              rem_b[static_cast<std::size_t>(j)]);
    if (f <= 0.0) continue;
    const int ri = find(i), rj = find(m + j);
    if (ri == rj) continue;  // float dust would close a cycle
    basic.push_back(Cell{i, j, f});
    if ((rem_a[static_cast<std::size_t>(i)] -= f) < dust)
      rem_a[static_cast<std::size_t>(i)] = 0.0;
    if ((rem_b[static_cast<std::size_t>(j)] -= f) < dust)
      rem_b[static_cast<std::size_t>(j)] = 0.0;
    dsu[static_cast<std::size_t>(ri)] = rj;
  }
  // Degenerate completion: join remaining components with zero cells.
  for (int idx : order) {
    if (static_cast<int>(basic.size()) == m + n - 1) break;
    const int i = idx / n, j = idx % n;
    const int ri = find(i), rj = find(m + j);
    if (ri != rj) {
      basic.push_back(Cell{i, j, 0.0});
      dsu[static_cast<std::size_t>(ri)] = rj;
    }
  }
  if (static_cast<int>(basic.size()) != m + n - 1)
    throw SolverError("transportation start basis is incomplete");
  return basic;
}

// Exact flows for a given spanning-tree basis: peel leaves, each leaf's
// single incident cell carries the leaf's remaining balance.
void reflow_tree(const std::vector<double>& a, const std::vector<double>& b,
                 std::vector<Cell>& basic, int m, int n) {
  const int nodes = m + n;
  std::vector<int> degree(static_cast<std::size_t>(nodes), 0);
  std::vector<std::vector<int>> incident(static_cast<std::size_t>(nodes));
  for (int c = 0; c < static_cast<int>(basic.size()); ++c) {
    const Cell& cell = basic[static_cast<std::size_t>(c)];
    ++degree[static_cast<std::size_t>(cell.row)];
    ++degree[static_cast<std::size_t>(m + cell.col)];
    incident[static_cast<std::size_t>(cell.row)].push_back(c);
    incident[static_cast<std::size_t>(m + cell.col)].push_back(c);
  }
  std::vector<double> balance(static_cast<std::size_t>(nodes));
  for (int i = 0; i < m; ++i)
    balance[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)];
  for (int j = 0; j < n; ++j)
    balance[static_cast<std::size_t>(m + j)] = b[static_cast<std::size_t>(j)];

  std::vector<char> done_cell(basic.size(), 0);
  std::vector<int> leaves;
  for (int node = 0; node < nodes; ++node)
    if (degree[static_cast<std::size_t>(node)] == 1) leaves.push_back(node);
  while (!leaves.empty()) {
    const int node = leaves.back();
    leaves.pop_back();
    if (degree[static_cast<std::size_t>(node)] != 1) continue;
    int cell_idx = -1;
    for (int c : incident[static_cast<std::size_t>(node)])
      if (!done_cell[static_cast<std::size_t>(c)]) cell_idx = c;
    if (cell_idx < 0) continue;
    Cell& cell = basic[static_cast<std::size_t>(cell_idx)];
    const double f = std::max(0.0, balance[static_cast<std::size_t>(node)]);
    cell.flow = f;
    done_cell[static_cast<std::size_t>(cell_idx)] = 1;
    const int other = node < m ? m + cell.col : cell.row;
    balance[static_cast<std::size_t>(node)] = 0.0;
    balance[static_cast<std::size_t>(other)] -= f;
    --degree[static_cast<std::size_t>(node)];
    if (--degree[static_cast<std::size_t>(other)] == 1)
      leaves.push_back(other);
  }
}

}  // namespace

double min_cost_transport(const std::vector<double>& supply,
                          const std::vector<double>& demand,
                          const Eigen::MatrixXd& cost) {
  const int m = static_cast<int>(supply.size());
  const int n = static_cast<int>(demand.size());
  if (m == 0 || n == 0) return 0.0;
  if (cost.rows() != m || cost.cols() != n)
    throw ConfigError("cost matrix shape does not match supply/demand");

  double total_supply = 0.0, total_demand = 0.0;
  for (double s : supply) {
    if (s < 0.0) throw ConfigError("negative supply");
    total_supply += s;
  }
  for (double d : demand) {
    if (d < 0.0) throw ConfigError("negative demand");
    total_demand += d;
  }
  if (total_supply <= 0.0) return 0.0;
  const double imbalance =
      std::abs(total_supply - total_demand) / total_supply;
  if (imbalance > 1e-6)
    throw ConfigError("transportation problem is unbalanced");

  // Rescale demand so both sides match exactly.
  std::vector<double> a(supply);
  std::vector<double> b(demand);
  {
    const double scale = total_supply / total_demand;
    for (double& d : b) d *= scale;
  }

  // Graded perturbation of the marginals removes the ties that cause
  // degenerate (zero-step) pivots. Basis optimality is a property of the
  // reduced costs alone, so the perturbed optimal basis is optimal for the
  // original marginals too; exact flows are recomputed on it afterwards.
  std::vector<double> a_pert(a), b_pert(b);
  {
    const double delta = 1e-9 * total_supply / (m + n + 1);
    double added = 0.0;
    for (int i = 0; i < m; ++i) {
      const double d = delta * (i + 1);
      a_pert[static_cast<std::size_t>(i)] += d;
      added += d;
    }
    b_pert[static_cast<std::size_t>(n - 1)] += added;
  }

  std::vector<Cell> basic =
      least_cost_start(a_pert, b_pert, cost, total_supply);
  Basis basis(m, n);
  for (int c = 0; c < static_cast<int>(basic.size()); ++c)
    basis.add(c, basic[static_cast<std::size_t>(c)]);

  const double cost_scale = std::max(1.0, cost.cwiseAbs().maxCoeff());
  const double tol = 1e-12 * cost_scale;

  const int nodes = m + n;
  std::vector<double> u(static_cast<std::size_t>(m));
  std::vector<double> v(static_cast<std::size_t>(n));
  std::vector<int> parent_cell(static_cast<std::size_t>(nodes));
  std::vector<int> parent_node(static_cast<std::size_t>(nodes));
  std::vector<char> visited(static_cast<std::size_t>(nodes));
  std::vector<int> stack;
  std::vector<int> path;

  const long max_pivots = 1000L + 200L * static_cast<long>(nodes) *
                                      static_cast<long>(nodes);
  long pivots = 0;
  // Dantzig rule until a safety cap, then Bland's rule for guaranteed
  // termination.
  const long bland_after = max_pivots / 2;

  while (true) {
    if (++pivots > max_pivots)
      throw SolverError("transportation simplex exceeded pivot cap");

    // Potentials from the basis tree, u[0] anchored at 0.
    std::fill(visited.begin(), visited.end(), 0);
    stack.assign(1, 0);
    visited[0] = 1;
    u[0] = 0.0;
    while (!stack.empty()) {
      const int node = stack.back();
      stack.pop_back();
      for (int ci : basis.incident(node)) {
        const Cell& c = basic[static_cast<std::size_t>(ci)];
        const int other = node < m ? basis.col_node(c.col) : c.row;
        if (visited[static_cast<std::size_t>(other)]) continue;
        visited[static_cast<std::size_t>(other)] = 1;
        if (node < m)
          v[static_cast<std::size_t>(c.col)] =
              cost(c.row, c.col) - u[static_cast<std::size_t>(c.row)];
        else
          u[static_cast<std::size_t>(c.row)] =
              cost(c.row, c.col) - v[static_cast<std::size_t>(c.col)];
        stack.push_back(other);
      }
    }

    // Entering cell: most negative reduced cost (column-major scan matches
    // the cost layout), or first eligible under Bland's rule.
    int enter_row = -1, enter_col = -1;
    double best = -tol;
    const bool bland = pivots > bland_after;
    for (int j = 0; j < n && (enter_row < 0 || !bland); ++j) {
      const double vj = v[static_cast<std::size_t>(j)];
      for (int i = 0; i < m; ++i) {
        const double rc = cost(i, j) - u[static_cast<std::size_t>(i)] - vj;
        if (rc < best) {
          if (bland) {
            if (rc < -tol) {
              enter_row = i;
              enter_col = j;
              break;
            }
          } else {
            best = rc;
            enter_row = i;
            enter_col = j;
          }
        }
      }
    }
    if (enter_row < 0) break;  // optimal

    // Unique tree path from the entering row node to the entering col node.
    std::fill(visited.begin(), visited.end(), 0);
    std::fill(parent_cell.begin(), parent_cell.end(), -1);
    stack.assign(1, enter_row);
    visited[static_cast<std::size_t>(enter_row)] = 1;
    const int goal = basis.col_node(enter_col);
    while (!stack.empty()) {
      const int node = stack.back();
      stack.pop_back();
      if (node == goal) break;
      for (int ci : basis.incident(node)) {
        const Cell& c = basic[static_cast<std::size_t>(ci)];
        const int other = node < m ? basis.col_node(c.col) : c.row;
        if (visited[static_cast<std::size_t>(other)]) continue;
        visited[static_cast<std::size_t>(other)] = 1;
        parent_cell[static_cast<std::size_t>(other)] = ci;
        parent_node[static_cast<std::size_t>(other)] = node;
        stack.push_back(other);
      }
    }
    if (!visited[static_cast<std::size_t>(goal)])
      throw SolverError("transportation basis lost connectivity");

    // Walk back from the col node; path cells alternate -,+,-,... starting
    // with - next to the entering +.
    path.clear();
    for (int node = goal; node != enter_row;
         node = parent_node[static_cast<std::size_t>(node)])
      path.push_back(parent_cell[static_cast<std::size_t>(node)]);
    double delta = std::numeric_limits<double>::infinity();
    int leave_pos = -1;
    for (std::size_t p = 0; p < path.size(); p += 2) {
      const Cell& c = basic[static_cast<std::size_t>(path[p])];
      if (c.flow < delta ||
          (c.flow == delta && leave_pos >= 0 &&
           path[p] < path[static_cast<std::size_t>(leave_pos)])) {
        delta = c.flow;
        leave_pos = static_cast<int>(p);
      }
    }
    if (leave_pos < 0)
      throw SolverError("transportation pivot found no leaving cell");

    for (std::size_t p = 0; p < path.size(); ++p) {
      Cell& c = basic[static_cast<std::size_t>(path[p])];
      c.flow += (p % 2 == 0) ? -delta : delta;
      if (c.flow < 0.0) c.flow = 0.0;  // float dust from the subtraction
    }

    // Swap the leaving cell for the entering one in place.
    const int leave_ci = path[static_cast<std::size_t>(leave_pos)];
    Cell& slot = basic[static_cast<std::size_t>(leave_ci)];
    basis.remove(leave_ci, slot);
    slot = Cell{enter_row, enter_col, delta};
    basis.add(leave_ci, slot);
  }

  // Exact flows for the original (unperturbed) marginals on the optimal
  // basis tree.
  reflow_tree(a, b, basic, m, n);
  double total = 0.0;
  for (const Cell& c : basic) total += c.flow * cost(c.row, c.col);
  return total;
}

}  // namespace rcflow
