#include "rcflow/resistance.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>

#include "rcflow/common.hpp"

namespace rcflow {

ResistanceSolver resistance_solver_from_string(const std::string& name) {
  if (name == "cg") return ResistanceSolver::Cg;
  if (name == "cholesky") return ResistanceSolver::Cholesky;
  if (name == "dense_pinv_oracle") return ResistanceSolver::DensePinvOracle;
  throw ConfigError("unknown resistance solver: " + name);
}

std::string to_string(ResistanceSolver solver) {
  switch (solver) {
    case ResistanceSolver::Cg: return "cg";
    case ResistanceSolver::Cholesky: return "cholesky";
    case ResistanceSolver::DensePinvOracle: return "dense_pinv_oracle";
  }
  throw ConfigError("unknown resistance solver");
}

Eigen::SparseMatrix<double> perturbed_laplacian(const WeightedGraph& g,
                                                double epsilon) {
  if (!(epsilon > 0.0))
    throw ConfigError("perturbation epsilon must be > 0");
  Eigen::SparseMatrix<double> L = laplacian(g);
  Eigen::SparseMatrix<double> eye(g.n(), g.n());
  eye.setIdentity();
  L += epsilon * eye;
  return L;
}

namespace {

// Per-node right-hand sides are deflated against the constant null
// direction: solving Ltilde x = e_c - (1/n) 1 removes the 1/(n*epsilon)
// component that would otherwise swamp the per-edge combination in float.
// With x_u, x_v the deflated columns of nodes u and v,
//   R_uv = (x_u[u] - x_u[v]) + (x_v[v] - x_v[u]),
// exactly the Eq.-style expansion Linv_uu + Linv_vv - 2 Linv_uv because the
// deflation shift cancels inside each within-column difference.
template <typename SolveColumn>
std::vector<double> edge_resistances_from_columns(const WeightedGraph& g,
                                                  SolveColumn&& solve_column) {
  const int n = g.n();
  std::vector<double> half_u(static_cast<std::size_t>(g.edge_count()), 0.0);
  std::vector<double> half_v(static_cast<std::size_t>(g.edge_count()), 0.0);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t ci) {
    const int c = static_cast<int>(ci);
    if (g.degree(c) == 0) return;
    const Eigen::VectorXd col = solve_column(c);
    for (const auto& [nbr, e] : g.neighbors(c)) {
      const double diff = col[c] - col[nbr];
      if (c < nbr)
        half_u[static_cast<std::size_t>(e)] = diff;
      else
        half_v[static_cast<std::size_t>(e)] = diff;
    }
  });
  std::vector<double> r(static_cast<std::size_t>(g.edge_count()));
  for (std::size_t e = 0; e < r.size(); ++e) r[e] = half_u[e] + half_v[e];
  return r;
}

Eigen::VectorXd deflated_unit_rhs(int n, int column) {
  Eigen::VectorXd rhs = Eigen::VectorXd::Constant(n, -1.0 / n);
  rhs[column] += 1.0;
  return rhs;
}

// Above this size the Cholesky path goes dense: one blocked triangular
// solve against the identity is n-dominated (k-insensitive) and beats the
// simplicial factor once kNN fill-in sets in.
constexpr int kDenseRouteThreshold = 3000;

std::vector<double> dense_route_resistances(const WeightedGraph& g,
                                            double epsilon) {
  const int n = g.n();
  Eigen::MatrixXd Lt = Eigen::MatrixXd(laplacian(g));
  Lt.diagonal().array() += epsilon;
  const Eigen::LLT<Eigen::MatrixXd> llt(Lt);
  if (llt.info() != Eigen::Success)
    throw SolverError("dense Cholesky factorization failed");
  // W = inv(L_chol): R_uv = |W(e_u - e_v)|^2 = W_uu-ish column dots. The
  // columns of W are the triangular solves of unit vectors, so
  // R_uv = ||col_u - col_v||^2 with cancellation confined to one subtraction.
  Eigen::MatrixXd W = Eigen::MatrixXd::Identity(n, n);
  llt.matrixL().solveInPlace(W);  // W = Lchol^-1, lower triangular
  std::vector<double> r(static_cast<std::size_t>(g.edge_count()));
  parallel_for(static_cast<std::size_t>(g.edge_count()), [&](std::size_t e) {
    const Edge& ed = g.edge(static_cast<int>(e));
    // Columns of W have support in rows >= index; the difference spans
    // rows >= min(u, v).
    const int lo = std::min(ed.u, ed.v);
    const int len = n - lo;
    r[e] = (W.col(ed.u).tail(len) - W.col(ed.v).tail(len)).squaredNorm();
  });
  return r;
}

using SparseLlt = Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>;
using JacobiCg =
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                             Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>;

void factor_spd(SparseLlt& llt, const Eigen::SparseMatrix<double>& L) {
  llt.compute(L);
  if (llt.info() != Eigen::Success)
    throw SolverError("sparse Cholesky factorization failed");
}

void configure_cg(JacobiCg& cg, const CgOptions& opts, int n) {
  cg.setTolerance(opts.tolerance);
  const int max_iter =
      opts.max_iterations > 0 ? opts.max_iterations : 10 * n;
  cg.setMaxIterations(max_iter);
}

Eigen::VectorXd cg_solve_column(const Eigen::SparseMatrix<double>& L,
                                const CgOptions& opts, int column) {
  JacobiCg cg;
  cg.compute(L);
  configure_cg(cg, opts, static_cast<int>(L.rows()));
  const Eigen::VectorXd rhs =
      deflated_unit_rhs(static_cast<int>(L.rows()), column);
  Eigen::VectorXd x = cg.solve(rhs);
  if (cg.info() != Eigen::Success)
    throw SolverError("cg did not converge within " +
                      std::to_string(cg.maxIterations()) +
                      " iterations (relative residual " +
                      format_double(cg.error()) + ")");
  return x;
}

/// Pseudoinverse of the unperturbed Laplacian via full eigendecomposition.
Eigen::MatrixXd laplacian_pinv(const WeightedGraph& g, int oracle_cap) {
  if (g.n() > oracle_cap)
    throw ConfigError("dense_pinv_oracle refuses n=" + std::to_string(g.n()) +
                      " > cap " + std::to_string(oracle_cap));
  const Eigen::MatrixXd L = Eigen::MatrixXd(laplacian(g));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(L);
  if (eig.info() != Eigen::Success)
    throw SolverError("dense eigendecomposition failed");
  const Eigen::VectorXd& lam = eig.eigenvalues();
  const double lam_max = std::max(lam.cwiseAbs().maxCoeff(), 1.0);
  const double cutoff = lam_max * g.n() * 1e-14;
  Eigen::VectorXd inv_lam(lam.size());
  for (int i = 0; i < lam.size(); ++i)
    inv_lam[i] = lam[i] > cutoff ? 1.0 / lam[i] : 0.0;
  return eig.eigenvectors() * inv_lam.asDiagonal() *
         eig.eigenvectors().transpose();
}

}  // namespace

ResistanceField effective_resistance(const WeightedGraph& g, double epsilon,
                                     ResistanceSolver solver,
                                     const CgOptions& cg_opts,
                                     int oracle_cap) {
  ResistanceField field;
  field.epsilon = epsilon;
  field.solver = solver;
  field.n_components = connected_components(g).second;

  switch (solver) {
    case ResistanceSolver::Cholesky: {
      if (g.n() >= kDenseRouteThreshold) {
        field.values = dense_route_resistances(g, epsilon);
        break;
      }
      const Eigen::SparseMatrix<double> L = perturbed_laplacian(g, epsilon);
      SparseLlt llt;
      factor_spd(llt, L);
      // Columns are solved in blocks; multi-RHS triangular solves amortize
      // the factor traversal. Blocks are independent, so the per-edge
      // results do not depend on the worker count.
      const int n = g.n();
      constexpr int kBlock = 64;
      std::vector<double> half_u(static_cast<std::size_t>(g.edge_count()));
      std::vector<double> half_v(static_cast<std::size_t>(g.edge_count()));
      const std::size_t blocks =
          (static_cast<std::size_t>(n) + kBlock - 1) / kBlock;
      parallel_for(blocks, [&](std::size_t b) {
        const int begin = static_cast<int>(b) * kBlock;
        const int end = std::min(begin + kBlock, n);
        Eigen::MatrixXd rhs =
            Eigen::MatrixXd::Constant(n, end - begin, -1.0 / n);
        for (int c = begin; c < end; ++c) rhs(c, c - begin) += 1.0;
        const Eigen::MatrixXd sol = llt.solve(rhs);
        for (int c = begin; c < end; ++c) {
          for (const auto& [nbr, e] : g.neighbors(c)) {
            const double diff = sol(c, c - begin) - sol(nbr, c - begin);
            if (c < nbr)
              half_u[static_cast<std::size_t>(e)] = diff;
            else
              half_v[static_cast<std::size_t>(e)] = diff;
          }
        }
      });
      field.values.resize(half_u.size());
      for (std::size_t e = 0; e < half_u.size(); ++e)
        field.values[e] = half_u[e] + half_v[e];
      break;
    }
    case ResistanceSolver::Cg: {
      const Eigen::SparseMatrix<double> L = perturbed_laplacian(g, epsilon);
      field.values = edge_resistances_from_columns(
          g, [&](int c) { return cg_solve_column(L, cg_opts, c); });
      break;
    }
    case ResistanceSolver::DensePinvOracle: {
      const Eigen::MatrixXd pinv = laplacian_pinv(g, oracle_cap);
      field.values.resize(static_cast<std::size_t>(g.edge_count()));
      for (int e = 0; e < g.edge_count(); ++e) {
        const Edge& ed = g.edge(e);
        field.values[static_cast<std::size_t>(e)] =
            pinv(ed.u, ed.u) + pinv(ed.v, ed.v) - 2.0 * pinv(ed.u, ed.v);
      }
      break;
    }
  }
  return field;
}

double pair_resistance(const WeightedGraph& g, int u, int v, double epsilon,
                       ResistanceSolver solver, const CgOptions& cg_opts,
                       int oracle_cap) {
  if (u < 0 || v < 0 || u >= g.n() || v >= g.n() || u == v)
    throw ConfigError("pair_resistance needs two distinct node ids");
  switch (solver) {
    case ResistanceSolver::DensePinvOracle: {
      const Eigen::MatrixXd pinv = laplacian_pinv(g, oracle_cap);
      return pinv(u, u) + pinv(v, v) - 2.0 * pinv(u, v);
    }
    case ResistanceSolver::Cholesky: {
      const Eigen::SparseMatrix<double> L = perturbed_laplacian(g, epsilon);
      SparseLlt llt;
      factor_spd(llt, L);
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(g.n());
      rhs[u] = 1.0;
      rhs[v] = -1.0;
      const Eigen::VectorXd x = llt.solve(rhs);
      return x[u] - x[v];
    }
    case ResistanceSolver::Cg: {
      const Eigen::SparseMatrix<double> L = perturbed_laplacian(g, epsilon);
      JacobiCg cg;
      cg.compute(L);
      configure_cg(cg, cg_opts, g.n());
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(g.n());
      rhs[u] = 1.0;
      rhs[v] = -1.0;
      const Eigen::VectorXd x = cg.solve(rhs);
      if (cg.info() != Eigen::Success)
        throw SolverError("cg did not converge (relative residual " +
                          format_double(cg.error()) + ")");
      return x[u] - x[v];
    }
  }
  throw ConfigError("unknown resistance solver");
}

double resistance_gradient(const WeightedGraph& g, int target_edge,
                           int wrt_edge, double epsilon) {
  if (target_edge < 0 || target_edge >= g.edge_count() || wrt_edge < 0 ||
      wrt_edge >= g.edge_count())
    throw std::out_of_range("edge index out of range");
  const Edge& target = g.edge(target_edge);
  const Edge& wrt = g.edge(wrt_edge);

  const Eigen::SparseMatrix<double> L = perturbed_laplacian(g, epsilon);
  SparseLlt llt;
  factor_spd(llt, L);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(g.n());
  rhs[wrt.u] = 1.0;
  rhs[wrt.v] = -1.0;
  const Eigen::VectorXd x = llt.solve(rhs);
  // dLtilde/dw_uv = e_uv e_uv^T, so the chain rule on the inverse gives
  // dR/dw = -(e_ij^T Ltilde^-1 e_uv)^2.
  const double inner = x[target.u] - x[target.v];
  return -inner * inner;
}

double dirichlet_energy(const WeightedGraph& g, const ResistanceField& r) {
  if (static_cast<int>(r.values.size()) != g.edge_count())
    throw ConfigError("resistance field does not align with graph edges");
  double energy = 0.0;
  for (int e = 0; e < g.edge_count(); ++e) {
    const double d = 1.0 / g.edge(e).w;
    energy += r.values[static_cast<std::size_t>(e)] * d * d;
  }
  return energy;
}

}  // namespace rcflow
