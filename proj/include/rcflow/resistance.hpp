#pragma once

#include <Eigen/SparseCore>
#include <string>
#include <vector>

#include "rcflow/graph.hpp"

namespace rcflow {

enum class ResistanceSolver { Cg, Cholesky, DensePinvOracle };

ResistanceSolver resistance_solver_from_string(const std::string& name);
std::string to_string(ResistanceSolver solver);

struct CgOptions {
  double tolerance = 1e-8;  // relative residual
  int max_iterations = 0;   // 0 -> 10 * n
};

/// Per-edge effective resistances aligned with the graph edge index.
struct ResistanceField {
  std::vector<double> values;
  double epsilon = 0.0;
  ResistanceSolver solver = ResistanceSolver::Cholesky;
  int n_components = 1;  // >1 flags an epsilon-regularized disconnected graph
};

/// L + epsilon*I; symmetric positive definite.
Eigen::SparseMatrix<double> perturbed_laplacian(const WeightedGraph& g,
                                                double epsilon);

/// Effective resistance R_uv = (e_u - e_v)^T Linv (e_u - e_v) for every edge.
/// Cg and Cholesky solve the perturbed system; DensePinvOracle evaluates the
/// Moore-Penrose pseudoinverse of the unperturbed Laplacian by full
/// eigendecomposition (reference path, refuses n > oracle_cap).
ResistanceField effective_resistance(const WeightedGraph& g, double epsilon,
                                     ResistanceSolver solver,
                                     const CgOptions& cg = {},
                                     int oracle_cap = 2000);

/// Resistance between an arbitrary node pair, same conventions as above.
double pair_resistance(const WeightedGraph& g, int u, int v, double epsilon,
                       ResistanceSolver solver, const CgOptions& cg = {},
                       int oracle_cap = 2000);

/// Analytic d R(target) / d w(wrt) = -((e_i - e_j)^T Ltilde^-1 (e_u - e_v))^2.
/// Always <= 0: raising a conductance never raises any resistance.
double resistance_gradient(const WeightedGraph& g, int target_edge,
                           int wrt_edge, double epsilon);

/// Dirichlet energy sum_[edges] R * d^2 with d = 1/w.
double dirichlet_energy(const WeightedGraph& g, const ResistanceField& r);

}  // namespace rcflow
