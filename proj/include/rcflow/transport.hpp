#pragma once

#include <Eigen/Core>
#include <vector>

namespace rcflow {

/// Exact minimum-cost transportation by the transportation simplex
/// (spanning-tree basis, MODI potentials). Solves
///   min sum_ij f_ij c_ij  s.t.  sum_j f_ij = supply_i,
///                               sum_i f_ij = demand_j,  f >= 0.
/// Total supply and demand must balance (small float slack is rescaled).
/// Intended for the desk-scale supports of graph optimal transport.
double min_cost_transport(const std::vector<double>& supply,
                          const std::vector<double>& demand,
                          const Eigen::MatrixXd& cost);

}  // namespace rcflow
