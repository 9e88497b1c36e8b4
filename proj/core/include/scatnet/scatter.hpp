#pragma once

#include <vector>

#include <Eigen/Core>

#include "scatnet/distribution.hpp"
#include "scatnet/network.hpp"

namespace scatnet {

/// Averaged scattering of a single vector.
///
/// tilde[m] is the layer value x~_m; output[m] is the block average A_m x~_m
/// (the final partition at m = depth). The finite energy identity holds
/// exactly: ||x||^2 = sum_{m<depth} ||A_m x~_m||^2 + ||x~_depth||^2.
struct AveragedScatter {
  LayerSequence tilde;
  LayerSequence output;
};

AveragedScatter averaged_scatter(const ScatteringNetwork& net, const Eigen::VectorXd& x);

/// Exact expected scattering of a finite-support distribution.
///
/// All atoms propagate jointly, each layer centered by the true layer mean;
/// block partitions play no role here. variances[m] is E ||X_m - E X_m||^2.
/// This is the enumeration oracle backing every expectation-level check.
struct ExpectedScatter {
  LayerSequence expectations;
  std::vector<double> variances;
  std::vector<LayerSequence> atom_paths;
};

ExpectedScatter expected_scatter_exact(const ScatteringNetwork& net,
                                       const DiscreteDistribution& dist);

/// Empirical scattering of P samples: the joint recursion in which every
/// layer is centered by the same cross-sample mean mu_bar_m.
struct EmpiricalScatter {
  LayerSequence mu_bars;
  std::vector<LayerSequence> sample_paths;
};

EmpiricalScatter empirical_scatter(const ScatteringNetwork& net,
                                   const std::vector<Eigen::VectorXd>& samples);

/// As empirical_scatter but keeping only the layer means.
LayerSequence empirical_mu_bars(const ScatteringNetwork& net,
                                const std::vector<Eigen::VectorXd>& samples);

/// Per-layer empirical variances P^{-1} sum_i ||Xbar_{i,m} - mu_bar_m||^2.
std::vector<double> empirical_variances(const EmpiricalScatter& es);

/// Mean-square error bounds for estimating E(X_m) from P samples.
///
/// tight telescopes the layer variances: P^{-1} (sum_{n<=m} sqrt(Var_n))^2,
/// where Var_n upper-bounds the tail sum_{k>n} ||E X_k||^2. coarse is
/// P^{-1} (m+1)^2 E||X||^2. truncation_residual reports Var_depth, the part
/// of the tail the truncation cannot resolve.
struct EstimationErrorBound {
  double tight;
  double coarse;
  double truncation_residual;
};

EstimationErrorBound estimation_error_bound(const ScatteringNetwork& net,
                                            const DiscreteDistribution& dist,
                                            Eigen::Index m, Eigen::Index sample_count);

}  // namespace scatnet
