#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "scatnet/distribution.hpp"
#include "scatnet/network.hpp"
#include "scatnet/scatter.hpp"

namespace scatnet {

struct OptimizerConfig {
  double step_size = 1.0;
  double shrink_factor = 0.5;
  int max_iters = 500;
  double smoothing_eps = 1e-6;   // modulus smoothing inside gradients only
  double rel_decrease_tol = 1e-9;
  int max_backtracks = 60;
  int escape_tries = 10;         // random tangent probes when the line search stalls
  double escape_scale = 1e-2;
  std::uint64_t seed = 0;        // seeds the escape probes
};

/// One layer's optimization problem: samples already centered by the layer
/// mean, and the current Stiefel iterate V = [psi_real; psi_imag] with
/// orthonormal columns encoding the frame operator.
struct LayerObjectiveState {
  Eigen::MatrixXd centered_samples;  // P x n_in, one sample per row
  Eigen::MatrixXd stiefel_point;     // 2*n_out x n_in
  OptimizerConfig config;
};

LayerObjectiveState make_layer_state(const std::vector<Eigen::VectorXd>& centered_samples,
                                     const Eigen::MatrixXd& stiefel_point,
                                     const OptimizerConfig& config = {});

/// Frobenius distance of V^T V from the identity.
double stiefel_residual(const Eigen::MatrixXd& v);

/// Squared norm of the mean output modulus:
/// P^{-2} sum_n (sum_i |<x_i, psi_n>|)^2. Small values mean the frame
/// concentrates the centered samples on few coordinates per realization.
double objective(const LayerObjectiveState& state);

/// Same objective with each modulus replaced by sqrt(r^2 + eps^2); this is
/// the function the analytic gradient differentiates.
double objective_smoothed(const LayerObjectiveState& state);

/// Euclidean gradient of the smoothed objective with respect to the stacked
/// Stiefel point.
Eigen::MatrixXd gradient(const LayerObjectiveState& state);

struct OptimizeResult {
  TightFrameOperator op;
  std::vector<double> trace;        // accepted objective values, non-increasing
  double max_stiefel_residual;      // worst feasibility over accepted iterates
};

/// Descent over the Stiefel manifold: step against the tangent-projected
/// gradient, retract by column orthonormalization, accept only strict
/// decreases found by backtracking. When no step along the gradient
/// decreases the objective, seeded random tangent probes look for a descent
/// direction before declaring convergence, which moves the iterate off
/// zero-gradient critical points such as symmetric pairings.
OptimizeResult optimize_layer(const LayerObjectiveState& state);

struct GreedyBuildResult {
  ScatteringNetwork net;
  std::vector<std::vector<double>> layer_traces;
};

/// Greedy layerwise construction: for each depth, propagate the samples
/// through the layers built so far, center them by the cross-sample mean and
/// optimize the next operator from a seeded random tight-frame start.
/// partitions[m] covers dims[m]; the last entry is the final partition.
GreedyBuildResult build_network_greedy(const std::vector<Eigen::VectorXd>& samples,
                                       const std::vector<Eigen::Index>& dims,
                                       const std::vector<BlockPartition>& partitions,
                                       const OptimizerConfig& config,
                                       std::uint64_t seed);

/// Average pairwise squared distance between the per-class expected
/// scattering representations, weighted by class priors. Diagnostic only: it
/// needs labels, so it cannot serve as an unsupervised objective.
double class_separation_diagnostic(const ScatteringNetwork& net, const Mixture& classes);

}  // namespace scatnet
