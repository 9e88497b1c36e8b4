#include "scatnet/scatter.hpp"

#include <cmath>
#include <string>

#include "scatnet/error.hpp"

namespace scatnet {

namespace {

struct WeightedPropagation {
  LayerSequence means;                 // weighted mean per layer
  std::vector<double> variances;       // weighted E||X_m - mean||^2
  std::vector<Eigen::MatrixXd> layers; // per layer, one column per path
};

// Joint propagation of weighted paths, each layer centered by the weighted
// mean. Covers both the exact expectation (atom weights) and the empirical
// estimator (uniform weights) recursions.
WeightedPropagation propagate_centered(const ScatteringNetwork& net,
                                       Eigen::MatrixXd cols,
                                       const Eigen::VectorXd& weights) {
  WeightedPropagation out;
  const Eigen::Index depth = net.depth();
  out.means.reserve(static_cast<std::size_t>(depth) + 1);
  out.variances.reserve(static_cast<std::size_t>(depth) + 1);
  out.layers.reserve(static_cast<std::size_t>(depth) + 1);

  for (Eigen::Index m = 0; m <= depth; ++m) {
    const Eigen::VectorXd mean = cols * weights;
    const Eigen::MatrixXd centered = cols.colwise() - mean;
    double var = 0.0;
    for (Eigen::Index i = 0; i < cols.cols(); ++i)
      var += weights[i] * centered.col(i).squaredNorm();
    out.means.push_back(mean);
    out.variances.push_back(var);
    out.layers.push_back(cols);
    if (m < depth)
      cols = net.layers()[static_cast<std::size_t>(m)].op.apply_modulus_cols(centered);
  }
  return out;
}

std::vector<LayerSequence> split_paths(const std::vector<Eigen::MatrixXd>& layers) {
  const Eigen::Index count = layers.front().cols();
  std::vector<LayerSequence> paths(static_cast<std::size_t>(count));
  for (Eigen::Index i = 0; i < count; ++i) {
    auto& path = paths[static_cast<std::size_t>(i)];
    path.reserve(layers.size());
    for (const auto& layer : layers) path.push_back(layer.col(i));
  }
  return paths;
}

}  // namespace

AveragedScatter averaged_scatter(const ScatteringNetwork& net, const Eigen::VectorXd& x) {
  if (x.size() != net.dim(0))
    throw DimensionError("averaged_scatter: input has length " +
                         std::to_string(x.size()) + ", expected " +
                         std::to_string(net.dim(0)));
  AveragedScatter result;
  const Eigen::Index depth = net.depth();
  result.tilde.reserve(static_cast<std::size_t>(depth) + 1);
  result.output.reserve(static_cast<std::size_t>(depth) + 1);

  Eigen::VectorXd current = x;
  for (Eigen::Index m = 0; m < depth; ++m) {
    const auto& layer = net.layers()[static_cast<std::size_t>(m)];
    const Eigen::VectorXd averaged = layer.partition.apply_average(current);
    result.tilde.push_back(current);
    result.output.push_back(averaged);
    current = layer.op.apply_modulus(current - averaged);
  }
  result.tilde.push_back(current);
  result.output.push_back(net.final_partition().apply_average(current));
  return result;
}

ExpectedScatter expected_scatter_exact(const ScatteringNetwork& net,
                                       const DiscreteDistribution& dist) {
  if (dist.dim() != net.dim(0))
    throw DimensionError("expected_scatter_exact: atoms have dimension " +
                         std::to_string(dist.dim()) + ", expected " +
                         std::to_string(net.dim(0)));
  Eigen::VectorXd weights(dist.size());
  for (Eigen::Index a = 0; a < dist.size(); ++a)
    weights[a] = dist.probs()[static_cast<std::size_t>(a)];

  auto prop = propagate_centered(net, dist.atoms_matrix(), weights);
  return {std::move(prop.means), std::move(prop.variances), split_paths(prop.layers)};
}

namespace {

WeightedPropagation propagate_samples(const ScatteringNetwork& net,
                                      const std::vector<Eigen::VectorXd>& samples) {
  if (samples.empty()) throw EmptyInputError("empirical_scatter: no samples");
  const Eigen::Index n0 = net.dim(0);
  Eigen::MatrixXd cols(n0, static_cast<Eigen::Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].size() != n0)
      throw DimensionError("empirical_scatter: sample " + std::to_string(i) +
                           " has length " + std::to_string(samples[i].size()) +
                           ", expected " + std::to_string(n0));
    cols.col(static_cast<Eigen::Index>(i)) = samples[i];
  }
  const Eigen::VectorXd weights =
      Eigen::VectorXd::Constant(cols.cols(), 1.0 / static_cast<double>(cols.cols()));
  return propagate_centered(net, std::move(cols), weights);
}

}  // namespace

EmpiricalScatter empirical_scatter(const ScatteringNetwork& net,
                                   const std::vector<Eigen::VectorXd>& samples) {
  auto prop = propagate_samples(net, samples);
  return {std::move(prop.means), split_paths(prop.layers)};
}

LayerSequence empirical_mu_bars(const ScatteringNetwork& net,
                                const std::vector<Eigen::VectorXd>& samples) {
  return propagate_samples(net, samples).means;
}

std::vector<double> empirical_variances(const EmpiricalScatter& es) {
  std::vector<double> vars(es.mu_bars.size(), 0.0);
  const double inv_p = 1.0 / static_cast<double>(es.sample_paths.size());
  for (const auto& path : es.sample_paths)
    for (std::size_t m = 0; m < vars.size(); ++m)
      vars[m] += inv_p * (path[m] - es.mu_bars[m]).squaredNorm();
  return vars;
}

EstimationErrorBound estimation_error_bound(const ScatteringNetwork& net,
                                            const DiscreteDistribution& dist,
                                            Eigen::Index m, Eigen::Index sample_count) {
  if (m < 0 || m > net.depth())
    throw DimensionError("estimation_error_bound: layer " + std::to_string(m) +
                         " exceeds depth " + std::to_string(net.depth()));
  if (sample_count < 1)
    throw InvalidArgumentError("estimation_error_bound: sample count must be positive");

  const auto exp = expected_scatter_exact(net, dist);
  const double inv_p = 1.0 / static_cast<double>(sample_count);

  double root_sum = 0.0;
  for (Eigen::Index n = 0; n <= m; ++n)
    root_sum += std::sqrt(exp.variances[static_cast<std::size_t>(n)]);

  const double mp1 = static_cast<double>(m) + 1.0;
  return {inv_p * root_sum * root_sum,
          inv_p * mp1 * mp1 * dist.expected_squared_norm(),
          exp.variances.back()};
}

}  // namespace scatnet
