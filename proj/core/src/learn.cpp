#include "scatnet/learn.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "scatnet/error.hpp"
#include "scatnet/random.hpp"

namespace scatnet {

namespace {

void check_state(const LayerObjectiveState& state) {
  if (state.centered_samples.rows() < 1)
    throw EmptyInputError("layer objective: no samples");
  if (state.stiefel_point.rows() % 2 != 0)
    throw DimensionError("layer objective: stacked point must have an even row count");
  if (state.stiefel_point.cols() != state.centered_samples.cols())
    throw DimensionError("layer objective: samples have dimension " +
                         std::to_string(state.centered_samples.cols()) +
                         " but the Stiefel point has " +
                         std::to_string(state.stiefel_point.cols()) + " columns");
}

double objective_impl(const LayerObjectiveState& state, double eps) {
  check_state(state);
  const Eigen::Index n_out = state.stiefel_point.rows() / 2;
  const auto a_part = state.stiefel_point.topRows(n_out);
  const auto b_part = state.stiefel_point.bottomRows(n_out);
  const Eigen::ArrayXXd re = (state.centered_samples * a_part.transpose()).array();
  const Eigen::ArrayXXd im = (state.centered_samples * b_part.transpose()).array();
  const Eigen::ArrayXXd r = (re.square() + im.square() + eps * eps).sqrt();
  const Eigen::ArrayXd col_sums = r.colwise().sum();
  const double p = static_cast<double>(state.centered_samples.rows());
  return col_sums.square().sum() / (p * p);
}

Eigen::MatrixXd tangent_project(const Eigen::MatrixXd& v, const Eigen::MatrixXd& g) {
  const Eigen::MatrixXd vtg = v.transpose() * g;
  return g - v * ((vtg + vtg.transpose()) * 0.5);
}

}  // namespace

LayerObjectiveState make_layer_state(const std::vector<Eigen::VectorXd>& centered_samples,
                                     const Eigen::MatrixXd& stiefel_point,
                                     const OptimizerConfig& config) {
  if (centered_samples.empty()) throw EmptyInputError("layer objective: no samples");
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(centered_samples.size()),
                       centered_samples.front().size());
  for (std::size_t i = 0; i < centered_samples.size(); ++i) {
    if (centered_samples[i].size() != rows.cols())
      throw DimensionError("layer objective: sample " + std::to_string(i) +
                           " has a mismatched length");
    rows.row(static_cast<Eigen::Index>(i)) = centered_samples[i];
  }
  return {std::move(rows), stiefel_point, config};
}

double stiefel_residual(const Eigen::MatrixXd& v) {
  return (v.transpose() * v - Eigen::MatrixXd::Identity(v.cols(), v.cols())).norm();
}

double objective(const LayerObjectiveState& state) { return objective_impl(state, 0.0); }

double objective_smoothed(const LayerObjectiveState& state) {
  return objective_impl(state, state.config.smoothing_eps);
}

Eigen::MatrixXd gradient(const LayerObjectiveState& state) {
  check_state(state);
  const double eps = state.config.smoothing_eps;
  if (!(eps > 0.0))
    throw InvalidArgumentError("gradient: smoothing_eps must be positive");

  const Eigen::Index n_out = state.stiefel_point.rows() / 2;
  const Eigen::MatrixXd& x = state.centered_samples;  // P x n_in
  const auto a_part = state.stiefel_point.topRows(n_out);
  const auto b_part = state.stiefel_point.bottomRows(n_out);

  const Eigen::ArrayXXd re = (x * a_part.transpose()).array();  // P x n_out
  const Eigen::ArrayXXd im = (x * b_part.transpose()).array();
  const Eigen::ArrayXXd r = (re.square() + im.square() + eps * eps).sqrt();
  const Eigen::RowVectorXd col_sums = r.colwise().sum().matrix();

  const double p = static_cast<double>(x.rows());
  const double scale = 2.0 / (p * p);
  const Eigen::MatrixXd coeff_re =
      (re / r).matrix().array().rowwise() * col_sums.array();
  const Eigen::MatrixXd coeff_im =
      (im / r).matrix().array().rowwise() * col_sums.array();

  Eigen::MatrixXd grad(state.stiefel_point.rows(), state.stiefel_point.cols());
  grad.topRows(n_out) = scale * coeff_re.transpose() * x;
  grad.bottomRows(n_out) = scale * coeff_im.transpose() * x;
  return grad;
}

OptimizeResult optimize_layer(const LayerObjectiveState& state) {
  check_state(state);
  LayerObjectiveState current = state;
  auto rng = make_rng(derive_seed(state.config.seed, 0x657363ULL));
  const auto& cfg = state.config;

  double obj = objective(current);
  if (!std::isfinite(obj)) throw NumericalError("optimize_layer: non-finite objective", 0);

  std::vector<double> trace{obj};
  double max_residual = stiefel_residual(current.stiefel_point);

  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    Eigen::MatrixXd dir = gradient(current);
    if (!dir.allFinite())
      throw NumericalError("optimize_layer: non-finite gradient", iter);
    dir = tangent_project(current.stiefel_point, dir);

    bool accepted = false;
    Eigen::MatrixXd candidate;
    double candidate_obj = obj;

    auto line_search = [&](const Eigen::MatrixXd& d, double start_step, int tries) {
      double step = start_step;
      for (int k = 0; k < tries; ++k) {
        const Eigen::MatrixXd v = orthonormalize_columns(current.stiefel_point - step * d);
        LayerObjectiveState probe = current;
        probe.stiefel_point = v;
        const double o = objective(probe);
        if (!std::isfinite(o))
          throw NumericalError("optimize_layer: non-finite objective", iter);
        if (o < obj) {
          candidate = v;
          candidate_obj = o;
          return true;
        }
        step *= cfg.shrink_factor;
      }
      return false;
    };

    if (dir.norm() > 0.0)
      accepted = line_search(dir, cfg.step_size, cfg.max_backtracks);

    if (!accepted) {
      // The gradient direction is exhausted: on flat or zero-gradient points
      // (e.g. a pairing whose moduli are constant across the samples) probe
      // random tangent directions for a strictly decreasing step.
      for (int t = 0; t < cfg.escape_tries && !accepted; ++t) {
        Eigen::MatrixXd probe_dir = tangent_project(
            current.stiefel_point,
            gaussian_matrix(rng, current.stiefel_point.rows(),
                            current.stiefel_point.cols()));
        const double norm = probe_dir.norm();
        if (norm == 0.0) continue;
        probe_dir /= norm;
        accepted = line_search(probe_dir, cfg.escape_scale, 30);
      }
    }

    if (!accepted) break;  // no strictly decreasing step exists; converged

    const double rel = (obj - candidate_obj) / std::max(obj, 1e-300);
    current.stiefel_point = std::move(candidate);
    obj = candidate_obj;
    trace.push_back(obj);
    max_residual = std::max(max_residual, stiefel_residual(current.stiefel_point));
    if (rel < cfg.rel_decrease_tol) break;
  }

  return {frame_from_stacked(current.stiefel_point), std::move(trace), max_residual};
}

GreedyBuildResult build_network_greedy(const std::vector<Eigen::VectorXd>& samples,
                                       const std::vector<Eigen::Index>& dims,
                                       const std::vector<BlockPartition>& partitions,
                                       const OptimizerConfig& config,
                                       std::uint64_t seed) {
  if (samples.empty()) throw EmptyInputError("build_network_greedy: no samples");
  if (dims.empty()) throw DimensionError("build_network_greedy: dims is empty");
  if (partitions.size() != dims.size())
    throw DimensionError("build_network_greedy: expected " +
                         std::to_string(dims.size()) + " partitions, got " +
                         std::to_string(partitions.size()));
  for (std::size_t m = 0; m < dims.size(); ++m) {
    if (partitions[m].n() != dims[m])
      throw DimensionError("layer " + std::to_string(m) + ": partition covers " +
                           std::to_string(partitions[m].n()) +
                           " coordinates, expected " + std::to_string(dims[m]));
    if (m + 1 < dims.size() && 2 * dims[m + 1] < dims[m])
      throw DimensionError("layer " + std::to_string(m + 1) + ": width " +
                           std::to_string(dims[m + 1]) +
                           " is too small for input width " + std::to_string(dims[m]));
  }
  if (samples.front().size() != dims[0])
    throw DimensionError("build_network_greedy: samples have dimension " +
                         std::to_string(samples.front().size()) + ", expected " +
                         std::to_string(dims[0]));

  const Eigen::Index p = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd cols(dims[0], p);
  for (Eigen::Index i = 0; i < p; ++i) {
    if (samples[static_cast<std::size_t>(i)].size() != dims[0])
      throw DimensionError("build_network_greedy: sample " + std::to_string(i) +
                           " has a mismatched length");
    cols.col(i) = samples[static_cast<std::size_t>(i)];
  }

  std::vector<NetworkLayer> layers;
  std::vector<std::vector<double>> traces;
  for (std::size_t m = 0; m + 1 < dims.size(); ++m) {
    const Eigen::VectorXd mu = cols.rowwise().mean();
    const Eigen::MatrixXd centered = cols.colwise() - mu;

    LayerObjectiveState state;
    state.centered_samples = centered.transpose();
    state.stiefel_point =
        random_tight_frame(dims[m], dims[m + 1], derive_seed(seed, 2 * m)).stacked();
    state.config = config;
    state.config.seed = derive_seed(seed, 2 * m + 1);

    auto result = optimize_layer(state);
    cols = result.op.apply_modulus_cols(centered);
    layers.push_back({std::move(result.op), partitions[m]});
    traces.push_back(std::move(result.trace));
  }

  return {ScatteringNetwork(std::move(layers), partitions.back()), std::move(traces)};
}

double class_separation_diagnostic(const ScatteringNetwork& net, const Mixture& classes) {
  std::vector<LayerSequence> reps;
  reps.reserve(static_cast<std::size_t>(classes.size()));
  for (const auto& c : classes.components())
    reps.push_back(expected_scatter_exact(net, c.dist).expectations);

  double total = 0.0;
  for (Eigen::Index k = 0; k < classes.size(); ++k)
    for (Eigen::Index l = 0; l < classes.size(); ++l) {
      if (k == l) continue;
      total += classes.components()[static_cast<std::size_t>(k)].prior *
               classes.components()[static_cast<std::size_t>(l)].prior *
               squared_distance(reps[static_cast<std::size_t>(k)],
                                reps[static_cast<std::size_t>(l)]);
    }
  return total;
}

}  // namespace scatnet
