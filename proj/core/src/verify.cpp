#include "scatnet/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "scatnet/classify.hpp"
#include "scatnet/distribution.hpp"
#include "scatnet/error.hpp"
#include "scatnet/io.hpp"
#include "scatnet/learn.hpp"
#include "scatnet/random.hpp"
#include "scatnet/scatter.hpp"

namespace scatnet::verify {

namespace {

Eigen::Index pick(std::mt19937_64& rng, Eigen::Index lo, Eigen::Index hi) {
  std::uniform_int_distribution<Eigen::Index> d(lo, hi);
  return d(rng);
}

BlockPartition random_partition(std::mt19937_64& rng, Eigen::Index n) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<Eigen::Index>> blocks;
  std::size_t at = 0;
  while (at < order.size()) {
    const std::size_t take = std::min<std::size_t>(
        static_cast<std::size_t>(pick(rng, 1, 4)), order.size() - at);
    blocks.emplace_back(order.begin() + at, order.begin() + at + take);
    at += take;
  }
  return {n, std::move(blocks)};
}

// Random chain of frame operators. block_size 0 means random partitions;
// otherwise contiguous blocks of exactly that size cap the averaging groups.
ScatteringNetwork random_network(std::mt19937_64& rng, Eigen::Index block_size = 0,
                                 Eigen::Index max_depth = 4) {
  const Eigen::Index depth = pick(rng, 1, max_depth);
  Eigen::Index n = pick(rng, 2, 10);
  std::vector<NetworkLayer> layers;
  for (Eigen::Index m = 0; m < depth; ++m) {
    const Eigen::Index n_next = pick(rng, (n + 1) / 2, std::min<Eigen::Index>(2 * n, 16));
    BlockPartition part = block_size > 0 ? BlockPartition::contiguous(n, block_size)
                                         : random_partition(rng, n);
    layers.push_back({random_tight_frame(n, n_next, rng()), std::move(part)});
    n = n_next;
  }
  BlockPartition final_part = block_size > 0 ? BlockPartition::contiguous(n, block_size)
                                             : random_partition(rng, n);
  return {std::move(layers), std::move(final_part)};
}

DiscreteDistribution random_distribution(std::mt19937_64& rng, Eigen::Index dim,
                                         Eigen::Index max_atoms = 8) {
  const Eigen::Index count = pick(rng, 2, max_atoms);
  std::vector<Eigen::VectorXd> atoms;
  for (Eigen::Index a = 0; a < count; ++a)
    atoms.push_back(gaussian_vector(rng, dim));
  std::vector<double> probs(static_cast<std::size_t>(count));
  std::uniform_real_distribution<double> u(0.1, 1.0);
  double sum = 0.0;
  for (auto& p : probs) sum += (p = u(rng));
  for (auto& p : probs) p /= sum;
  return {std::move(atoms), std::move(probs)};
}

// Depth-1 net pairing the two input coordinates; the +/-(1,1) test bed.
ScatteringNetwork pairing_testbed() {
  std::vector<NetworkLayer> layers;
  layers.push_back({pairing_operator(2, {{0, 1}}), BlockPartition::singletons(2)});
  return {std::move(layers), BlockPartition::full(1)};
}

DiscreteDistribution plus_minus_ones() {
  Eigen::VectorXd up(2), down(2);
  up << 1, 1;
  down << -1, -1;
  return {{up, down}, {0.5, 0.5}};
}

double relative(double err, double scale) { return err / std::max(scale, 1e-300); }

PropertyResult make_result(std::string name, double residual, double bound) {
  const bool pass = residual <= bound;
  return {std::move(name), pass, residual, bound};
}

}  // namespace

bool Report::all_pass() const {
  return std::all_of(properties.begin(), properties.end(),
                     [](const PropertyResult& p) { return p.pass; });
}

PropertyResult check_frame_partition_algebra(std::uint64_t seed, int instances) {
  auto rng = make_rng(derive_seed(seed, 0));
  double worst = 0.0;
  for (int i = 0; i < instances; ++i) {
    const Eigen::Index n = pick(rng, 2, 10);
    const Eigen::Index n_out = pick(rng, (n + 1) / 2, n + 2);
    const auto op = random_tight_frame(n, n_out, rng());
    const Eigen::VectorXd x = gaussian_vector(rng, n);
    const Eigen::VectorXd y = gaussian_vector(rng, n);

    // modulus preserves norms and contracts differences
    const Eigen::VectorXd mx = op.apply_modulus(x);
    worst = std::max(worst, relative(std::abs(mx.squaredNorm() - x.squaredNorm()),
                                     x.squaredNorm()));
    worst = std::max(worst, (mx - op.apply_modulus(y)).norm() - (x - y).norm());

    // a joint sign flip of one frame vector pair is invisible to the modulus
    Eigen::MatrixXd re = op.psi_real();
    Eigen::MatrixXd im = op.psi_imag();
    const Eigen::Index row = pick(rng, 0, n_out - 1);
    re.row(row) = -re.row(row);
    im.row(row) = -im.row(row);
    worst = std::max(worst,
                     (TightFrameOperator(re, im).apply_modulus(x) - mx).norm());

    // indicator pairings are exactly tight
    if (n % 2 == 0) {
      std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
      for (Eigen::Index k = 0; k < n; k += 2) pairs.emplace_back(k, k + 1);
      worst = std::max(worst, pairing_operator(n, pairs).frame_residual());
    }

    // block averaging is an orthogonal projector with a 1/M energy share
    // on nonnegative input
    const auto part = random_partition(rng, n);
    const Eigen::VectorXd avg = part.apply_average(x);
    worst = std::max(worst, (part.apply_average(avg) - avg).norm());
    worst = std::max(worst, std::abs(avg.dot(y) - x.dot(part.apply_average(y))));
    worst = std::max(
        worst, relative(std::abs(x.squaredNorm() - avg.squaredNorm() -
                                 part.residual(x).squaredNorm()),
                        x.squaredNorm()));
    const Eigen::VectorXd pos = x.cwiseAbs();
    worst = std::max(
        worst, pos.squaredNorm() / static_cast<double>(part.max_block_size()) -
                   part.apply_average(pos).squaredNorm());
  }
  return make_result("frame_partition_algebra", worst, 1e-10);
}

PropertyResult check_energy_conservation(std::uint64_t seed, int instances) {
  auto rng = make_rng(derive_seed(seed, 1));
  double worst = 0.0;
  for (int i = 0; i < instances; ++i) {
    const auto net = random_network(rng);
    const Eigen::VectorXd x = gaussian_vector(rng, net.dim(0));
    const auto s = averaged_scatter(net, x);
    double energy = s.tilde.back().squaredNorm();
    for (Eigen::Index m = 0; m < net.depth(); ++m)
      energy += s.output[static_cast<std::size_t>(m)].squaredNorm();
    worst = std::max(worst, relative(std::abs(x.squaredNorm() - energy), x.squaredNorm()));
  }
  return make_result("energy_conservation", worst, 1e-10);
}

PropertyResult check_contractivity_averaged(std::uint64_t seed, int instances) {
  auto rng = make_rng(derive_seed(seed, 2));
  double worst = -1.0;
  for (int i = 0; i < instances; ++i) {
    const auto net = random_network(rng);
    const Eigen::VectorXd x = gaussian_vector(rng, net.dim(0));
    const Eigen::VectorXd y = gaussian_vector(rng, net.dim(0));
    const auto sx = averaged_scatter(net, x);
    const auto sy = averaged_scatter(net, y);
    double out = (sx.tilde.back() - sy.tilde.back()).squaredNorm();
    for (Eigen::Index m = 0; m < net.depth(); ++m)
      out += (sx.output[static_cast<std::size_t>(m)] -
              sy.output[static_cast<std::size_t>(m)]).squaredNorm();
    const double in = (x - y).squaredNorm();
    worst = std::max(worst, relative(out - in, in));
  }
  return make_result("contractivity_averaged", worst, 1e-10);
}

PropertyResult check_contractivity_expected(std::uint64_t seed, int instances) {
  auto rng = make_rng(derive_seed(seed, 3));
  double worst = -1.0;
  for (int i = 0; i < instances; ++i) {
    const auto net = random_network(rng);
    const auto dist_x = random_distribution(rng, net.dim(0), 6);

    // Couple atom by atom: same probabilities, perturbed positions.
    std::vector<Eigen::VectorXd> y_atoms;
    for (const auto& atom : dist_x.atoms())
      y_atoms.push_back(atom + 0.5 * gaussian_vector(rng, atom.size()));
    const DiscreteDistribution dist_y(y_atoms, dist_x.probs());

    const auto ex = expected_scatter_exact(net, dist_x);
    const auto ey = expected_scatter_exact(net, dist_y);

    double out = 0.0;
    for (Eigen::Index m = 0; m < net.depth(); ++m)
      out += (ex.expectations[static_cast<std::size_t>(m)] -
              ey.expectations[static_cast<std::size_t>(m)]).squaredNorm();
    double in = 0.0;
    for (Eigen::Index a = 0; a < dist_x.size(); ++a) {
      const double p = dist_x.probs()[static_cast<std::size_t>(a)];
      out += p * (ex.atom_paths[static_cast<std::size_t>(a)].back() -
                  ey.atom_paths[static_cast<std::size_t>(a)].back()).squaredNorm();
      in += p * (dist_x.atoms()[static_cast<std::size_t>(a)] -
                 y_atoms[static_cast<std::size_t>(a)]).squaredNorm();
    }
    worst = std::max(worst, relative(out - in, in));
  }
  return make_result("contractivity_expected", worst, 1e-10);
}

PropertyResult check_decay_bound(std::uint64_t seed, int instances) {
  auto rng = make_rng(derive_seed(seed, 4));
  double worst = -1.0;
  for (int i = 0; i < instances; ++i) {
    const Eigen::Index block = (i % 2 == 0) ? 2 : 4;
    const auto net = random_network(rng, block);
    const Eigen::VectorXd x = gaussian_vector(rng, net.dim(0)).cwiseAbs();
    const auto s = averaged_scatter(net, x);
    const double rate = 1.0 - 1.0 / static_cast<double>(block);
    double allowed = x.squaredNorm();
    for (std::size_t m = 0; m < s.tilde.size(); ++m) {
      worst = std::max(worst, s.tilde[m].squaredNorm() - allowed);
      allowed *= rate;
    }
  }
  return make_result("decay_bound", worst, 1e-12);
}

PropertyResult check_expected_energy_identity(std::uint64_t seed, int instances) {
  auto rng = make_rng(derive_seed(seed, 5));
  double worst = 0.0;
  for (int i = 0; i < instances; ++i) {
    const auto net = random_network(rng);
    const auto dist = random_distribution(rng, net.dim(0));
    const auto ex = expected_scatter_exact(net, dist);

    double energy = 0.0;
    for (Eigen::Index m = 0; m < net.depth(); ++m)
      energy += ex.expectations[static_cast<std::size_t>(m)].squaredNorm();
    // E||X_depth||^2 = ||E X_depth||^2 + Var_depth
    energy += ex.expectations.back().squaredNorm() + ex.variances.back();

    const double total = dist.expected_squared_norm();
    worst = std::max(worst, relative(std::abs(total - energy), total));
  }
  return make_result("expected_energy_identity", worst, 1e-10);
}

PropertyResult check_variance_identity(std::uint64_t seed, int instances) {
  auto rng = make_rng(derive_seed(seed, 6));
  double worst = 0.0;
  for (int i = 0; i < instances; ++i) {
    const auto net = random_network(rng);
    const auto dist = random_distribution(rng, net.dim(0));
    const auto ex = expected_scatter_exact(net, dist);
    for (Eigen::Index m = 0; m < net.depth(); ++m) {
      const double drop = ex.variances[static_cast<std::size_t>(m)] -
                          ex.variances[static_cast<std::size_t>(m) + 1];
      const double gain =
          ex.expectations[static_cast<std::size_t>(m) + 1].squaredNorm();
      worst = std::max(
          worst, relative(std::abs(drop - gain),
                          std::max(1.0, ex.variances[static_cast<std::size_t>(m)])));
    }
  }
  return make_result("variance_identity", worst, 1e-10);
}

PropertyResult check_empirical_variance_identity(std::uint64_t seed, int instances) {
  auto rng = make_rng(derive_seed(seed, 18));
  double worst = 0.0;
  for (int i = 0; i < instances; ++i) {
    const auto net = random_network(rng);
    std::vector<Eigen::VectorXd> samples;
    const int count = 4 + static_cast<int>(rng() % 20);
    for (int s = 0; s < count; ++s)
      samples.push_back(gaussian_vector(rng, net.dim(0)));

    const auto es = empirical_scatter(net, samples);
    const auto vars = empirical_variances(es);
    for (std::size_t m = 0; m + 1 < vars.size(); ++m) {
      const double drop = vars[m] - vars[m + 1];
      const double gain = es.mu_bars[m + 1].squaredNorm();
      worst = std::max(worst, relative(std::abs(drop - gain), std::max(1.0, vars[m])));
    }
  }
  return make_result("empirical_variance_identity", worst, 1e-10);
}

namespace {

struct McInstance {
  ScatteringNetwork net;
  DiscreteDistribution dist;
};

std::vector<McInstance> mc_instances(std::mt19937_64& rng) {
  std::vector<McInstance> out;
  out.push_back({pairing_testbed(), plus_minus_ones()});
  for (int i = 0; i < 3; ++i) {
    auto net = random_network(rng, 0, 3);
    auto dist = random_distribution(rng, net.dim(0), 6);
    out.push_back({std::move(net), std::move(dist)});
  }
  return out;
}

}  // namespace

PropertyResult check_estimation_error_mc(std::uint64_t seed, int trials) {
  auto rng = make_rng(derive_seed(seed, 7));
  double worst = -1e300;
  for (const auto& inst : mc_instances(rng)) {
    const std::size_t levels = static_cast<std::size_t>(inst.net.depth()) + 1;
    const auto exp = expected_scatter_exact(inst.net, inst.dist);
    for (const Eigen::Index p : {Eigen::Index(10), Eigen::Index(100)}) {
      std::vector<double> sum(levels, 0.0), sum_sq(levels, 0.0);
      for (int t = 0; t < trials; ++t) {
        const auto mu = empirical_mu_bars(inst.net, inst.dist.draw(rng, p));
        for (std::size_t m = 0; m < levels; ++m) {
          const double err = (mu[m] - exp.expectations[m]).squaredNorm();
          sum[m] += err;
          sum_sq[m] += err * err;
        }
      }
      for (std::size_t m = 0; m < levels; ++m) {
        const double mean = sum[m] / trials;
        const double var = std::max(0.0, sum_sq[m] / trials - mean * mean);
        const double se = std::sqrt(var / trials);
        const auto bound = estimation_error_bound(
            inst.net, inst.dist, static_cast<Eigen::Index>(m), p);
        worst = std::max(worst, mean - bound.tight - 3.0 * se);
      }
    }
  }
  return make_result("estimation_error_mc", worst, 0.0);
}

PropertyResult check_estimation_bound_order(std::uint64_t seed, int instances) {
  auto rng = make_rng(derive_seed(seed, 8));
  std::vector<McInstance> cases = mc_instances(rng);
  while (static_cast<int>(cases.size()) < instances) {
    auto net = random_network(rng, 0, 3);
    auto dist = random_distribution(rng, net.dim(0), 6);
    cases.push_back({std::move(net), std::move(dist)});
  }
  double worst = -1.0;
  for (const auto& inst : cases)
    for (Eigen::Index m = 0; m <= inst.net.depth(); ++m) {
      const auto b = estimation_error_bound(inst.net, inst.dist, m, 10);
      worst = std::max(worst, relative(b.tight - b.coarse, b.coarse));
    }
  return make_result("estimation_bound_order", worst, 1e-12);
}

PropertyResult check_template_error_bound(std::uint64_t seed, int instances) {
  auto rng = make_rng(derive_seed(seed, 9));
  double worst = -1.0;
  for (int i = 0; i < instances; ++i) {
    const auto net = random_network(rng);
    const auto dist = random_distribution(rng, net.dim(0), 6);
    const auto check = template_error_bound(net, dist);
    for (std::size_t m = 0; m < check.lhs.size(); ++m)
      worst = std::max(worst, check.lhs[m] - check.rhs[m]);
  }
  return make_result("template_error_bound", worst, 1e-10);
}

PropertyResult check_gradient_finite_difference(std::uint64_t seed, int points) {
  auto rng = make_rng(derive_seed(seed, 10));
  const double h = 1e-6;
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const Eigen::Index n_in = pick(rng, 3, 6);
    const Eigen::Index n_out = pick(rng, (n_in + 1) / 2, n_in + 1);
    const Eigen::Index p = pick(rng, 3, 10);

    LayerObjectiveState state;
    state.centered_samples = gaussian_matrix(rng, p, n_in);
    state.stiefel_point = orthonormalize_columns(gaussian_matrix(rng, 2 * n_out, n_in));
    state.config.smoothing_eps = 1e-6;

    const Eigen::MatrixXd analytic = gradient(state);
    Eigen::MatrixXd numeric(analytic.rows(), analytic.cols());
    for (Eigen::Index r = 0; r < analytic.rows(); ++r) {
      for (Eigen::Index c = 0; c < analytic.cols(); ++c) {
        LayerObjectiveState probe = state;
        probe.stiefel_point(r, c) += h;
        const double up = objective_smoothed(probe);
        probe.stiefel_point(r, c) -= 2 * h;
        const double down = objective_smoothed(probe);
        numeric(r, c) = (up - down) / (2 * h);
      }
    }
    worst = std::max(worst, relative((numeric - analytic).norm(), analytic.norm()));
  }
  return make_result("gradient_finite_difference", worst, 1e-5);
}

PropertyResult check_optimizer_descent(std::uint64_t seed, int runs) {
  auto rng = make_rng(derive_seed(seed, 11));
  double worst = -1.0;
  for (int i = 0; i < runs; ++i) {
    const Eigen::Index n_in = pick(rng, 3, 6);
    const Eigen::Index n_out = pick(rng, (n_in + 1) / 2, n_in + 1);
    const Eigen::Index p = pick(rng, 4, 16);

    Eigen::MatrixXd samples = gaussian_matrix(rng, p, n_in);
    samples.rowwise() -= samples.colwise().mean();

    LayerObjectiveState state;
    state.centered_samples = std::move(samples);
    state.stiefel_point = orthonormalize_columns(gaussian_matrix(rng, 2 * n_out, n_in));
    state.config.max_iters = 200;
    state.config.seed = derive_seed(seed, 1000 + static_cast<std::uint64_t>(i));

    const auto result = optimize_layer(state);
    for (std::size_t k = 0; k + 1 < result.trace.size(); ++k)
      worst = std::max(worst, result.trace[k + 1] - result.trace[k]);
    worst = std::max(worst, result.trace.back() - result.trace.front());
    worst = std::max(worst, result.max_stiefel_residual - 1e-8);
  }
  return make_result("optimizer_descent", worst, 0.0);
}

PropertyResult check_sparse_pair_descent() {
  Eigen::MatrixXd samples(2, 4);
  samples << 1, 1, 0, 0,
             0, 0, 1, 1;
  // Misaligned pairing (1,3),(2,4): a zero-gradient start with objective 2.
  const auto start = pairing_operator(4, {{0, 2}, {1, 3}});

  LayerObjectiveState state;
  state.centered_samples = samples;
  state.stiefel_point = start.stacked();

  if (std::abs(objective(state) - 2.0) > 1e-12)
    return make_result("sparse_pair_descent", std::abs(objective(state) - 2.0) + 1.5, 1.5);

  const auto result = optimize_layer(state);
  return make_result("sparse_pair_descent", result.trace.back(), 1.5);
}

PropertyResult check_worked_example() {
  std::vector<NetworkLayer> layers;
  layers.push_back({pairing_operator(2, {{0, 1}}), BlockPartition::full(2)});
  const ScatteringNetwork net(std::move(layers), BlockPartition::full(1));

  Eigen::VectorXd x(2);
  x << 3, 4;
  const auto s = averaged_scatter(net, x);

  double worst = std::abs(s.output[0][0] - 3.5);
  worst = std::max(worst, std::abs(s.output[0][1] - 3.5));
  worst = std::max(worst, std::abs(s.tilde[1][0] - std::sqrt(0.5)));
  worst = std::max(worst, std::abs(s.output[0].squaredNorm() - 24.5));
  worst = std::max(worst, std::abs(s.tilde[1].squaredNorm() - 0.5));
  worst = std::max(worst,
                   std::abs(s.output[0].squaredNorm() + s.tilde[1].squaredNorm() - 25.0));
  return make_result("worked_example", worst, 1e-12);
}

PropertyResult check_classification_accuracy(std::uint64_t seed) {
  auto rng = make_rng(derive_seed(seed, 12));

  // Two classes with block-constant means and within-block jitter, so the
  // size-2 averaging blocks cancel the jitter while keeping the means apart.
  Eigen::VectorXd mean_a(4), mean_b(4), jitter_a(4), jitter_b(4);
  mean_a << 2, 2, 0, 0;
  mean_b << 0, 0, 2, 2;
  jitter_a << 0.1, -0.1, 0, 0;
  jitter_b << 0, 0, 0.1, -0.1;

  const DiscreteDistribution class_a({mean_a + jitter_a, mean_a - jitter_a}, {0.5, 0.5});
  const DiscreteDistribution class_b({mean_b + jitter_b, mean_b - jitter_b}, {0.5, 0.5});
  const Mixture mixture({{0.0, 0.5, class_a}, {1.0, 0.5, class_b}});

  std::vector<NetworkLayer> layers;
  layers.push_back({random_tight_frame(4, 4, derive_seed(seed, 13)),
                    BlockPartition::contiguous(4, 2)});
  layers.push_back({random_tight_frame(4, 2, derive_seed(seed, 14)),
                    BlockPartition::contiguous(4, 2)});
  const ScatteringNetwork net(std::move(layers), BlockPartition::full(2));

  // Instance preconditions: tight classes, well separated templates.
  if (class_a.variance() > 0.1 || class_b.variance() > 0.1)
    return make_result("classification_accuracy", 1.0, 0.1);

  std::vector<Eigen::VectorXd> train;
  std::vector<double> train_labels;
  for (const auto& sample : class_a.draw(rng, 100)) {
    train.push_back(sample);
    train_labels.push_back(0.0);
  }
  for (const auto& sample : class_b.draw(rng, 100)) {
    train.push_back(sample);
    train_labels.push_back(1.0);
  }
  const auto templates = fit_templates(net, train, train_labels);
  if (squared_distance(templates.classes[0].layers, templates.classes[1].layers) < 1.0)
    return make_result("classification_accuracy", 1.0, 0.1);

  const auto [test, labels] = mixture.draw_labeled(rng, 200);
  int correct = 0;
  for (std::size_t i = 0; i < test.size(); ++i)
    if (classify_nearest(net, templates, test[i]).label == labels[i]) ++correct;

  const double accuracy = static_cast<double>(correct) / static_cast<double>(test.size());
  return make_result("classification_accuracy", 1.0 - accuracy, 0.1);
}

PropertyResult check_classification_relabeling(std::uint64_t seed, int points) {
  auto rng = make_rng(derive_seed(seed, 19));
  const auto net = random_network(rng, 0, 2);

  std::vector<Eigen::VectorXd> samples;
  std::vector<double> labels, swapped;
  for (int i = 0; i < 24; ++i) {
    samples.push_back(gaussian_vector(rng, net.dim(0)) +
                      Eigen::VectorXd::Constant(net.dim(0), i % 2 == 0 ? 2.0 : -2.0));
    labels.push_back(i % 2 == 0 ? 0.0 : 1.0);
    swapped.push_back(i % 2 == 0 ? 1.0 : 0.0);
  }
  const auto base = fit_templates(net, samples, labels);
  const auto relabeled = fit_templates(net, samples, swapped);

  int mismatches = 0;
  for (int i = 0; i < points; ++i) {
    const Eigen::VectorXd x = gaussian_vector(rng, net.dim(0));
    const auto a = classify_nearest(net, base, x);
    const auto b = classify_nearest(net, relabeled, x);
    if (a.label != 1.0 - b.label) ++mismatches;
  }
  return make_result("classification_relabeling", mismatches, 0.0);
}

PropertyResult check_readout_identity(std::uint64_t seed, int instances) {
  auto rng = make_rng(derive_seed(seed, 15));
  double worst = 0.0;
  for (int i = 0; i < instances; ++i) {
    const auto net = random_network(rng);
    Eigen::Index total = 0;
    for (Eigen::Index m = 0; m <= net.depth(); ++m) total += net.dim(m);
    const Eigen::VectorXd w = gaussian_vector(rng, total);
    const Eigen::VectorXd x = gaussian_vector(rng, net.dim(0));
    const auto [lhs, rhs] = readout_equivalence(net, w, x);
    worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(lhs)));
  }
  return make_result("readout_identity", worst, 1e-10);
}

std::string decay_profile_info(std::uint64_t seed) {
  auto rng = make_rng(derive_seed(seed, 16));
  // Atoms spread over several scales give a long energy tail.
  std::vector<Eigen::VectorXd> atoms;
  for (int a = 0; a < 6; ++a)
    atoms.push_back(std::pow(2.0, a) * gaussian_vector(rng, 8).normalized());
  const auto dist = DiscreteDistribution::uniform(std::move(atoms));

  std::vector<NetworkLayer> layers;
  for (int m = 0; m < 6; ++m)
    layers.push_back({random_tight_frame(8, 8, rng()), BlockPartition::singletons(8)});
  const ScatteringNetwork net(std::move(layers), BlockPartition::full(8));

  const auto ex = expected_scatter_exact(net, dist);
  std::string line = "decay profile ||E(X_m)||:";
  for (const auto& e : ex.expectations)
    line += " " + io::format_compact(std::sqrt(e.squaredNorm()));
  line += " (residual E||X_M||^2 = " +
          io::format_compact(ex.expectations.back().squaredNorm() + ex.variances.back()) +
          ")";
  return line;
}

Report run_suite(std::uint64_t seed, Level level) {
  const bool full = level == Level::full;
  Report report;
  report.properties.push_back(check_frame_partition_algebra(seed, full ? 100 : 20));
  report.properties.push_back(check_energy_conservation(seed, full ? 200 : 40));
  report.properties.push_back(check_contractivity_averaged(seed, full ? 200 : 40));
  report.properties.push_back(check_contractivity_expected(seed, full ? 200 : 40));
  report.properties.push_back(check_decay_bound(seed, full ? 100 : 20));
  report.properties.push_back(check_expected_energy_identity(seed, full ? 50 : 10));
  report.properties.push_back(check_variance_identity(seed, full ? 50 : 10));
  report.properties.push_back(check_empirical_variance_identity(seed, full ? 50 : 10));
  report.properties.push_back(check_estimation_error_mc(seed, full ? 1000 : 200));
  report.properties.push_back(check_estimation_bound_order(seed, full ? 20 : 8));
  report.properties.push_back(check_template_error_bound(seed, full ? 100 : 20));
  report.properties.push_back(check_gradient_finite_difference(seed, full ? 20 : 8));
  report.properties.push_back(check_optimizer_descent(seed, full ? 50 : 10));
  report.properties.push_back(check_sparse_pair_descent());
  report.properties.push_back(check_worked_example());
  report.properties.push_back(check_classification_accuracy(seed));
  report.properties.push_back(check_classification_relabeling(seed, full ? 50 : 20));
  report.properties.push_back(check_readout_identity(seed, full ? 100 : 20));
  report.info.push_back(decay_profile_info(seed));
  return report;
}

Report run_model_suite(const ScatteringNetwork& net, std::uint64_t seed) {
  auto rng = make_rng(derive_seed(seed, 17));
  Report report;

  double frame_worst = 0.0;
  for (const auto& layer : net.layers())
    frame_worst = std::max(frame_worst, layer.op.frame_residual());
  report.properties.push_back(make_result("model_frame_check", frame_worst, 1e-8));

  double energy_worst = 0.0;
  double contract_worst = -1.0;
  double decay_worst = -1.0;
  const double rate = 1.0 - 1.0 / static_cast<double>(net.max_layer_block_size());
  for (int i = 0; i < 50; ++i) {
    const Eigen::VectorXd x = gaussian_vector(rng, net.dim(0));
    const Eigen::VectorXd y = gaussian_vector(rng, net.dim(0));
    const auto sx = averaged_scatter(net, x);
    const auto sy = averaged_scatter(net, y);

    double energy = sx.tilde.back().squaredNorm();
    double out = (sx.tilde.back() - sy.tilde.back()).squaredNorm();
    for (Eigen::Index m = 0; m < net.depth(); ++m) {
      energy += sx.output[static_cast<std::size_t>(m)].squaredNorm();
      out += (sx.output[static_cast<std::size_t>(m)] -
              sy.output[static_cast<std::size_t>(m)]).squaredNorm();
    }
    energy_worst = std::max(
        energy_worst, relative(std::abs(x.squaredNorm() - energy), x.squaredNorm()));
    contract_worst =
        std::max(contract_worst, relative(out - (x - y).squaredNorm(),
                                          (x - y).squaredNorm()));

    const auto sp = averaged_scatter(net, Eigen::VectorXd(x.cwiseAbs()));
    double allowed = x.squaredNorm();
    for (const auto& layer : sp.tilde) {
      decay_worst = std::max(decay_worst, layer.squaredNorm() - allowed);
      allowed *= rate;
    }
  }
  report.properties.push_back(make_result("model_energy_conservation", energy_worst, 1e-10));
  report.properties.push_back(make_result("model_contractivity", contract_worst, 1e-10));
  report.properties.push_back(make_result("model_decay_bound", decay_worst, 1e-12));
  return report;
}

std::string format_property_line(const PropertyResult& r) {
  return "PROPERTY " + r.name + (r.pass ? " PASS" : " FAIL") +
         " residual=" + io::format_compact(r.residual) +
         " bound=" + io::format_compact(r.bound);
}

}  // namespace scatnet::verify
