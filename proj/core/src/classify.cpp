#include "scatnet/classify.hpp"

#include <cmath>
#include <map>
#include <string>

#include <Eigen/Dense>

#include "scatnet/error.hpp"
#include "scatnet/scatter.hpp"

namespace scatnet {

ClassTemplates fit_templates(const ScatteringNetwork& net,
                             const std::vector<Eigen::VectorXd>& samples,
                             const std::vector<double>& labels) {
  if (samples.empty()) throw EmptyInputError("fit_templates: no samples");
  if (samples.size() != labels.size())
    throw DimensionError("fit_templates: " + std::to_string(samples.size()) +
                         " samples but " + std::to_string(labels.size()) + " labels");

  std::map<double, std::vector<Eigen::VectorXd>> by_class;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (std::isnan(labels[i]))
      throw InvalidArgumentError("fit_templates: NaN label at row " + std::to_string(i));
    by_class[labels[i]].push_back(samples[i]);
  }

  ClassTemplates out;
  const double total = static_cast<double>(samples.size());
  for (const auto& [label, class_samples] : by_class) {
    ClassTemplate t;
    t.label = label;
    t.sample_count = static_cast<Eigen::Index>(class_samples.size());
    t.prior = static_cast<double>(class_samples.size()) / total;
    t.layers = empirical_mu_bars(net, class_samples);
    out.classes.push_back(std::move(t));
  }
  return out;
}

Classification classify_nearest(const ScatteringNetwork& net,
                                const ClassTemplates& templates,
                                const Eigen::VectorXd& x) {
  if (templates.classes.empty()) throw EmptyInputError("classify_nearest: no templates");

  const auto scattered = averaged_scatter(net, x);
  Classification result;
  result.squared_distances.reserve(templates.classes.size());

  Eigen::Index best = 0;
  double best_distance = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < templates.classes.size(); ++k) {
    const auto& tmpl = templates.classes[k].layers;
    if (tmpl.size() != scattered.output.size())
      throw DimensionError("classify_nearest: template depth mismatch for class " +
                           std::to_string(k));
    double d = 0.0;
    for (std::size_t m = 0; m < tmpl.size(); ++m) {
      if (tmpl[m].size() != scattered.output[m].size())
        throw DimensionError("classify_nearest: template layer " + std::to_string(m) +
                             " size mismatch for class " + std::to_string(k));
      d += (scattered.output[m] - tmpl[m]).squaredNorm();
    }
    result.squared_distances.push_back(d);
    if (d < best_distance) {
      best_distance = d;
      best = static_cast<Eigen::Index>(k);
    }
  }
  result.class_index = best;
  result.label = templates.classes[static_cast<std::size_t>(best)].label;
  return result;
}

LinearReadout fit_readout_least_squares(const std::vector<Eigen::VectorXd>& features,
                                        const std::vector<double>& targets) {
  if (features.empty()) throw EmptyInputError("fit_readout_least_squares: no features");
  if (features.size() != targets.size())
    throw DimensionError("fit_readout_least_squares: feature/target count mismatch");

  const Eigen::Index p = static_cast<Eigen::Index>(features.size());
  const Eigen::Index d = features.front().size();
  Eigen::MatrixXd design(p, d + 1);
  Eigen::VectorXd y(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    if (features[static_cast<std::size_t>(i)].size() != d)
      throw DimensionError("fit_readout_least_squares: ragged features");
    design.row(i).head(d) = features[static_cast<std::size_t>(i)];
    design(i, d) = 1.0;
    y[i] = targets[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd sol =
      design.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(y);
  return {sol.head(d), sol[d]};
}

double readout_score(const LinearReadout& readout, const Eigen::VectorXd& features) {
  if (features.size() != readout.w.size())
    throw DimensionError("readout_score: feature length mismatch");
  return readout.w.dot(features) + readout.bias;
}

std::pair<double, double> readout_equivalence(const ScatteringNetwork& net,
                                              const Eigen::VectorXd& w,
                                              const Eigen::VectorXd& x) {
  Eigen::Index total = 0;
  for (Eigen::Index m = 0; m <= net.depth(); ++m) total += net.dim(m);
  if (w.size() != total)
    throw DimensionError("readout_equivalence: w has length " +
                         std::to_string(w.size()) + ", expected " +
                         std::to_string(total));

  const auto scattered = averaged_scatter(net, x);
  double lhs = 0.0;
  double rhs = 0.0;
  Eigen::Index offset = 0;
  for (Eigen::Index m = 0; m <= net.depth(); ++m) {
    const Eigen::VectorXd w_m = w.segment(offset, net.dim(m));
    lhs += w_m.dot(scattered.output[static_cast<std::size_t>(m)]);
    rhs += net.partition(m).apply_average(w_m).dot(
        scattered.tilde[static_cast<std::size_t>(m)]);
    offset += net.dim(m);
  }
  return {lhs, rhs};
}

TemplateErrorBound template_error_bound(const ScatteringNetwork& net,
                                        const DiscreteDistribution& dist) {
  const auto exp = expected_scatter_exact(net, dist);
  const std::size_t levels = static_cast<std::size_t>(net.depth()) + 1;

  // Averaged paths share the realization with the expected paths atom by atom.
  std::vector<double> lhs(levels, 0.0);
  std::vector<double> avg_err(levels, 0.0);  // E||A_n X_n - E X_n||^2
  for (Eigen::Index a = 0; a < dist.size(); ++a) {
    const double prob = dist.probs()[static_cast<std::size_t>(a)];
    const auto averaged =
        averaged_scatter(net, dist.atoms()[static_cast<std::size_t>(a)]);
    const auto& expected_path = exp.atom_paths[static_cast<std::size_t>(a)];
    for (std::size_t m = 0; m < levels; ++m) {
      lhs[m] += prob *
                (averaged.output[m] - exp.expectations[m]).squaredNorm();
      const auto& part = net.partition(static_cast<Eigen::Index>(m));
      avg_err[m] += prob *
                    (part.apply_average(expected_path[m]) - exp.expectations[m])
                        .squaredNorm();
    }
  }

  std::vector<double> rhs(levels, 0.0);
  double root_sum = 0.0;
  bool holds = true;
  for (std::size_t m = 0; m < levels; ++m) {
    root_sum += std::sqrt(avg_err[m]);
    rhs[m] = root_sum * root_sum;
    if (lhs[m] > rhs[m] + 1e-10) holds = false;
  }
  return {std::move(lhs), std::move(rhs), holds};
}

AveragingDiagnostic averaging_diagnostic(const ScatteringNetwork& net,
                                         const DiscreteDistribution& dist) {
  const auto exp = expected_scatter_exact(net, dist);
  const std::size_t levels = static_cast<std::size_t>(net.depth()) + 1;

  AveragingDiagnostic out;
  out.bias.assign(levels, 0.0);
  out.variance.assign(levels, 0.0);
  for (std::size_t m = 0; m < levels; ++m) {
    const auto& part = net.partition(static_cast<Eigen::Index>(m));
    const Eigen::VectorXd averaged_mean = part.apply_average(exp.expectations[m]);
    out.bias[m] = (averaged_mean - exp.expectations[m]).squaredNorm();
    for (Eigen::Index a = 0; a < dist.size(); ++a)
      out.variance[m] +=
          dist.probs()[static_cast<std::size_t>(a)] *
          (part.apply_average(exp.atom_paths[static_cast<std::size_t>(a)][m]) -
           averaged_mean).squaredNorm();
  }
  return out;
}

}  // namespace scatnet
