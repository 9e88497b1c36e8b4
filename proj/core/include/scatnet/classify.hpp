#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "scatnet/distribution.hpp"
#include "scatnet/network.hpp"

namespace scatnet {

/// Per-class estimate of the expected scattering, fitted by the empirical
/// recursion over that class's samples.
struct ClassTemplate {
  double label;
  double prior;
  Eigen::Index sample_count;
  LayerSequence layers;
};

struct ClassTemplates {
  std::vector<ClassTemplate> classes;  // sorted by label ascending
};

ClassTemplates fit_templates(const ScatteringNetwork& net,
                             const std::vector<Eigen::VectorXd>& samples,
                             const std::vector<double>& labels);

struct Classification {
  double label;
  Eigen::Index class_index;
  std::vector<double> squared_distances;
};

/// Nearest-template rule: scatter x with block averaging and pick the class
/// whose template minimizes the truncated squared distance. Ties go to the
/// smaller class index.
Classification classify_nearest(const ScatteringNetwork& net,
                                const ClassTemplates& templates,
                                const Eigen::VectorXd& x);

/// Linear functional over the concatenated scattering layers.
struct LinearReadout {
  Eigen::VectorXd w;
  double bias = 0.0;
};

/// Minimum-norm least-squares fit of targets against the given feature
/// vectors (plus intercept).
LinearReadout fit_readout_least_squares(const std::vector<Eigen::VectorXd>& features,
                                        const std::vector<double>& targets);

double readout_score(const LinearReadout& readout, const Eigen::VectorXd& features);

/// Both sides of the projector identity <w, A Ux~> = <A w, Ux~>: the left
/// pairs w with the block-averaged layers, the right pairs the blockwise
/// averaged w with the raw layers. Equal up to rounding because each A_m is
/// self-adjoint.
std::pair<double, double> readout_equivalence(const ScatteringNetwork& net,
                                              const Eigen::VectorXd& w,
                                              const Eigen::VectorXd& x);

/// Exact two-sided evaluation of the template estimation error bound on a
/// finite-support distribution: lhs[m] is E||A_m X~_m - E X_m||^2 from the
/// averaged paths, rhs[m] the squared sum of per-layer root averaging errors
/// of the expected paths. The bound guarantees lhs <= rhs at every m.
struct TemplateErrorBound {
  std::vector<double> lhs;
  std::vector<double> rhs;
  bool holds;  // lhs <= rhs within 1e-10 slack at every layer
};

TemplateErrorBound template_error_bound(const ScatteringNetwork& net,
                                        const DiscreteDistribution& dist);

/// Per-layer split of the averaging error E||A_m X_m - E X_m||^2 into the
/// bias ||A_m E X_m - E X_m||^2 and the variance E||A_m X_m - A_m E X_m||^2.
/// Guides the choice of block sizes: both terms should stay small.
struct AveragingDiagnostic {
  std::vector<double> bias;
  std::vector<double> variance;
};

AveragingDiagnostic averaging_diagnostic(const ScatteringNetwork& net,
                                         const DiscreteDistribution& dist);

}  // namespace scatnet
