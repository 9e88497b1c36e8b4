#include "scatnet/distribution.hpp"

#include <cmath>
#include <string>

#include "scatnet/error.hpp"

namespace scatnet {

namespace {
constexpr double kProbTol = 1e-12;
}

DiscreteDistribution::DiscreteDistribution(std::vector<Eigen::VectorXd> atoms,
                                           std::vector<double> probs)
    : atoms_(std::move(atoms)), probs_(std::move(probs)) {
  if (atoms_.empty()) throw EmptyInputError("distribution has no atoms");
  if (atoms_.size() != probs_.size())
    throw DimensionError("distribution: " + std::to_string(atoms_.size()) +
                         " atoms but " + std::to_string(probs_.size()) +
                         " probabilities");
  const Eigen::Index d = atoms_.front().size();
  double sum = 0.0;
  for (std::size_t a = 0; a < atoms_.size(); ++a) {
    if (atoms_[a].size() != d)
      throw DimensionError("distribution: atom " + std::to_string(a) +
                           " has dimension " + std::to_string(atoms_[a].size()) +
                           ", expected " + std::to_string(d));
    if (!atoms_[a].allFinite())
      throw InvalidArgumentError("distribution: atom " + std::to_string(a) +
                                 " has non-finite entries");
    if (!(probs_[a] > 0.0))
      throw InvalidArgumentError("distribution: probabilities must be positive");
    sum += probs_[a];
  }
  if (std::abs(sum - 1.0) > kProbTol)
    throw InvalidArgumentError("distribution: probabilities sum to " +
                               std::to_string(sum) + ", expected 1");
}

DiscreteDistribution DiscreteDistribution::uniform(std::vector<Eigen::VectorXd> atoms) {
  if (atoms.empty()) throw EmptyInputError("distribution has no atoms");
  std::vector<double> probs(atoms.size(), 1.0 / static_cast<double>(atoms.size()));
  return {std::move(atoms), std::move(probs)};
}

Eigen::MatrixXd DiscreteDistribution::atoms_matrix() const {
  Eigen::MatrixXd m(dim(), size());
  for (Eigen::Index a = 0; a < size(); ++a)
    m.col(a) = atoms_[static_cast<std::size_t>(a)];
  return m;
}

Eigen::VectorXd DiscreteDistribution::mean() const {
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(dim());
  for (std::size_t a = 0; a < atoms_.size(); ++a) mu += probs_[a] * atoms_[a];
  return mu;
}

double DiscreteDistribution::expected_squared_norm() const {
  double e = 0.0;
  for (std::size_t a = 0; a < atoms_.size(); ++a)
    e += probs_[a] * atoms_[a].squaredNorm();
  return e;
}

double DiscreteDistribution::variance() const {
  const Eigen::VectorXd mu = mean();
  double v = 0.0;
  for (std::size_t a = 0; a < atoms_.size(); ++a)
    v += probs_[a] * (atoms_[a] - mu).squaredNorm();
  return v;
}

std::size_t DiscreteDistribution::sample_index(std::mt19937_64& rng) const {
  std::discrete_distribution<std::size_t> pick(probs_.begin(), probs_.end());
  return pick(rng);
}

std::vector<Eigen::VectorXd> DiscreteDistribution::draw(std::mt19937_64& rng,
                                                        Eigen::Index count) const {
  if (count < 1) throw InvalidArgumentError("draw: count must be positive");
  std::discrete_distribution<std::size_t> pick(probs_.begin(), probs_.end());
  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<std::size_t>(count));
  for (Eigen::Index i = 0; i < count; ++i) out.push_back(atoms_[pick(rng)]);
  return out;
}

Mixture::Mixture(std::vector<MixtureComponent> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw EmptyInputError("mixture has no components");
  const Eigen::Index d = components_.front().dist.dim();
  double sum = 0.0;
  for (const auto& c : components_) {
    if (c.dist.dim() != d)
      throw DimensionError("mixture components have mismatched dimensions");
    if (!(c.prior > 0.0))
      throw InvalidArgumentError("mixture: priors must be positive");
    sum += c.prior;
  }
  if (std::abs(sum - 1.0) > kProbTol)
    throw InvalidArgumentError("mixture: priors sum to " + std::to_string(sum) +
                               ", expected 1");
}

DiscreteDistribution Mixture::pooled() const {
  std::vector<Eigen::VectorXd> atoms;
  std::vector<double> probs;
  for (const auto& c : components_) {
    for (Eigen::Index a = 0; a < c.dist.size(); ++a) {
      atoms.push_back(c.dist.atoms()[static_cast<std::size_t>(a)]);
      probs.push_back(c.prior * c.dist.probs()[static_cast<std::size_t>(a)]);
    }
  }
  // Renormalize so rounding in the products cannot break the sum check.
  double sum = 0.0;
  for (double p : probs) sum += p;
  for (double& p : probs) p /= sum;
  return {std::move(atoms), std::move(probs)};
}

std::pair<std::vector<Eigen::VectorXd>, std::vector<double>> Mixture::draw_labeled(
    std::mt19937_64& rng, Eigen::Index count) const {
  if (count < 1) throw InvalidArgumentError("draw_labeled: count must be positive");
  std::vector<double> priors;
  priors.reserve(components_.size());
  for (const auto& c : components_) priors.push_back(c.prior);
  std::discrete_distribution<std::size_t> pick(priors.begin(), priors.end());

  std::vector<Eigen::VectorXd> samples;
  std::vector<double> labels;
  samples.reserve(static_cast<std::size_t>(count));
  labels.reserve(static_cast<std::size_t>(count));
  for (Eigen::Index i = 0; i < count; ++i) {
    const auto& c = components_[pick(rng)];
    samples.push_back(c.dist.atoms()[c.dist.sample_index(rng)]);
    labels.push_back(c.label);
  }
  return {std::move(samples), std::move(labels)};
}

}  // namespace scatnet
