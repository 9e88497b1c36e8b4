#pragma once

#include <random>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace scatnet {

/// Finite-support probability distribution on R^d: atoms with positive
/// probabilities summing to one. The exact-expectation oracle operates on
/// these; anything with continuous support goes through sampling instead.
class DiscreteDistribution {
 public:
  DiscreteDistribution(std::vector<Eigen::VectorXd> atoms, std::vector<double> probs);

  /// Equal probability on every atom.
  static DiscreteDistribution uniform(std::vector<Eigen::VectorXd> atoms);

  Eigen::Index dim() const { return atoms_.front().size(); }
  Eigen::Index size() const { return static_cast<Eigen::Index>(atoms_.size()); }
  const std::vector<Eigen::VectorXd>& atoms() const { return atoms_; }
  const std::vector<double>& probs() const { return probs_; }

  /// Atoms as matrix columns, in order.
  Eigen::MatrixXd atoms_matrix() const;

  Eigen::VectorXd mean() const;
  /// E ||X||^2.
  double expected_squared_norm() const;
  /// E ||X - E X||^2.
  double variance() const;

  std::size_t sample_index(std::mt19937_64& rng) const;
  std::vector<Eigen::VectorXd> draw(std::mt19937_64& rng, Eigen::Index count) const;

 private:
  std::vector<Eigen::VectorXd> atoms_;
  std::vector<double> probs_;
};

/// One class of a labeled mixture.
struct MixtureComponent {
  double label;
  double prior;
  DiscreteDistribution dist;
};

/// Finite mixture of labeled finite-support classes; priors sum to one.
class Mixture {
 public:
  explicit Mixture(std::vector<MixtureComponent> components);

  const std::vector<MixtureComponent>& components() const { return components_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(components_.size()); }
  Eigen::Index dim() const { return components_.front().dist.dim(); }

  /// The unconditional distribution: atom probabilities scaled by priors.
  DiscreteDistribution pooled() const;

  /// i.i.d. draws from the mixture with their class labels.
  std::pair<std::vector<Eigen::VectorXd>, std::vector<double>> draw_labeled(
      std::mt19937_64& rng, Eigen::Index count) const;

 private:
  std::vector<MixtureComponent> components_;
};

}  // namespace scatnet
