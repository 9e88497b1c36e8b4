#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace scatnet {

/// splitmix64 step; mixes a seed with a salt to derive independent streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::mt19937_64 make_rng(std::uint64_t seed) {
  return std::mt19937_64(seed);
}

inline Eigen::VectorXd gaussian_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> gauss;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = gauss(rng);
  return v;
}

inline Eigen::MatrixXd gaussian_matrix(std::mt19937_64& rng, Eigen::Index rows,
                                       Eigen::Index cols) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = gauss(rng);
  return m;
}

}  // namespace scatnet
