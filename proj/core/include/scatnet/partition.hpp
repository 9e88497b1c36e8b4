#pragma once

#include <vector>

#include <Eigen/Core>

namespace scatnet {

/// Block-averaging projector over {0..n-1}.
///
/// The blocks are disjoint, non-empty and cover the whole index range.
/// apply_average replaces every coordinate by the mean of its block; it is an
/// orthogonal projector (idempotent and self-adjoint). Immutable and pure.
class BlockPartition {
 public:
  BlockPartition(Eigen::Index n, std::vector<std::vector<Eigen::Index>> blocks);

  static BlockPartition singletons(Eigen::Index n);
  static BlockPartition full(Eigen::Index n);
  /// Contiguous blocks of the given size; the last block may be smaller.
  static BlockPartition contiguous(Eigen::Index n, Eigen::Index block_size);

  Eigen::Index n() const { return n_; }
  const std::vector<std::vector<Eigen::Index>>& blocks() const { return blocks_; }
  Eigen::Index max_block_size() const;
  bool is_identity() const;

  Eigen::VectorXd apply_average(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd apply_average_cols(const Eigen::MatrixXd& xs) const;

  /// x - apply_average(x); orthogonal complement of the block average.
  Eigen::VectorXd residual(const Eigen::VectorXd& x) const;

 private:
  Eigen::Index n_;
  std::vector<std::vector<Eigen::Index>> blocks_;
};

}  // namespace scatnet
