#include "scatnet/partition.hpp"

#include <algorithm>
#include <string>

#include "scatnet/error.hpp"

namespace scatnet {

BlockPartition::BlockPartition(Eigen::Index n,
                               std::vector<std::vector<Eigen::Index>> blocks)
    : n_(n), blocks_(std::move(blocks)) {
  if (n_ < 1) throw PartitionError("partition: n must be positive");
  std::vector<char> seen(static_cast<std::size_t>(n_), 0);
  for (auto& block : blocks_) {
    if (block.empty()) throw PartitionError("partition: empty block");
    for (Eigen::Index k : block) {
      if (k < 0 || k >= n_)
        throw PartitionError("partition: index " + std::to_string(k) +
                             " out of range [0," + std::to_string(n_) + ")");
      if (seen[static_cast<std::size_t>(k)]++)
        throw PartitionError("partition: index " + std::to_string(k) +
                             " appears in more than one block");
    }
    std::sort(block.begin(), block.end());
  }
  for (Eigen::Index k = 0; k < n_; ++k)
    if (!seen[static_cast<std::size_t>(k)])
      throw PartitionError("partition: index " + std::to_string(k) +
                           " is not covered by any block");
  std::sort(blocks_.begin(), blocks_.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

BlockPartition BlockPartition::singletons(Eigen::Index n) {
  std::vector<std::vector<Eigen::Index>> blocks;
  blocks.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) blocks.push_back({k});
  return {n, std::move(blocks)};
}

BlockPartition BlockPartition::full(Eigen::Index n) {
  std::vector<Eigen::Index> all(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) all[static_cast<std::size_t>(k)] = k;
  return {n, {std::move(all)}};
}

BlockPartition BlockPartition::contiguous(Eigen::Index n, Eigen::Index block_size) {
  if (block_size < 1) throw PartitionError("partition: block size must be positive");
  std::vector<std::vector<Eigen::Index>> blocks;
  for (Eigen::Index start = 0; start < n; start += block_size) {
    std::vector<Eigen::Index> block;
    for (Eigen::Index k = start; k < std::min(n, start + block_size); ++k)
      block.push_back(k);
    blocks.push_back(std::move(block));
  }
  return {n, std::move(blocks)};
}

Eigen::Index BlockPartition::max_block_size() const {
  std::size_t m = 0;
  for (const auto& block : blocks_) m = std::max(m, block.size());
  return static_cast<Eigen::Index>(m);
}

bool BlockPartition::is_identity() const { return max_block_size() == 1; }

Eigen::VectorXd BlockPartition::apply_average(const Eigen::VectorXd& x) const {
  if (x.size() != n_)
    throw DimensionError("apply_average: input has length " +
                         std::to_string(x.size()) + ", expected " +
                         std::to_string(n_));
  Eigen::VectorXd out(n_);
  for (const auto& block : blocks_) {
    double sum = 0.0;
    for (Eigen::Index k : block) sum += x[k];
    const double mean = sum / static_cast<double>(block.size());
    for (Eigen::Index k : block) out[k] = mean;
  }
  return out;
}

Eigen::MatrixXd BlockPartition::apply_average_cols(const Eigen::MatrixXd& xs) const {
  if (xs.rows() != n_)
    throw DimensionError("apply_average_cols: inputs have length " +
                         std::to_string(xs.rows()) + ", expected " +
                         std::to_string(n_));
  Eigen::MatrixXd out(n_, xs.cols());
  Eigen::RowVectorXd sum(xs.cols());
  for (const auto& block : blocks_) {
    sum.setZero();
    for (Eigen::Index k : block) sum += xs.row(k);
    sum /= static_cast<double>(block.size());
    for (Eigen::Index k : block) out.row(k) = sum;
  }
  return out;
}

Eigen::VectorXd BlockPartition::residual(const Eigen::VectorXd& x) const {
  return x - apply_average(x);
}

}  // namespace scatnet
