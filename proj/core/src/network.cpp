#include "scatnet/network.hpp"

#include <string>

#include "scatnet/error.hpp"

namespace scatnet {

double total_squared_norm(const LayerSequence& s) {
  double total = 0.0;
  for (const auto& v : s) total += v.squaredNorm();
  return total;
}

double squared_distance(const LayerSequence& a, const LayerSequence& b) {
  if (a.size() != b.size())
    throw DimensionError("layer sequences have different lengths");
  double total = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) {
    if (a[m].size() != b[m].size())
      throw DimensionError("layer " + std::to_string(m) + " sizes differ");
    total += (a[m] - b[m]).squaredNorm();
  }
  return total;
}

Eigen::VectorXd concatenate(const LayerSequence& s) {
  Eigen::Index total = 0;
  for (const auto& v : s) total += v.size();
  Eigen::VectorXd out(total);
  Eigen::Index offset = 0;
  for (const auto& v : s) {
    out.segment(offset, v.size()) = v;
    offset += v.size();
  }
  return out;
}

ScatteringNetwork::ScatteringNetwork(std::vector<NetworkLayer> layers,
                                     BlockPartition final_partition)
    : layers_(std::move(layers)), final_partition_(std::move(final_partition)) {
  for (std::size_t m = 0; m < layers_.size(); ++m) {
    const auto& layer = layers_[m];
    if (layer.partition.n() != layer.op.n_in())
      throw DimensionError("layer " + std::to_string(m) + ": partition covers " +
                           std::to_string(layer.partition.n()) +
                           " coordinates but the operator expects " +
                           std::to_string(layer.op.n_in()));
    if (m + 1 < layers_.size() && layer.op.n_out() != layers_[m + 1].op.n_in())
      throw DimensionError("layer " + std::to_string(m) + " outputs " +
                           std::to_string(layer.op.n_out()) +
                           " coordinates but layer " + std::to_string(m + 1) +
                           " expects " + std::to_string(layers_[m + 1].op.n_in()));
  }
  const Eigen::Index last = layers_.empty() ? final_partition_.n()
                                            : layers_.back().op.n_out();
  if (final_partition_.n() != last)
    throw DimensionError("final partition covers " +
                         std::to_string(final_partition_.n()) +
                         " coordinates but the deepest layer has " +
                         std::to_string(last));
}

const BlockPartition& ScatteringNetwork::partition(Eigen::Index m) const {
  if (m < 0 || m > depth())
    throw DimensionError("partition index " + std::to_string(m) + " out of range");
  if (m == depth()) return final_partition_;
  return layers_[static_cast<std::size_t>(m)].partition;
}

Eigen::Index ScatteringNetwork::dim(Eigen::Index m) const {
  if (m < 0 || m > depth())
    throw DimensionError("layer index " + std::to_string(m) + " out of range");
  if (m == 0)
    return layers_.empty() ? final_partition_.n() : layers_.front().op.n_in();
  return layers_[static_cast<std::size_t>(m - 1)].op.n_out();
}

std::vector<Eigen::Index> ScatteringNetwork::dims() const {
  std::vector<Eigen::Index> out;
  out.reserve(static_cast<std::size_t>(depth()) + 1);
  for (Eigen::Index m = 0; m <= depth(); ++m) out.push_back(dim(m));
  return out;
}

Eigen::Index ScatteringNetwork::max_layer_block_size() const {
  Eigen::Index m = 1;
  for (const auto& layer : layers_)
    m = std::max(m, layer.partition.max_block_size());
  return m;
}

void ScatteringNetwork::validate(double frame_tol) const {
  for (std::size_t m = 0; m < layers_.size(); ++m)
    if (!layers_[m].op.validate(frame_tol))
      throw Error("layer " + std::to_string(m + 1) +
                  " operator fails the tight-frame check (residual " +
                  std::to_string(layers_[m].op.frame_residual()) + ")");
}

}  // namespace scatnet
