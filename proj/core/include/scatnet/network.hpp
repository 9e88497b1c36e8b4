#pragma once

#include <vector>

#include <Eigen/Core>

#include "scatnet/frame.hpp"
#include "scatnet/partition.hpp"

namespace scatnet {

/// Per-layer real vectors: entry m has the layer-m dimension N_m.
/// Used for propagation paths, layer expectations and transform outputs.
using LayerSequence = std::vector<Eigen::VectorXd>;

double total_squared_norm(const LayerSequence& s);
double squared_distance(const LayerSequence& a, const LayerSequence& b);
Eigen::VectorXd concatenate(const LayerSequence& s);

/// One network stage: the block averaging A_m over the layer input followed
/// by the frame operator W_{m+1} mapping N_m to N_{m+1} coordinates.
struct NetworkLayer {
  TightFrameOperator op;
  BlockPartition partition;
};

/// A scattering network of fixed truncation depth.
///
/// Layer m holds the partition over N_m and the operator taking N_m to
/// N_{m+1}; final_partition averages the deepest layer N_depth. Construction
/// checks the dimension chain; frame validity is checked by validate() so
/// that diagnostics can still run a deliberately broken network.
class ScatteringNetwork {
 public:
  ScatteringNetwork(std::vector<NetworkLayer> layers, BlockPartition final_partition);

  Eigen::Index depth() const { return static_cast<Eigen::Index>(layers_.size()); }
  const std::vector<NetworkLayer>& layers() const { return layers_; }
  const BlockPartition& final_partition() const { return final_partition_; }

  /// Partition over layer m coordinates, m = 0..depth (depth -> final).
  const BlockPartition& partition(Eigen::Index m) const;

  Eigen::Index dim(Eigen::Index m) const;
  std::vector<Eigen::Index> dims() const;

  /// Largest block over the per-layer partitions (the final one excluded);
  /// drives the layer-energy decay rate.
  Eigen::Index max_layer_block_size() const;

  /// Throws if any operator fails the tight-frame check at tol.
  void validate(double frame_tol = 1e-8) const;

 private:
  std::vector<NetworkLayer> layers_;
  BlockPartition final_partition_;
};

}  // namespace scatnet
