#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace scatnet {

/// Complex tight-frame analysis operator W: R^{n_in} -> C^{n_out}.
///
/// Frame vector n is psi_n = psi_real.row(n) + i * psi_imag.row(n). The
/// stacked real matrix V = [psi_real; psi_imag] (2*n_out x n_in) must have
/// orthonormal columns, which is the isometry condition W*W = Id. Instances
/// are immutable; all operations are pure and safe to call concurrently.
class TightFrameOperator {
 public:
  TightFrameOperator(Eigen::MatrixXd psi_real, Eigen::MatrixXd psi_imag);

  Eigen::Index n_in() const { return psi_real_.cols(); }
  Eigen::Index n_out() const { return psi_real_.rows(); }
  const Eigen::MatrixXd& psi_real() const { return psi_real_; }
  const Eigen::MatrixXd& psi_imag() const { return psi_imag_; }

  /// The stacked 2*n_out x n_in matrix [psi_real; psi_imag].
  Eigen::MatrixXd stacked() const;

  /// Frobenius norm of V^T V - Id.
  double frame_residual() const;

  /// True iff the tight-frame condition holds within tol.
  bool validate(double tol = 1e-8) const;

  /// Coordinate-wise modulus |W x|; preserves the Euclidean norm of x.
  Eigen::VectorXd apply_modulus(const Eigen::VectorXd& x) const;

  /// Column-batched modulus: each column of xs is one input vector.
  Eigen::MatrixXd apply_modulus_cols(const Eigen::MatrixXd& xs) const;

  /// Real and imaginary parts of W x.
  std::pair<Eigen::VectorXd, Eigen::VectorXd> apply_complex(
      const Eigen::VectorXd& x) const;

 private:
  Eigen::MatrixXd psi_real_;
  Eigen::MatrixXd psi_imag_;
};

/// Pooling-by-pairs operator: row n of the frame is the indicator pair
/// psi_n = delta_{k'} + i delta_{k''}. Pairs are 0-based and must form a
/// perfect matching of {0..n_in-1}; n_out = n_in / 2.
TightFrameOperator pairing_operator(
    Eigen::Index n_in, const std::vector<std::pair<Eigen::Index, Eigen::Index>>& pairs);

/// Seeded random tight frame: gaussian entries orthonormalized so that the
/// stacked matrix satisfies V^T V = Id to ~1e-12. Requires 2*n_out >= n_in.
TightFrameOperator random_tight_frame(Eigen::Index n_in, Eigen::Index n_out,
                                      std::uint64_t seed);

/// QR-based column orthonormalization with the positive-diagonal sign
/// convention, so the result is a deterministic function of the input.
Eigen::MatrixXd orthonormalize_columns(const Eigen::MatrixXd& m);

/// Split a stacked 2*n_out x n_in Stiefel point into a frame operator.
TightFrameOperator frame_from_stacked(const Eigen::MatrixXd& v);

}  // namespace scatnet
