#include "scatnet/frame.hpp"

#include <Eigen/Dense>

#include "scatnet/error.hpp"
#include "scatnet/random.hpp"

namespace scatnet {

TightFrameOperator::TightFrameOperator(Eigen::MatrixXd psi_real,
                                       Eigen::MatrixXd psi_imag)
    : psi_real_(std::move(psi_real)), psi_imag_(std::move(psi_imag)) {
  if (psi_real_.rows() != psi_imag_.rows() || psi_real_.cols() != psi_imag_.cols())
    throw DimensionError("psi_real and psi_imag must have identical shapes");
  if (psi_real_.rows() < 1 || psi_real_.cols() < 1)
    throw DimensionError("frame operator needs at least one row and column");
}

Eigen::MatrixXd TightFrameOperator::stacked() const {
  Eigen::MatrixXd v(2 * n_out(), n_in());
  v.topRows(n_out()) = psi_real_;
  v.bottomRows(n_out()) = psi_imag_;
  return v;
}

double TightFrameOperator::frame_residual() const {
  const Eigen::MatrixXd gram =
      psi_real_.transpose() * psi_real_ + psi_imag_.transpose() * psi_imag_;
  return (gram - Eigen::MatrixXd::Identity(n_in(), n_in())).norm();
}

bool TightFrameOperator::validate(double tol) const {
  return 2 * n_out() >= n_in() && frame_residual() <= tol;
}

Eigen::VectorXd TightFrameOperator::apply_modulus(const Eigen::VectorXd& x) const {
  if (x.size() != n_in())
    throw DimensionError("apply_modulus: input has length " +
                         std::to_string(x.size()) + ", expected " +
                         std::to_string(n_in()));
  const Eigen::ArrayXd re = (psi_real_ * x).array();
  const Eigen::ArrayXd im = (psi_imag_ * x).array();
  return (re.square() + im.square()).sqrt().matrix();
}

Eigen::MatrixXd TightFrameOperator::apply_modulus_cols(const Eigen::MatrixXd& xs) const {
  if (xs.rows() != n_in())
    throw DimensionError("apply_modulus_cols: inputs have length " +
                         std::to_string(xs.rows()) + ", expected " +
                         std::to_string(n_in()));
  const Eigen::ArrayXXd re = (psi_real_ * xs).array();
  const Eigen::ArrayXXd im = (psi_imag_ * xs).array();
  return (re.square() + im.square()).sqrt().matrix();
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> TightFrameOperator::apply_complex(
    const Eigen::VectorXd& x) const {
  if (x.size() != n_in())
    throw DimensionError("apply_complex: input has length " +
                         std::to_string(x.size()) + ", expected " +
                         std::to_string(n_in()));
  return {psi_real_ * x, psi_imag_ * x};
}

TightFrameOperator pairing_operator(
    Eigen::Index n_in, const std::vector<std::pair<Eigen::Index, Eigen::Index>>& pairs) {
  if (n_in < 2 || n_in % 2 != 0)
    throw DimensionError("pairing_operator: n_in must be even and positive");
  if (static_cast<Eigen::Index>(pairs.size()) != n_in / 2)
    throw PartitionError("pairing_operator: expected " + std::to_string(n_in / 2) +
                         " pairs, got " + std::to_string(pairs.size()));

  std::vector<char> seen(static_cast<std::size_t>(n_in), 0);
  for (const auto& [a, b] : pairs) {
    for (Eigen::Index k : {a, b}) {
      if (k < 0 || k >= n_in)
        throw PartitionError("pairing_operator: index " + std::to_string(k) +
                             " out of range");
      if (seen[static_cast<std::size_t>(k)]++)
        throw PartitionError("pairing_operator: index " + std::to_string(k) +
                             " used more than once");
    }
  }

  const Eigen::Index n_out = n_in / 2;
  Eigen::MatrixXd re = Eigen::MatrixXd::Zero(n_out, n_in);
  Eigen::MatrixXd im = Eigen::MatrixXd::Zero(n_out, n_in);
  for (Eigen::Index n = 0; n < n_out; ++n) {
    re(n, pairs[static_cast<std::size_t>(n)].first) = 1.0;
    im(n, pairs[static_cast<std::size_t>(n)].second) = 1.0;
  }
  return {std::move(re), std::move(im)};
}

TightFrameOperator random_tight_frame(Eigen::Index n_in, Eigen::Index n_out,
                                      std::uint64_t seed) {
  if (n_in < 1 || n_out < 1)
    throw DimensionError("random_tight_frame: dimensions must be positive");
  if (2 * n_out < n_in)
    throw DimensionError("random_tight_frame: need 2*n_out >= n_in, got n_out=" +
                         std::to_string(n_out) + ", n_in=" + std::to_string(n_in));
  auto rng = make_rng(seed);
  return frame_from_stacked(orthonormalize_columns(gaussian_matrix(rng, 2 * n_out, n_in)));
}

Eigen::MatrixXd orthonormalize_columns(const Eigen::MatrixXd& m) {
  if (m.rows() < m.cols())
    throw DimensionError("orthonormalize_columns: matrix has more columns than rows");
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
  const Eigen::MatrixXd r = qr.matrixQR().topRows(m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

TightFrameOperator frame_from_stacked(const Eigen::MatrixXd& v) {
  if (v.rows() % 2 != 0)
    throw DimensionError("frame_from_stacked: stacked matrix must have an even row count");
  const Eigen::Index n_out = v.rows() / 2;
  return {v.topRows(n_out), v.bottomRows(n_out)};
}

}  // namespace scatnet
