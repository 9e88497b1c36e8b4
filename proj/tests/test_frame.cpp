#include <doctest.h>

#include <cmath>

#include "scatnet/error.hpp"
#include "scatnet/frame.hpp"
#include "scatnet/random.hpp"

using namespace scatnet;

TEST_CASE("pairing operator builds indicator frame vectors") {
  const auto op = pairing_operator(2, {{0, 1}});
  CHECK(op.n_in() == 2);
  CHECK(op.n_out() == 1);
  CHECK(op.psi_real()(0, 0) == 1.0);
  CHECK(op.psi_real()(0, 1) == 0.0);
  CHECK(op.psi_imag()(0, 0) == 0.0);
  CHECK(op.psi_imag()(0, 1) == 1.0);
  CHECK(op.frame_residual() == 0.0);  // exact for indicator pairs
}

TEST_CASE("pairing operator accepts any perfect matching") {
  const auto op = pairing_operator(4, {{0, 2}, {1, 3}});
  CHECK(op.n_out() == 2);
  CHECK(op.validate());
  CHECK(op.frame_residual() == 0.0);
}

TEST_CASE("pairing operator rejects invalid matchings") {
  CHECK_THROWS_AS(pairing_operator(2, {{0, 0}}), PartitionError);
  CHECK_THROWS_AS(pairing_operator(4, {{0, 1}, {1, 2}}), PartitionError);
  CHECK_THROWS_AS(pairing_operator(4, {{0, 1}}), PartitionError);
  CHECK_THROWS_AS(pairing_operator(4, {{0, 1}, {2, 5}}), PartitionError);
  CHECK_THROWS_AS(pairing_operator(3, {{0, 1}}), DimensionError);
}

TEST_CASE("random tight frame validates and is deterministic") {
  const auto op = random_tight_frame(4, 4, 7);
  CHECK(op.validate(1e-12));
  CHECK(random_tight_frame(8, 8, 3).validate(1e-12));

  const auto again = random_tight_frame(4, 4, 7);
  CHECK(op.psi_real() == again.psi_real());
  CHECK(op.psi_imag() == again.psi_imag());

  const auto other = random_tight_frame(4, 4, 8);
  CHECK(op.psi_real() != other.psi_real());
}

TEST_CASE("random tight frame rejects insufficient redundancy") {
  CHECK_THROWS_AS(random_tight_frame(4, 1, 0), DimensionError);
  CHECK_NOTHROW(random_tight_frame(4, 2, 0));
}

TEST_CASE("validate detects broken isometries") {
  const auto op = pairing_operator(2, {{0, 1}});
  CHECK(op.validate());

  const TightFrameOperator doubled(2.0 * op.psi_real(), 2.0 * op.psi_imag());
  CHECK_FALSE(doubled.validate());
  CHECK(doubled.frame_residual() == doctest::Approx(3.0 * std::sqrt(2.0)));  // ||4I-I||_F
}

TEST_CASE("apply_modulus computes coordinatewise complex moduli") {
  const auto op = pairing_operator(2, {{0, 1}});
  Eigen::VectorXd x(2);
  x << 3, 4;
  const Eigen::VectorXd out = op.apply_modulus(x);
  REQUIRE(out.size() == 1);
  CHECK(out[0] == doctest::Approx(5.0).epsilon(1e-15));

  CHECK(op.apply_modulus(Eigen::VectorXd::Zero(2)).isZero(0.0));

  const auto op4 = pairing_operator(4, {{0, 2}, {1, 3}});
  Eigen::VectorXd y(4);
  y << 1, 1, 0, 0;
  const Eigen::VectorXd out4 = op4.apply_modulus(y);
  CHECK(out4[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(out4[1] == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(op.apply_modulus(Eigen::VectorXd::Zero(3)), DimensionError);
}

TEST_CASE("apply_complex returns both linear parts") {
  const auto op = pairing_operator(2, {{0, 1}});
  Eigen::VectorXd x(2);
  x << 3, 4;
  const auto [re, im] = op.apply_complex(x);
  CHECK(re[0] == 3.0);
  CHECK(im[0] == 4.0);

  const auto [re0, im0] = op.apply_complex(Eigen::VectorXd::Zero(2));
  CHECK(re0.isZero(0.0));
  CHECK(im0.isZero(0.0));

  CHECK_THROWS_AS(op.apply_complex(Eigen::VectorXd::Zero(5)), DimensionError);
}

TEST_CASE("apply_complex is linear") {
  auto rng = make_rng(42);
  const auto op = random_tight_frame(6, 5, 11);
  for (int i = 0; i < 20; ++i) {
    const Eigen::VectorXd x = gaussian_vector(rng, 6);
    const Eigen::VectorXd y = gaussian_vector(rng, 6);
    const auto [re_sum, im_sum] = op.apply_complex(x + y);
    const auto [re_x, im_x] = op.apply_complex(x);
    const auto [re_y, im_y] = op.apply_complex(y);
    CHECK((re_sum - re_x - re_y).norm() <= 1e-12);
    CHECK((im_sum - im_x - im_y).norm() <= 1e-12);
  }
}

TEST_CASE("modulus preserves the norm and contracts differences") {
  auto rng = make_rng(7);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Index n_in = 2 + static_cast<Eigen::Index>(rng() % 9);
    const Eigen::Index n_out = (n_in + 1) / 2 + static_cast<Eigen::Index>(rng() % 4);
    const auto op = random_tight_frame(n_in, n_out, rng());
    const Eigen::VectorXd x = gaussian_vector(rng, n_in);
    const Eigen::VectorXd y = gaussian_vector(rng, n_in);

    const Eigen::VectorXd mx = op.apply_modulus(x);
    CHECK(mx.minCoeff() >= 0.0);
    CHECK(std::abs(mx.squaredNorm() - x.squaredNorm()) <= 1e-10 * x.squaredNorm());

    const double lhs = (mx - op.apply_modulus(y)).norm();
    CHECK(lhs <= (x - y).norm() + 1e-12);
  }
}

TEST_CASE("modulus is invariant under per-row sign flips") {
  auto rng = make_rng(19);
  const auto op = random_tight_frame(5, 4, 23);
  Eigen::MatrixXd re = op.psi_real();
  Eigen::MatrixXd im = op.psi_imag();
  re.row(2) = -re.row(2);
  im.row(2) = -im.row(2);
  const TightFrameOperator flipped(re, im);
  CHECK(flipped.validate(1e-12));

  const Eigen::VectorXd x = gaussian_vector(rng, 5);
  CHECK(op.apply_modulus(x) == flipped.apply_modulus(x));
}

TEST_CASE("batched modulus agrees with the single-vector path") {
  auto rng = make_rng(31);
  const auto op = random_tight_frame(6, 4, 5);
  const Eigen::MatrixXd xs = gaussian_matrix(rng, 6, 10);
  const Eigen::MatrixXd batched = op.apply_modulus_cols(xs);
  for (Eigen::Index c = 0; c < xs.cols(); ++c)
    CHECK((batched.col(c) - op.apply_modulus(xs.col(c))).norm() <= 1e-15);
}

TEST_CASE("cascaded pairings pool 2^k variables") {
  // two pairing stages compute the l2 norm of four coordinates
  const auto first = pairing_operator(4, {{0, 1}, {2, 3}});
  const auto second = pairing_operator(2, {{0, 1}});
  auto rng = make_rng(37);
  for (int i = 0; i < 10; ++i) {
    const Eigen::VectorXd x = gaussian_vector(rng, 4);
    const Eigen::VectorXd pooled = second.apply_modulus(first.apply_modulus(x));
    REQUIRE(pooled.size() == 1);
    CHECK(pooled[0] == doctest::Approx(x.norm()).epsilon(1e-12));
  }
}

TEST_CASE("orthonormalize_columns is a Stiefel retraction") {
  auto rng = make_rng(3);
  const Eigen::MatrixXd m = gaussian_matrix(rng, 8, 5);
  const Eigen::MatrixXd q = orthonormalize_columns(m);
  CHECK((q.transpose() * q - Eigen::MatrixXd::Identity(5, 5)).norm() <= 1e-13);
  // deterministic: same input, same output
  CHECK(orthonormalize_columns(m) == q);
}
