#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scatnet/network.hpp"

namespace scatnet::verify {

enum class Level { quick, full };

/// Outcome of one property check; passes iff residual <= bound.
struct PropertyResult {
  std::string name;
  bool pass;
  double residual;
  double bound;
};

struct Report {
  std::vector<PropertyResult> properties;
  std::vector<std::string> info;  // free-form diagnostic lines
  bool all_pass() const;
};

/// Full invariant suite over seeded random instances.
Report run_suite(std::uint64_t seed, Level level);

/// Network-specific subset, run against a given (possibly broken) model.
Report run_model_suite(const ScatteringNetwork& net, std::uint64_t seed);

// Individual checks. Residual conventions: relative identity error for the
// exact identities, worst constraint violation (<= 0 when satisfied) for the
// inequality checks, misclassification rate for the accuracy check.
PropertyResult check_frame_partition_algebra(std::uint64_t seed, int instances);
PropertyResult check_energy_conservation(std::uint64_t seed, int instances);
PropertyResult check_contractivity_averaged(std::uint64_t seed, int instances);
PropertyResult check_contractivity_expected(std::uint64_t seed, int instances);
PropertyResult check_decay_bound(std::uint64_t seed, int instances);
PropertyResult check_expected_energy_identity(std::uint64_t seed, int instances);
PropertyResult check_variance_identity(std::uint64_t seed, int instances);
PropertyResult check_empirical_variance_identity(std::uint64_t seed, int instances);
PropertyResult check_estimation_error_mc(std::uint64_t seed, int trials);
PropertyResult check_estimation_bound_order(std::uint64_t seed, int instances);
PropertyResult check_template_error_bound(std::uint64_t seed, int instances);
PropertyResult check_gradient_finite_difference(std::uint64_t seed, int points);
PropertyResult check_optimizer_descent(std::uint64_t seed, int runs);
PropertyResult check_sparse_pair_descent();
PropertyResult check_worked_example();
PropertyResult check_classification_accuracy(std::uint64_t seed);
PropertyResult check_classification_relabeling(std::uint64_t seed, int points);
PropertyResult check_readout_identity(std::uint64_t seed, int instances);

/// Layer-energy decay profile of a wide-spread distribution, reported as a
/// diagnostic line (the tail decay is slow and is not a pass/fail property).
std::string decay_profile_info(std::uint64_t seed);

std::string format_property_line(const PropertyResult& r);

}  // namespace scatnet::verify
