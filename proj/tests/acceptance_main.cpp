// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Instance counts and tolerances are fixed; --seed only reseeds the random
// instance streams.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "scatnet/io.hpp"
#include "scatnet/verify.hpp"

namespace {

using scatnet::verify::PropertyResult;

struct Criterion {
  int index;
  std::string name;
  std::vector<PropertyResult> parts;
};

bool criterion_passes(const Criterion& c) {
  for (const auto& p : c.parts)
    if (!p.pass) return false;
  return true;
}

void print_criterion(const Criterion& c) {
  // Report the binding part: the one closest to (or beyond) its bound.
  const PropertyResult* binding = &c.parts.front();
  for (const auto& p : c.parts)
    if (p.residual - p.bound > binding->residual - binding->bound) binding = &p;

  std::cout << "CRITERION " << c.index << " " << c.name
            << (criterion_passes(c) ? " PASS" : " FAIL")
            << " residual=" << scatnet::io::format_compact(binding->residual)
            << " bound=" << scatnet::io::format_compact(binding->bound) << "\n";
  if (c.parts.size() > 1)
    for (const auto& p : c.parts)
      std::cout << "  " << scatnet::verify::format_property_line(p) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  std::uint64_t seed = 0;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--seed") seed = std::strtoull(argv[i + 1], nullptr, 10);

  namespace v = scatnet::verify;
  const std::vector<Criterion> criteria = {
      {1, "energy_conservation", {v::check_energy_conservation(seed, 200)}},
      {2,
       "contractivity",
       {v::check_contractivity_averaged(seed, 200),
        v::check_contractivity_expected(seed, 200)}},
      {3, "decay_bound", {v::check_decay_bound(seed, 100)}},
      {4,
       "expected_energy_and_variance",
       {v::check_expected_energy_identity(seed, 50),
        v::check_variance_identity(seed, 50)}},
      {5,
       "estimation_error_bound",
       {v::check_estimation_error_mc(seed, 1000),
        v::check_estimation_bound_order(seed, 20)}},
      {6, "template_error_bound", {v::check_template_error_bound(seed, 100)}},
      {7,
       "learning",
       {v::check_gradient_finite_difference(seed, 20),
        v::check_optimizer_descent(seed, 50), v::check_sparse_pair_descent()}},
      {8, "worked_example", {v::check_worked_example()}},
      {9, "classification_accuracy", {v::check_classification_accuracy(seed)}},
      {10, "readout_identity", {v::check_readout_identity(seed, 100)}},
  };

  bool all_pass = true;
  for (const auto& c : criteria) {
    print_criterion(c);
    all_pass = all_pass && criterion_passes(c);
  }
  std::cout << (all_pass ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL") << "\n";
  return all_pass ? 0 : 1;
}
