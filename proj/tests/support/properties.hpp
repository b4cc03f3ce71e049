#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace props {

struct Result {
  std::string name;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string first_failure;

  void check(bool ok, const std::string& what) {
    ++checks;
    if (!ok && failures++ == 0) first_failure = what;
  }
};

// Each suite runs over the standard models at depth <= 12.
Result factoriality_extendability();
Result phi_hat_additivity();
Result submultiplicativity();
Result binomial_entropy();
Result qft_persistence();
Result cgc_outputs();
Result ud_unique_factorisation();

std::vector<Result> all();

}  // namespace props
