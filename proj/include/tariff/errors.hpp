#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tariff {

// Inputs violate a documented precondition or schema.
class validation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two groups share the same willingness to pay.  Strict ordering underpins
// every threshold argument, so this is rejected instead of silently merged;
// callers that want merged groups must pre-merge populations explicitly.
class duplicate_theta_error : public validation_error {
 public:
  duplicate_theta_error(std::size_t first, std::size_t second, double theta)
      : validation_error("duplicate willingness to pay " + std::to_string(theta) +
                         " in group entries " + std::to_string(first) + " and " +
                         std::to_string(second)),
        first_index(first),
        second_index(second),
        theta(theta) {}

  std::size_t first_index;   // positions in the caller-supplied list
  std::size_t second_index;
  double theta;
};

// A menu was requested for a market that fails the incentive condition.
class infeasible_error : public std::runtime_error {
 public:
  infeasible_error(const std::string& what, int violated_q, double margin)
      : std::runtime_error(what), violated_q(violated_q), margin(margin) {}

  int violated_q;  // 1-based adjacent pair whose ratio fell below its threshold
  double margin;   // ratio minus threshold (negative when violated)
};

// Internal inconsistency (bracket without sign change, failed identity).
// Indicates a bug, not bad input.
class consistency_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace tariff
