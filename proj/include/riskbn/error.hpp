#pragma once

#include <stdexcept>
#include <string>

namespace riskbn {

/// Error identities used across the engine. The CLI maps these onto exit
/// codes by class: usage, model/validation, inference.
enum class ErrorCode {
  // structural / model
  cycle_detected,
  cpt_shape_mismatch,
  column_not_normalized,
  unknown_parent,
  unknown_node,
  unknown_state,
  duplicate_node,
  parse_error,
  rate_out_of_range,
  unknown_scenario,
  io_error,
  // query / inference
  invalid_query,
  inconsistent_evidence,
  missing_parent_assignment,
  state_space_too_large,
  all_weights_zero,
  alternative_space_too_large,
  incomplete_assignment,
  conflicting_overrides,
  domain_error,
  // usage
  step_cap_exceeded,
  invalid_sweep,
  unsupported_format,
  invalid_argument,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

const char* error_code_name(ErrorCode code);

}  // namespace riskbn
