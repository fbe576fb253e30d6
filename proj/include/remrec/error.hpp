#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace remrec {

enum class ErrorCode {
  invalid_argument,
  non_coprime_moduli,
  non_positive_modulus,
  empty_input,
  overflow,
  noise_bound_exceeded,
  noise_claim_too_large,
  peak_deficit,
  non_integral_folding,
  no_feasible_proposal,
  insufficient_distinct_clusters,
  modulus_too_small,
  too_many_moduli,
  budget_exceeded,
  no_pair_in_window,
  insufficient_lags,
  invalid_geometry,
  io_error,
};

// Stable machine-readable name, used in CLI error lines.
std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace remrec
