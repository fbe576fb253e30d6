#include "remrec/error.hpp"

namespace remrec {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::non_coprime_moduli: return "NonCoprimeModuli";
    case ErrorCode::non_positive_modulus: return "NonPositiveModulus";
    case ErrorCode::empty_input: return "EmptyInput";
    case ErrorCode::overflow: return "Overflow";
    case ErrorCode::noise_bound_exceeded: return "NoiseBoundExceeded";
    case ErrorCode::noise_claim_too_large: return "NoiseClaimTooLarge";
    case ErrorCode::peak_deficit: return "PeakDeficit";
    case ErrorCode::non_integral_folding: return "NonIntegralFolding";
    case ErrorCode::no_feasible_proposal: return "NoFeasibleProposal";
    case ErrorCode::insufficient_distinct_clusters:
      return "InsufficientDistinctClusters";
    case ErrorCode::modulus_too_small: return "ModulusTooSmall";
    case ErrorCode::too_many_moduli: return "TooManyModuli";
    case ErrorCode::budget_exceeded: return "BudgetExceeded";
    case ErrorCode::no_pair_in_window: return "NoPairInWindow";
    case ErrorCode::insufficient_lags: return "InsufficientLags";
    case ErrorCode::invalid_geometry: return "InvalidGeometry";
    case ErrorCode::io_error: return "IoError";
  }
  return "Unknown";
}

}  // namespace remrec
