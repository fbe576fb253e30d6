#pragma once

// Robust multi-frequency reconstruction for the complex waveform model:
// hypothesis (clustering + tau shifts) then test (first criterion on the
// shifted common residues, folding number inside [0, D_q)).

#include <cstddef>
#include <span>
#include <vector>

#include "remrec/numtheory.hpp"
#include "remrec/parallel.hpp"
#include "remrec/remainder_model.hpp"

namespace remrec {

// Per-modulus binary shift; shifted common residue = <r>_gamma - tau*gamma.
using TauAssignment = std::vector<int>;

struct DecodeSolution {
  std::vector<double> estimates;
  std::vector<i64> folding_numbers;
  // clusters[i][l] indexes obs.residues[l]; each entry is used exactly once.
  std::vector<std::vector<std::size_t>> clusters;
  std::vector<TauAssignment> taus;
  double certified_bound = 0.0;
};

// D_q = prod of the first ceil(L/N) co-prime parts. The value dynamic range
// is gamma * (D_q - 1).
i64 folding_range(std::span<const i64> parts, std::size_t n_sources);
i64 folding_range(const ModulusSet& moduli, std::size_t n_sources);

// Every pairwise difference strictly below gamma/2 (1e-9 gamma inward).
bool first_criterion(std::span<const double> shifted_common_residues, double gamma);

// Candidate tau vectors for residues in [0, gamma): every cyclic cut of the
// sorted residues, all-zero first and all-one last. Any tau passing the first
// criterion is among them.
std::vector<TauAssignment> enumerate_tau(std::span<const double> common_residues,
                                         double gamma);

std::vector<double> shift_common_residues(std::span<const double> residues,
                                          std::span<const int> taus, double gamma);

// CRT of (r - shifted)/gamma mod M_l over the co-prime parts; not range checked.
i64 recover_folding(std::span<const double> residues, std::span<const int> taus,
                    const ModulusSet& moduli);

// All proposals passing both criteria, canonically ordered by folding numbers.
// Throws no_feasible_proposal when none survives.
std::vector<DecodeSolution> decode_complex(const ResidueObservation& obs,
                                           const ModulusSet& moduli,
                                           std::size_t n_sources,
                                           const ExecutionContext& ctx = {});

// residues[l][i] is source i's exact residue modulo m_l. True iff every pair
// of distinct sources sits more than 3*gamma apart on every ring.
bool separation_condition(const std::vector<std::vector<double>>& residues,
                          const ModulusSet& moduli);

// prod (M_l - 6)/M_l; throws modulus_too_small if any M_l <= 6.
double separation_probability(std::span<const i64> parts);
double separation_probability(const ModulusSet& moduli);

// Smallest, over all bijections, of the largest per-element |estimate - truth|.
double matched_error(std::span<const double> estimates, std::span<const double> truth);

// Distinct sorted estimate vectors among solutions (equal within tol).
std::vector<std::vector<double>> distinct_estimates(
    const std::vector<DecodeSolution>& solutions, double tol = 1e-9);

}  // namespace remrec
