#pragma once

// Pre-deployment analysis: noise bounds for a rate set, brute-force
// injectivity checks, DoA array representability, and range reports.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "remrec/numtheory.hpp"
#include "remrec/parallel.hpp"
#include "remrec/remainder_model.hpp"

namespace remrec {

struct DeltaBound {
  i64 bound = 0;
  // Minimizing S (bit l set means moduli[l] is in S) and its members.
  std::uint64_t mask = 0;
  std::vector<i64> witness;
};

// min over nonempty proper subsets S of gcd(lcm S, lcm S'); first minimum wins.
DeltaBound delta_upper_bound(std::span<const i64> moduli);

struct UniquenessResult {
  bool unique = true;
  // (earlier, later) source tuples in scan order with equal encodings.
  std::optional<std::pair<std::vector<double>, std::vector<double>>> collision;
  std::uint64_t tuples_checked = 0;
};

// Scans every set of n distinct grid points k*grid_step in [0, D) and compares
// the sorted residue multisets exactly.
UniquenessResult check_unique_encoding(const ModulusSet& moduli, double range,
                                       std::size_t n_sources, Model model,
                                       double grid_step,
                                       std::uint64_t budget = 10'000'000,
                                       const ExecutionContext& ctx = {});

struct ArrayGeometry {
  Rational wavelength;
  // Ascending from 0, at least two sensors.
  std::vector<Rational> positions;
};

void validate_geometry(const ArrayGeometry& geometry);

struct DoaVerdict {
  Rational c;
  bool unique = false;
};

// C = lcm of wavelength/p_l over the sensors off the origin; unique iff C >= 2.
DoaVerdict doa_representable(const ArrayGeometry& geometry);

// Distinct sin values in [-1, 1) on a grid of `grid` points, congruent modulo
// every wavelength/p_l. The congruence test is exact on the rational grid.
std::optional<std::pair<double, double>> doa_ambiguity_search(const ArrayGeometry& geometry,
                                                              i64 grid);

// Smallest multiple of 2 * den(lambda) * num(p_2) that is >= minimum. Its
// spacing divides the denominator of every common multiple of the
// wavelength/p_l, so a congruent pair, if any, lies on the grid.
i64 default_doa_grid(const ArrayGeometry& geometry, i64 minimum = 1000);

// Per-source CRT when residues are already labeled: residues[i][l] is source
// i's residue modulo m_l. Valid for sources below lcm of the moduli.
std::vector<double> ordered_crt_decode(const std::vector<std::vector<double>>& residues,
                                       const ModulusSet& moduli);

struct RateSelectionReport {
  double gamma = 0.0;
  std::vector<i64> parts;
  std::vector<double> moduli;
  // The bound on the moduli themselves: gamma times the bound on the parts.
  double delta_upper_bound = 0.0;
  std::vector<i64> worst_partition_parts;
  std::vector<double> worst_partition;
  // Index k holds N = k + 1.
  std::vector<i64> complex_folding_range;
  std::vector<double> complex_dynamic_range;
  std::vector<Rational> real_folding_range;
  std::vector<double> real_dynamic_range;
  double lcm = 0.0;
};

RateSelectionReport rate_selection_report(const ModulusSet& moduli, std::size_t max_sources);

}  // namespace remrec
