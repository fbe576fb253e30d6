#pragma once

// Seeded Monte-Carlo checks of the decoders' error bounds. Trial t draws its
// sources from the "montecarlo" sub-stream (index t) and its noise from the
// "trial-noise" sub-stream, so results do not depend on --jobs.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "remrec/numtheory.hpp"
#include "remrec/parallel.hpp"

namespace remrec {

enum class Experiment {
  complex_bound,         // decode_complex, matched error < 3 gamma/4
  complex_separated,     // trials with separated residues: < gamma/4 and pure
  real_single_bound,     // decode_real_single, < 3 gamma/4, degenerate excluded
  real_multi_bound,      // decode_real_multi, < 3 gamma/4
  separation_frequency,  // empirical separation rate vs prod (M_l - 6)/M_l
};

std::string_view experiment_name(Experiment e);
Experiment parse_experiment(std::string_view text);

struct MonteCarloConfig {
  Experiment experiment = Experiment::complex_bound;
  double gamma = 64.0;
  std::vector<i64> parts{5, 7, 9, 11};
  std::size_t n_sources = 2;
  std::size_t trials = 1000;
  // Noise is uniform in (-delta, delta); negative means gamma/4.
  double delta = -1.0;
  std::uint64_t seed = 1;
  // Sources are uniform in [0, range); 0 means the decoder's dynamic range.
  double range = 0.0;
  // complex_separated passes only with at least this many filtered trials.
  std::size_t min_filtered = 200;
  // separation_frequency tolerance on |empirical - predicted|.
  double frequency_tolerance = 0.01;
};

struct MonteCarloStats {
  std::string experiment;
  std::size_t trials = 0;
  // Trials entering the verdict (after filtering or exclusion).
  std::size_t counted = 0;
  std::size_t within_bound = 0;
  std::size_t no_feasible = 0;
  std::size_t impure = 0;
  std::size_t degenerate = 0;
  std::size_t degenerate_within_bound = 0;
  std::size_t ambiguous = 0;
  double bound = 0.0;
  double max_error = 0.0;
  double range = 0.0;
  double delta = 0.0;
  double empirical_frequency = 0.0;
  double predicted_frequency = 0.0;
  bool pass = false;
};

MonteCarloStats run_montecarlo(const MonteCarloConfig& config, const ExecutionContext& ctx = {});

}  // namespace remrec
