#include "remrec/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "remrec/decoder_complex.hpp"
#include "remrec/decoder_real.hpp"
#include "remrec/error.hpp"
#include "remrec/remainder_model.hpp"
#include "remrec/rng.hpp"

namespace remrec {

std::string_view experiment_name(Experiment e) {
  switch (e) {
    case Experiment::complex_bound: return "complex-bound";
    case Experiment::complex_separated: return "complex-separated";
    case Experiment::real_single_bound: return "real-single-bound";
    case Experiment::real_multi_bound: return "real-multi-bound";
    case Experiment::separation_frequency: return "separation-frequency";
  }
  return "unknown";
}

Experiment parse_experiment(std::string_view text) {
  for (auto e : {Experiment::complex_bound, Experiment::complex_separated,
                 Experiment::real_single_bound, Experiment::real_multi_bound,
                 Experiment::separation_frequency}) {
    if (experiment_name(e) == text) return e;
  }
  fail(ErrorCode::invalid_argument, "unknown experiment '" + std::string(text) + "'");
}

namespace {

struct Outcome {
  bool counted = false;
  bool feasible = true;
  bool within = false;
  bool pure = true;
  bool degenerate = false;
  bool ambiguous = false;
  bool event = false;
  double error = 0.0;
};

std::vector<double> draw_sources(Rng& rng, std::size_t n, double range) {
  std::vector<double> xs;
  while (xs.size() < n) {
    double x = rng.uniform(0.0, range);
    if (std::find(xs.begin(), xs.end(), x) == xs.end()) xs.push_back(x);
  }
  return xs;
}

template <class Solution>
std::size_t best_match(const std::vector<Solution>& sols, const std::vector<double>& truth,
                       double& error) {
  std::size_t best = 0;
  error = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sols.size(); ++i) {
    double e = matched_error(sols[i].estimates, truth);
    if (e < error) {
      error = e;
      best = i;
    }
  }
  return best;
}

bool clusters_pure(const DecodeSolution& s, const ResidueObservation& obs) {
  for (const auto& cluster : s.clusters) {
    int source = obs.labels[0][cluster[0]].source;
    for (std::size_t l = 0; l < cluster.size(); ++l)
      if (obs.labels[l][cluster[l]].source != source) return false;
  }
  return true;
}

}  // namespace

MonteCarloStats run_montecarlo(const MonteCarloConfig& cfg, const ExecutionContext& ctx) {
  ModulusSet moduli(cfg.gamma, cfg.parts);
  double gamma = moduli.gamma();
  MonteCarloStats st;
  st.experiment = std::string(experiment_name(cfg.experiment));
  st.trials = cfg.trials;
  st.delta = cfg.delta < 0.0 ? gamma / 4.0 : cfg.delta;

  std::size_t n = cfg.n_sources;
  Model model = Model::complex;
  switch (cfg.experiment) {
    case Experiment::complex_bound:
      st.bound = 3.0 * gamma / 4.0;
      break;
    case Experiment::complex_separated:
      st.bound = gamma / 4.0;
      break;
    case Experiment::real_single_bound:
      n = 1;
      model = Model::real;
      st.bound = 3.0 * gamma / 4.0;
      break;
    case Experiment::real_multi_bound:
      model = Model::real;
      st.bound = 3.0 * gamma / 4.0;
      break;
    case Experiment::separation_frequency:
      n = 2;
      st.predicted_frequency = separation_probability(moduli);
      break;
  }
  st.range = cfg.range > 0.0 ? cfg.range : dynamic_range(moduli, n, model);

  std::vector<Outcome> outcomes(cfg.trials);
  parallel_for(ctx, cfg.trials, [&](std::size_t t) {
    Rng rng(cfg.seed, "montecarlo", t);
    Outcome& o = outcomes[t];
    if (cfg.experiment == Experiment::separation_frequency) {
      std::vector<std::vector<double>> residues(moduli.size());
      for (std::size_t l = 0; l < moduli.size(); ++l)
        for (std::size_t i = 0; i < n; ++i)
          residues[l].push_back(rng.uniform(0.0, moduli.modulus(l)));
      o.counted = true;
      o.event = separation_condition(residues, moduli);
      return;
    }

    auto truth = draw_sources(rng, n, st.range);
    if (cfg.experiment == Experiment::complex_separated) {
      std::vector<std::vector<double>> exact(moduli.size());
      for (std::size_t l = 0; l < moduli.size(); ++l)
        for (double x : truth) exact[l].push_back(real_mod(x, moduli.modulus(l)));
      if (!separation_condition(exact, moduli)) return;
    }
    if (cfg.experiment == Experiment::real_single_bound)
      o.degenerate = is_degenerate_common_residue(truth[0], gamma);
    o.counted = !o.degenerate;

    std::uint64_t noise_seed = substream_seed(cfg.seed, "trial-noise", t);
    auto obs = encode({truth, model}, moduli, NoiseSpec::uniform(st.delta, noise_seed));
    obs = shuffled(obs, noise_seed);
    try {
      if (model == Model::complex) {
        auto sols = decode_complex(obs, moduli, n);
        auto best = best_match(sols, truth, o.error);
        o.pure = clusters_pure(sols[best], obs);
        o.ambiguous = distinct_estimates(sols, gamma / 2.0).size() > 1;
      } else {
        auto sols = n == 1 ? decode_real_single(obs, moduli) : decode_real_multi(obs, moduli, n);
        best_match(sols, truth, o.error);
        o.ambiguous = distinct_estimates(sols, gamma / 2.0).size() > 1;
      }
      o.within = o.error < st.bound;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::no_feasible_proposal &&
          e.code() != ErrorCode::insufficient_distinct_clusters)
        throw;
      o.feasible = false;
      o.error = std::numeric_limits<double>::infinity();
    }
  });

  std::size_t events = 0;
  for (const auto& o : outcomes) {
    if (o.degenerate) {
      ++st.degenerate;
      if (o.within) ++st.degenerate_within_bound;
      continue;
    }
    if (!o.counted) continue;
    ++st.counted;
    if (o.event) ++events;
    if (cfg.experiment == Experiment::separation_frequency) continue;
    if (!o.feasible) ++st.no_feasible;
    if (o.within) ++st.within_bound;
    if (!o.pure) ++st.impure;
    if (o.ambiguous) ++st.ambiguous;
    st.max_error = std::max(st.max_error, o.error);
  }

  switch (cfg.experiment) {
    case Experiment::separation_frequency:
      st.empirical_frequency =
          st.counted == 0 ? 0.0 : static_cast<double>(events) / static_cast<double>(st.counted);
      st.pass = st.counted > 0 && std::abs(st.empirical_frequency - st.predicted_frequency) <=
                                      cfg.frequency_tolerance;
      break;
    case Experiment::complex_separated:
      st.pass = st.counted >= cfg.min_filtered && st.within_bound == st.counted && st.impure == 0;
      break;
    default:
      st.pass = st.counted > 0 && st.within_bound == st.counted;
      break;
  }
  return st;
}

}  // namespace remrec
