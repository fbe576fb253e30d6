#include "remrec/decoder_complex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "remrec/error.hpp"
#include "remrec/log.hpp"

namespace remrec {

i64 folding_range(std::span<const i64> parts, std::size_t n_sources) {
  require(n_sources >= 1, ErrorCode::invalid_argument, "need at least one source");
  require(!parts.empty(), ErrorCode::empty_input, "no co-prime parts");
  std::size_t k = (parts.size() + n_sources - 1) / n_sources;
  return product(parts.first(k));
}

i64 folding_range(const ModulusSet& moduli, std::size_t n_sources) {
  return folding_range(std::span<const i64>(moduli.parts()), n_sources);
}

bool first_criterion(std::span<const double> shifted, double gamma) {
  if (shifted.size() < 2) return true;
  auto [lo, hi] = std::minmax_element(shifted.begin(), shifted.end());
  return *hi - *lo < gamma / 2.0 - 1e-9 * gamma;
}

std::vector<TauAssignment> enumerate_tau(std::span<const double> common, double gamma) {
  (void)gamma;
  std::size_t L = common.size();
  std::vector<std::size_t> order(L);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return common[a] < common[b]; });
  std::vector<TauAssignment> out;
  out.reserve(L + 1);
  // Cut after the k smallest values: those keep tau = 0, the rest wrap down.
  for (std::size_t k = L + 1; k-- > 0;) {
    TauAssignment tau(L, 0);
    for (std::size_t j = k; j < L; ++j) tau[order[j]] = 1;
    out.push_back(std::move(tau));
  }
  return out;
}

std::vector<double> shift_common_residues(std::span<const double> residues,
                                          std::span<const int> taus, double gamma) {
  require(residues.size() == taus.size(), ErrorCode::invalid_argument,
          "tau vector length does not match the cluster");
  std::vector<double> out(residues.size());
  for (std::size_t l = 0; l < residues.size(); ++l)
    out[l] = real_mod(residues[l], gamma) - taus[l] * gamma;
  return out;
}

i64 recover_folding(std::span<const double> residues, std::span<const int> taus,
                    const ModulusSet& moduli) {
  require(residues.size() == moduli.size(), ErrorCode::invalid_argument,
          "cluster needs one residue per modulus");
  double gamma = moduli.gamma();
  auto shifted = shift_common_residues(residues, taus, gamma);
  CongruenceSystem system;
  for (std::size_t l = 0; l < residues.size(); ++l) {
    double f = (residues[l] - shifted[l]) / gamma;
    double rounded = std::round(f);
    require(std::abs(f - rounded) <= 1e-6, ErrorCode::non_integral_folding,
            "folding residue is not integral");
    i64 part = moduli.parts()[l];
    system.push_back({floor_mod(static_cast<i64>(rounded), part), part});
  }
  return solve_crt(system);
}

namespace {

struct ClusterCandidate {
  i64 q;
  double estimate;
  TauAssignment tau;
};

std::vector<ClusterCandidate> decode_cluster(std::span<const double> residues,
                                             const ModulusSet& moduli, i64 dq) {
  double gamma = moduli.gamma();
  std::vector<double> common(residues.size());
  for (std::size_t l = 0; l < residues.size(); ++l) common[l] = real_mod(residues[l], gamma);
  std::vector<ClusterCandidate> out;
  for (auto& tau : enumerate_tau(common, gamma)) {
    auto shifted = shift_common_residues(residues, tau, gamma);
    if (!first_criterion(shifted, gamma)) continue;
    i64 q = recover_folding(residues, tau, moduli);
    if (q >= dq) continue;
    double mean = std::accumulate(shifted.begin(), shifted.end(), 0.0) /
                  static_cast<double>(shifted.size());
    out.push_back({q, static_cast<double>(q) * gamma + mean, std::move(tau)});
  }
  return out;
}

bool observed_separated(const ResidueObservation& obs, const ModulusSet& moduli,
                        double threshold) {
  for (std::size_t l = 0; l < obs.residues.size(); ++l) {
    const auto& r = obs.residues[l];
    for (std::size_t a = 0; a < r.size(); ++a)
      for (std::size_t b = a + 1; b < r.size(); ++b)
        if (circular_distance(r[a], r[b], moduli.modulus(l)) <= threshold) return false;
  }
  return true;
}

auto solution_key(const DecodeSolution& s) {
  return std::tie(s.folding_numbers, s.estimates, s.clusters, s.taus);
}

}  // namespace

std::vector<DecodeSolution> decode_complex(const ResidueObservation& obs,
                                           const ModulusSet& moduli, std::size_t n,
                                           const ExecutionContext& ctx) {
  require(n >= 1, ErrorCode::invalid_argument, "need at least one source");
  require(obs.model == Model::complex, ErrorCode::invalid_argument,
          "decode_complex needs a complex-model observation");
  check_observation(obs, moduli, n);
  double gamma = moduli.gamma();
  require(obs.noise_bound <= gamma / 4.0, ErrorCode::noise_claim_too_large,
          "claimed noise bound exceeds gamma/4");
  std::size_t L = moduli.size();
  i64 dq = folding_range(moduli, n);

  // Every cluster (one entry per modulus) is decoded once, addressed by a
  // mixed-radix index over the per-modulus entry indices.
  i64 n_clusters = 1;
  for (std::size_t l = 0; l < L; ++l) n_clusters = checked_mul(n_clusters, static_cast<i64>(n));
  require(n_clusters <= 50'000'000, ErrorCode::budget_exceeded, "too many clusters");
  auto members_of = [&](std::size_t id) {
    std::vector<std::size_t> m(L);
    for (std::size_t l = L; l-- > 0;) {
      m[l] = id % n;
      id /= n;
    }
    return m;
  };
  auto id_of = [&](const std::vector<std::size_t>& m) {
    std::size_t id = 0;
    for (std::size_t l = 0; l < L; ++l) id = id * n + m[l];
    return id;
  };
  std::vector<std::vector<ClusterCandidate>> table(static_cast<std::size_t>(n_clusters));
  parallel_for(ctx, table.size(), [&](std::size_t id) {
    auto m = members_of(id);
    std::vector<double> r(L);
    for (std::size_t l = 0; l < L; ++l) r[l] = obs.residues[l][m[l]];
    table[id] = decode_cluster(r, moduli, dq);
  });

  std::vector<std::vector<std::size_t>> perms;
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));

  i64 n_clusterings = 1;
  for (std::size_t l = 1; l < L; ++l)
    n_clusterings = checked_mul(n_clusterings, static_cast<i64>(perms.size()));
  require(n_clusterings <= 50'000'000, ErrorCode::budget_exceeded,
          "too many clustering proposals");

  double bound = observed_separated(obs, moduli, 3.0 * gamma + 2.0 * obs.noise_bound)
                     ? gamma / 4.0
                     : 3.0 * gamma / 4.0;

  std::vector<std::vector<DecodeSolution>> found(static_cast<std::size_t>(n_clusterings));
  parallel_for(ctx, found.size(), [&](std::size_t index) {
    std::vector<std::vector<std::size_t>> clusters(n, std::vector<std::size_t>(L));
    std::size_t rest = index;
    for (std::size_t l = L; l-- > 1;) {
      const auto& perm = perms[rest % perms.size()];
      rest /= perms.size();
      for (std::size_t i = 0; i < n; ++i) clusters[i][l] = perm[i];
    }
    for (std::size_t i = 0; i < n; ++i) clusters[i][0] = i;

    std::vector<const std::vector<ClusterCandidate>*> cands(n);
    for (std::size_t i = 0; i < n; ++i) {
      cands[i] = &table[id_of(clusters[i])];
      if (cands[i]->empty()) return;
    }
    std::vector<std::size_t> pick(n, 0);
    for (;;) {
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), 0);
      auto key = [&](std::size_t i) {
        const auto& c = (*cands[i])[pick[i]];
        return std::tie(c.q, c.estimate, clusters[i], c.tau);
      };
      std::sort(order.begin(), order.end(),
                [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
      DecodeSolution s;
      s.certified_bound = bound;
      for (std::size_t i : order) {
        const auto& c = (*cands[i])[pick[i]];
        s.estimates.push_back(c.estimate);
        s.folding_numbers.push_back(c.q);
        s.clusters.push_back(clusters[i]);
        s.taus.push_back(c.tau);
      }
      found[index].push_back(std::move(s));

      std::size_t i = 0;
      while (i < n && ++pick[i] == cands[i]->size()) pick[i++] = 0;
      if (i == n) break;
    }
  });

  std::vector<DecodeSolution> out;
  for (auto& v : found)
    for (auto& s : v) out.push_back(std::move(s));
  std::sort(out.begin(), out.end(), [](const DecodeSolution& a, const DecodeSolution& b) {
    return solution_key(a) < solution_key(b);
  });
  if (out.empty()) {
    fail(ErrorCode::no_feasible_proposal,
         "no clustering proposal passes both criteria; noise may exceed the "
         "bound or sources may lie outside the dynamic range");
  }
  if (distinct_estimates(out).size() > 1)
    log::info("complex decode returned " + std::to_string(out.size()) + " survivors");
  return out;
}

bool separation_condition(const std::vector<std::vector<double>>& residues,
                          const ModulusSet& moduli) {
  require(residues.size() == moduli.size(), ErrorCode::invalid_argument,
          "one residue list per modulus expected");
  double gamma = moduli.gamma();
  for (std::size_t l = 0; l < residues.size(); ++l) {
    const auto& r = residues[l];
    for (std::size_t a = 0; a < r.size(); ++a)
      for (std::size_t b = a + 1; b < r.size(); ++b)
        if (circular_distance(r[a], r[b], moduli.modulus(l)) <= 3.0 * gamma) return false;
  }
  return true;
}

double separation_probability(std::span<const i64> parts) {
  require(!parts.empty(), ErrorCode::empty_input, "no co-prime parts");
  double p = 1.0;
  for (i64 m : parts) {
    require(m > 6, ErrorCode::modulus_too_small,
            "separation probability needs every co-prime part > 6");
    p *= static_cast<double>(m - 6) / static_cast<double>(m);
  }
  return p;
}

double separation_probability(const ModulusSet& moduli) {
  return separation_probability(std::span<const i64>(moduli.parts()));
}

double matched_error(std::span<const double> estimates, std::span<const double> truth) {
  require(estimates.size() == truth.size(), ErrorCode::invalid_argument,
          "estimate and truth sizes differ");
  require(estimates.size() <= 9, ErrorCode::budget_exceeded,
          "matched_error enumerates permutations; at most 9 sources");
  std::vector<std::size_t> perm(estimates.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = estimates.empty() ? 0.0 : INFINITY;
  do {
    double worst = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i)
      worst = std::max(worst, std::abs(estimates[perm[i]] - truth[i]));
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::vector<std::vector<double>> distinct_estimates(
    const std::vector<DecodeSolution>& solutions, double tol) {
  std::vector<std::vector<double>> out;
  for (const auto& s : solutions) {
    auto e = s.estimates;
    std::sort(e.begin(), e.end());
    bool seen = std::any_of(out.begin(), out.end(), [&](const std::vector<double>& o) {
      for (std::size_t i = 0; i < e.size(); ++i)
        if (std::abs(o[i] - e[i]) > tol) return false;
      return true;
    });
    if (!seen) out.push_back(std::move(e));
  }
  return out;
}

}  // namespace remrec
