#include "remrec/decoder_real.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "remrec/error.hpp"
#include "remrec/log.hpp"

namespace remrec {

namespace {

Rational lcm_of_subset(std::span<const Rational> values, std::uint64_t mask, bool inside) {
  std::vector<Rational> picked;
  for (std::size_t l = 0; l < values.size(); ++l) {
    bool in = ((mask >> l) & 1u) != 0;
    if (in == inside) picked.push_back(values[l]);
  }
  if (picked.empty()) return Rational(1);
  return rational_lcm(picked);
}

Rational exact_rational(double x) {
  i64 scale = 1;
  for (int k = 0; k <= 12; ++k, scale *= 10) {
    double v = x * static_cast<double>(scale);
    double r = std::round(v);
    if (std::abs(v - r) <= 1e-9 * std::max(1.0, std::abs(v)))
      return Rational(static_cast<i64>(r), scale);
  }
  fail(ErrorCode::invalid_argument, "modulus is not a finite decimal");
}

}  // namespace

RangeWitness max_dynamic_range_witness(std::span<const Rational> moduli) {
  require(!moduli.empty(), ErrorCode::empty_input, "no moduli");
  require(moduli.size() <= 24, ErrorCode::too_many_moduli, "too many moduli for subset search");
  RangeWitness best{};
  bool have = false;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << moduli.size()); ++mask) {
    Rational a = lcm_of_subset(moduli, mask, true);
    Rational b = lcm_of_subset(moduli, mask, false);
    Rational value = (a + b) / Rational(2);
    if (!have || value < best.range) {
      Rational diff = a < b ? b - a : a - b;
      best = {value, mask, diff / Rational(2)};
      have = true;
    }
  }
  return best;
}

Rational max_dynamic_range_noiseless(std::span<const Rational> moduli) {
  return max_dynamic_range_witness(moduli).range;
}

double max_dynamic_range_noiseless(std::span<const double> moduli) {
  std::vector<Rational> exact;
  for (double m : moduli) {
    require(m > 0.0 && std::isfinite(m), ErrorCode::non_positive_modulus,
            "moduli must be positive");
    exact.push_back(exact_rational(m));
  }
  return max_dynamic_range_noiseless(exact).to_double();
}

Rational real_folding_range(std::span<const i64> parts, std::size_t n_sources) {
  require(n_sources >= 1, ErrorCode::invalid_argument, "need at least one source");
  require(!parts.empty(), ErrorCode::empty_input, "no co-prime parts");
  std::size_t k = (parts.size() + n_sources - 1) / n_sources;
  std::vector<Rational> first(parts.begin(), parts.begin() + static_cast<std::ptrdiff_t>(k));
  return max_dynamic_range_noiseless(first) - Rational(1);
}

Rational real_folding_range(const ModulusSet& moduli, std::size_t n_sources) {
  return real_folding_range(std::span<const i64>(moduli.parts()), n_sources);
}

std::vector<double> apply_operation(std::span<const double> common, double gamma,
                                    OperationChoice choice) {
  std::vector<double> out(common.begin(), common.end());
  if (choice == OperationChoice::op2)
    for (double& r : out)
      if (r >= gamma / 2.0) r -= gamma;
  return out;
}

bool real_separation_condition(std::span<const double> r_plus,
                               std::span<const double> r_minus, const ModulusSet& moduli) {
  require(r_plus.size() == moduli.size() && r_minus.size() == moduli.size(),
          ErrorCode::invalid_argument, "one residue pair per modulus expected");
  for (std::size_t l = 0; l < moduli.size(); ++l)
    if (circular_distance(r_plus[l], r_minus[l], moduli.modulus(l)) <= moduli.gamma())
      return false;
  return true;
}

bool is_degenerate_common_residue(double x, double gamma, double tol) {
  double c = real_mod(x, gamma);
  return circular_distance(c, 0.0, gamma) <= tol * gamma ||
         circular_distance(c, gamma / 2.0, gamma) <= tol * gamma;
}

namespace {

void check_real_input(const ResidueObservation& obs, const ModulusSet& moduli,
                      std::size_t n) {
  require(n >= 1, ErrorCode::invalid_argument, "need at least one source");
  require(obs.model == Model::real, ErrorCode::invalid_argument,
          "real decoding needs a real-model observation");
  check_observation(obs, moduli, 2 * n);
  require(obs.noise_bound <= moduli.gamma() / 4.0, ErrorCode::noise_claim_too_large,
          "claimed noise bound exceeds gamma/4");
}

// A noisy pure cluster can fold to Y + 1 where Y = floor(X/gamma) < D_q, and
// {Y + 1, -Y - 1} is still uniquely represented, so the accepted folding
// range is [0, D_q + 1).
bool folding_in_range(i64 q, const Rational& dq) { return Rational(q) < dq + Rational(1); }

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

std::vector<RealDecodeSolution> decode_real_single(const ResidueObservation& obs,
                                                   const ModulusSet& moduli,
                                                   const ExecutionContext& ctx) {
  check_real_input(obs, moduli, 1);
  double gamma = moduli.gamma();
  std::size_t L = moduli.size();
  require(L <= 24, ErrorCode::too_many_moduli, "too many moduli for selection search");
  Rational dq = real_folding_range(moduli, 1);

  bool separated = true;
  bool degenerate = true;
  for (std::size_t l = 0; l < L; ++l) {
    const auto& r = obs.residues[l];
    if (circular_distance(r[0], r[1], moduli.modulus(l)) <= gamma + 2.0 * obs.noise_bound)
      separated = false;
    if (circular_distance(real_mod(r[0], gamma), real_mod(r[1], gamma), gamma) > 1e-9 * gamma)
      degenerate = false;
  }
  double bound = separated ? gamma / 4.0 : 3.0 * gamma / 4.0;

  std::size_t selections = std::size_t{1} << L;
  std::vector<std::vector<RealDecodeSolution>> found(selections);
  parallel_for(ctx, selections, [&](std::size_t mask) {
    std::vector<std::size_t> members(L);
    std::vector<double> residues(L), common(L);
    for (std::size_t l = 0; l < L; ++l) {
      members[l] = (mask >> l) & 1u;
      residues[l] = obs.residues[l][members[l]];
      common[l] = real_mod(residues[l], gamma);
    }
    for (auto op : {OperationChoice::op1, OperationChoice::op2}) {
      auto shifted = apply_operation(common, gamma, op);
      if (!first_criterion(shifted, gamma)) continue;
      TauAssignment tau(L);
      for (std::size_t l = 0; l < L; ++l) tau[l] = shifted[l] < 0.0 ? 1 : 0;
      i64 q = recover_folding(residues, tau, moduli);
      if (!folding_in_range(q, dq)) continue;
      RealDecodeSolution s;
      s.estimates = {static_cast<double>(q) * gamma + mean(shifted)};
      s.folding_numbers = {q};
      s.operations = {op};
      s.clusters = {members};
      s.taus = {tau};
      s.certified_bound = bound;
      s.degenerate = degenerate;
      found[mask].push_back(std::move(s));
    }
  });

  std::vector<RealDecodeSolution> out;
  for (auto& v : found)
    for (auto& s : v) out.push_back(std::move(s));
  if (out.empty()) {
    fail(ErrorCode::no_feasible_proposal,
         "no residue selection passes both criteria; noise may exceed the bound "
         "or the source may lie outside the dynamic range");
  }
  return out;
}

std::vector<PoolEntry> real_multi_cluster_pool(const ResidueObservation& obs,
                                               const ModulusSet& moduli, std::size_t n,
                                               const ExecutionContext& ctx) {
  check_real_input(obs, moduli, n);
  double gamma = moduli.gamma();
  std::size_t L = moduli.size();
  std::size_t k = 2 * n;
  Rational dq = real_folding_range(moduli, n);

  i64 total = 1;
  for (std::size_t l = 0; l < L; ++l) total = checked_mul(total, static_cast<i64>(k));
  require(total <= 50'000'000, ErrorCode::budget_exceeded, "too many clusters");

  std::vector<std::vector<PoolEntry>> found(static_cast<std::size_t>(total));
  parallel_for(ctx, found.size(), [&](std::size_t id) {
    std::vector<std::size_t> members(L);
    std::size_t rest = id;
    for (std::size_t l = L; l-- > 0;) {
      members[l] = rest % k;
      rest /= k;
    }
    std::vector<double> residues(L), common(L);
    for (std::size_t l = 0; l < L; ++l) {
      residues[l] = obs.residues[l][members[l]];
      common[l] = real_mod(residues[l], gamma);
    }
    for (auto& tau : enumerate_tau(common, gamma)) {
      auto shifted = shift_common_residues(residues, tau, gamma);
      if (!first_criterion(shifted, gamma)) continue;
      i64 q = recover_folding(residues, tau, moduli);
      if (!folding_in_range(q, dq)) continue;
      double x = std::abs(static_cast<double>(q) * gamma + mean(shifted));
      found[id].push_back({x, q, members, std::move(tau)});
    }
  });

  std::vector<PoolEntry> pool;
  for (auto& v : found)
    for (auto& e : v) pool.push_back(std::move(e));
  std::sort(pool.begin(), pool.end(), [](const PoolEntry& a, const PoolEntry& b) {
    return std::tie(a.estimate, a.q, a.members, a.tau) <
           std::tie(b.estimate, b.q, b.members, b.tau);
  });
  return pool;
}

namespace {

// Perfect matching between observed residues and predicted residues on one
// ring, edges where the circular distance is below tol (Kuhn's algorithm).
class RingMatcher {
 public:
  RingMatcher(std::span<const double> observed, std::span<const double> predicted,
              double ring, double tol)
      : n_(observed.size()), adj_(n_), match_(n_, SIZE_MAX) {
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = 0; b < predicted.size(); ++b)
        if (circular_distance(observed[a], predicted[b], ring) < tol) adj_[a].push_back(b);
  }

  bool perfect() {
    for (std::size_t a = 0; a < n_; ++a) {
      seen_.assign(n_, false);
      if (!augment(a)) return false;
    }
    return true;
  }

 private:
  bool augment(std::size_t a) {
    for (std::size_t b : adj_[a]) {
      if (seen_[b]) continue;
      seen_[b] = true;
      if (match_[b] == SIZE_MAX || augment(match_[b])) {
        match_[b] = a;
        return true;
      }
    }
    return false;
  }

  std::size_t n_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::size_t> match_;
  std::vector<bool> seen_;
};

bool explains(const ResidueObservation& obs, const ModulusSet& moduli,
              std::span<const double> estimates, double tol) {
  for (std::size_t l = 0; l < moduli.size(); ++l) {
    double m = moduli.modulus(l);
    std::vector<double> predicted;
    for (double x : estimates) {
      predicted.push_back(real_mod(x, m));
      predicted.push_back(real_mod(-x, m));
    }
    RingMatcher matcher(obs.residues[l], predicted, m, tol);
    if (!matcher.perfect()) return false;
  }
  return true;
}

// Next n-combination of [0, k) in lexicographic order.
bool next_combination(std::vector<std::size_t>& c, std::size_t k) {
  std::size_t n = c.size();
  for (std::size_t i = n; i-- > 0;) {
    if (c[i] < k - n + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < n; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

std::vector<RealDecodeSolution> decode_real_multi(const ResidueObservation& obs,
                                                  const ModulusSet& moduli, std::size_t n,
                                                  const ExecutionContext& ctx) {
  if (n == 1) return decode_real_single(obs, moduli, ctx);
  auto pool = real_multi_cluster_pool(obs, moduli, n, ctx);
  double gamma = moduli.gamma();

  // One representative per distinct estimate; pool is sorted by estimate.
  std::vector<const PoolEntry*> reps;
  for (const auto& e : pool)
    if (reps.empty() || e.estimate - reps.back()->estimate > 1e-9) reps.push_back(&e);
  if (reps.size() < n) {
    fail(ErrorCode::insufficient_distinct_clusters,
         "only " + std::to_string(reps.size()) + " distinct cluster estimates for " +
             std::to_string(n) + " sources");
  }

  double tol = 3.0 * gamma / 4.0 + obs.noise_bound;
  std::size_t k = reps.size();
  // Split the combination space by its first element for parallel work.
  std::vector<std::vector<RealDecodeSolution>> found(k - n + 1);
  parallel_for(ctx, found.size(), [&](std::size_t first) {
    std::vector<std::size_t> c(n);
    std::iota(c.begin(), c.end(), first);
    std::vector<double> est(n);
    do {
      if (c[0] != first) break;
      for (std::size_t i = 0; i < n; ++i) est[i] = reps[c[i]]->estimate;
      if (!explains(obs, moduli, est, tol)) continue;
      RealDecodeSolution s;
      for (std::size_t i : c) {
        s.estimates.push_back(reps[i]->estimate);
        s.folding_numbers.push_back(reps[i]->q);
        s.clusters.push_back(reps[i]->members);
        s.taus.push_back(reps[i]->tau);
      }
      s.certified_bound = 3.0 * gamma / 4.0;
      found[first].push_back(std::move(s));
    } while (next_combination(c, k));
  });

  std::vector<RealDecodeSolution> out;
  for (auto& v : found)
    for (auto& s : v) out.push_back(std::move(s));
  if (out.empty()) {
    fail(ErrorCode::no_feasible_proposal,
         "no selection of cluster estimates explains every residue");
  }
  auto groups = distinct_estimates(out, gamma / 2.0).size();
  if (groups > 1)
    log::info("real decode returned " + std::to_string(groups) + " separated estimate sets");
  return out;
}

std::vector<std::vector<double>> distinct_estimates(
    const std::vector<RealDecodeSolution>& solutions, double tol) {
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
