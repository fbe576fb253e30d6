#pragma once

// Independent reference implementations used to check the library. They are
// deliberately naive: exhaustive scans and literal enumeration, no shortcuts
// shared with the code under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <tuple>
#include <vector>

namespace oracle {

using i64 = std::int64_t;

// Smallest x in [0, prod) with x % m_i == r_i, or -1.
inline i64 crt_scan(const std::vector<i64>& residues, const std::vector<i64>& moduli) {
  i64 prod = 1;
  for (i64 m : moduli) prod *= m;
  for (i64 x = 0; x < prod; ++x) {
    bool ok = true;
    for (std::size_t i = 0; i < moduli.size() && ok; ++i) ok = x % moduli[i] == residues[i];
    if (ok) return x;
  }
  return -1;
}

inline double mod(double a, double b) {
  double r = std::fmod(a, b);
  if (r < 0) r += b;
  if (r >= b - 1e-9 * b) r = 0;
  return r;
}

inline bool pairwise_below(const std::vector<double>& v, double limit) {
  for (std::size_t a = 0; a < v.size(); ++a)
    for (std::size_t b = 0; b < v.size(); ++b)
      if (std::abs(v[a] - v[b]) >= limit) return false;
  return true;
}

// One decoded cluster: residue index per modulus, tau per modulus, folding.
using ClusterKey = std::tuple<std::vector<std::size_t>, std::vector<int>, i64>;
using SolutionKey = std::vector<ClusterKey>;

struct Decoded {
  bool ok = false;
  i64 q = 0;
  double estimate = 0;
};

// Literal decoding of one cluster under one tau vector.
inline Decoded decode_cluster(const std::vector<double>& r, const std::vector<int>& tau,
                              double gamma, const std::vector<i64>& parts) {
  std::vector<double> shifted(r.size());
  for (std::size_t l = 0; l < r.size(); ++l) shifted[l] = mod(r[l], gamma) - tau[l] * gamma;
  if (!pairwise_below(shifted, gamma / 2 - 1e-9 * gamma)) return {};
  std::vector<i64> folds(r.size());
  for (std::size_t l = 0; l < r.size(); ++l) {
    i64 f = std::llround((r[l] - shifted[l]) / gamma);
    folds[l] = ((f % parts[l]) + parts[l]) % parts[l];
  }
  i64 q = crt_scan(folds, parts);
  double mean = std::accumulate(shifted.begin(), shifted.end(), 0.0) / shifted.size();
  return {true, q, q * gamma + mean};
}

inline std::vector<std::vector<int>> all_taus(std::size_t L) {
  std::vector<std::vector<int>> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << L); ++mask) {
    std::vector<int> t(L);
    for (std::size_t l = 0; l < L; ++l) t[l] = (mask >> l) & 1;
    out.push_back(t);
  }
  return out;
}

inline i64 complex_dq(const std::vector<i64>& parts, std::size_t n) {
  std::size_t k = (parts.size() + n - 1) / n;
  i64 p = 1;
  for (std::size_t l = 0; l < k; ++l) p *= parts[l];
  return p;
}

// Twice the accepted real folding bound: q is accepted iff 2q < min_U (P_U + P_U'),
// with P the product over U within the first ceil(L/N) parts.
inline i64 real_twice_bound(const std::vector<i64>& parts, std::size_t n) {
  std::size_t k = (parts.size() + n - 1) / n;
  i64 best = -1;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    i64 a = 1, b = 1;
    for (std::size_t l = 0; l < k; ++l) ((mask >> l) & 1 ? a : b) *= parts[l];
    if (best < 0 || a + b < best) best = a + b;
  }
  return best;
}

// Every per-modulus bijection (modulus 0 included) and every tau vector for
// every cluster; both criteria applied literally. Returns canonical keys.
inline std::set<SolutionKey> complex_survivors(const std::vector<std::vector<double>>& residues,
                                              double gamma, const std::vector<i64>& parts,
                                              std::size_t n) {
  std::size_t L = parts.size();
  i64 dq = complex_dq(parts, n);
  std::vector<std::vector<std::size_t>> perms;
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));

  std::set<SolutionKey> out;
  std::size_t total = 1;
  for (std::size_t l = 0; l < L; ++l) total *= perms.size();
  auto taus = all_taus(L);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::vector<std::vector<std::size_t>> clusters(n, std::vector<std::size_t>(L));
    std::size_t rest = idx;
    for (std::size_t l = 0; l < L; ++l) {
      const auto& perm = perms[rest % perms.size()];
      rest /= perms.size();
      for (std::size_t i = 0; i < n; ++i) clusters[i][l] = perm[i];
    }
    // Cartesian product of tau vectors over the n clusters.
    std::vector<std::vector<ClusterKey>> options(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> r(L);
      for (std::size_t l = 0; l < L; ++l) r[l] = residues[l][clusters[i][l]];
      for (const auto& t : taus) {
        auto d = decode_cluster(r, t, gamma, parts);
        if (d.ok && d.q < dq) options[i].emplace_back(clusters[i], t, d.q);
      }
    }
    std::vector<std::size_t> pick(n, 0);
    if (std::any_of(options.begin(), options.end(), [](const auto& o) { return o.empty(); }))
      continue;
    for (;;) {
      SolutionKey key;
      for (std::size_t i = 0; i < n; ++i) key.push_back(options[i][pick[i]]);
      std::sort(key.begin(), key.end());
      out.insert(key);
      std::size_t i = 0;
      while (i < n && ++pick[i] == options[i].size()) pick[i++] = 0;
      if (i == n) break;
    }
  }
  return out;
}

struct RealSingle {
  std::vector<std::size_t> members;
  int op;  // 1 or 2
  i64 q;
  double estimate;
};

// All 2^L selections of one of the two residues per modulus, both operations.
inline std::vector<RealSingle> real_single_survivors(
    const std::vector<std::vector<double>>& residues, double gamma, const std::vector<i64>& parts) {
  std::size_t L = parts.size();
  i64 twice = real_twice_bound(parts, 1);
  std::vector<RealSingle> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << L); ++mask) {
    std::vector<std::size_t> members(L);
    std::vector<double> r(L);
    for (std::size_t l = 0; l < L; ++l) {
      members[l] = (mask >> l) & 1;
      r[l] = residues[l][members[l]];
    }
    for (int op : {1, 2}) {
      std::vector<int> tau(L, 0);
      if (op == 2)
        for (std::size_t l = 0; l < L; ++l) tau[l] = mod(r[l], gamma) >= gamma / 2 ? 1 : 0;
      auto d = decode_cluster(r, tau, gamma, parts);
      if (d.ok && 2 * d.q < twice) out.push_back({members, op, d.q, d.estimate});
    }
  }
  return out;
}

// Every assignment of the 2N residues to 2N slots (modulus 0 fixed), every
// slot's cluster under every tau vector. Returns the passing (members, tau, q).
inline std::set<ClusterKey> real_pool(const std::vector<std::vector<double>>& residues,
                                      double gamma, const std::vector<i64>& parts,
                                      std::size_t n) {
  std::size_t L = parts.size();
  std::size_t k = 2 * n;
  i64 twice = real_twice_bound(parts, n);
  std::vector<std::vector<std::size_t>> perms;
  std::vector<std::size_t> p(k);
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  auto taus = all_taus(L);

  std::set<ClusterKey> out;
  std::size_t total = 1;
  for (std::size_t l = 1; l < L; ++l) total *= perms.size();
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    std::vector<std::vector<std::size_t>> slots(k, std::vector<std::size_t>(L));
    for (std::size_t s = 0; s < k; ++s) slots[s][0] = s;
    for (std::size_t l = 1; l < L; ++l) {
      const auto& perm = perms[rest % perms.size()];
      rest /= perms.size();
      for (std::size_t s = 0; s < k; ++s) slots[s][l] = perm[s];
    }
    for (const auto& members : slots) {
      std::vector<double> r(L);
      for (std::size_t l = 0; l < L; ++l) r[l] = residues[l][members[l]];
      for (const auto& t : taus) {
        auto d = decode_cluster(r, t, gamma, parts);
        if (d.ok && 2 * d.q < twice) out.emplace(members, t, d.q);
      }
    }
  }
  return out;
}

// Per-element max |a - b| minimized over bijections.
inline double matched(std::vector<double> a, const std::vector<double>& b) {
  std::sort(a.begin(), a.end());
  double best = INFINITY;
  do {
    double worst = 0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    best = std::min(best, worst);
  } while (std::next_permutation(a.begin(), a.end()));
  return best;
}

}  // namespace oracle
