#include "remrec/design_tools.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "remrec/decoder_complex.hpp"
#include "remrec/decoder_real.hpp"
#include "remrec/error.hpp"

namespace remrec {

DeltaBound delta_upper_bound(std::span<const i64> moduli) {
  require(moduli.size() >= 2, ErrorCode::invalid_argument, "need at least two moduli");
  require(moduli.size() <= 24, ErrorCode::too_many_moduli,
          "exhaustive subset search is limited to 24 moduli");
  for (i64 m : moduli)
    require(m >= 1, ErrorCode::non_positive_modulus, "moduli must be positive");
  std::size_t L = moduli.size();
  DeltaBound best;
  for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << L); ++mask) {
    i64 in = 1, out = 1;
    for (std::size_t l = 0; l < L; ++l) {
      if ((mask >> l) & 1u)
        in = lcm(in, moduli[l]);
      else
        out = lcm(out, moduli[l]);
    }
    i64 g = gcd(in, out);
    if (best.bound == 0 || g < best.bound) {
      best.bound = g;
      best.mask = mask;
    }
  }
  for (std::size_t l = 0; l < L; ++l)
    if ((best.mask >> l) & 1u) best.witness.push_back(moduli[l]);
  return best;
}

namespace {

using Encoding = std::vector<std::vector<double>>;

Encoding encode_tuple(const ModulusSet& moduli, std::span<const double> xs, Model model) {
  Encoding e(moduli.size());
  for (std::size_t l = 0; l < moduli.size(); ++l) {
    double m = moduli.modulus(l);
    for (double x : xs) {
      e[l].push_back(real_mod(x, m));
      if (model == Model::real) e[l].push_back(real_mod(-x, m));
    }
    std::sort(e[l].begin(), e[l].end());
  }
  return e;
}

bool next_combination(std::vector<std::uint64_t>& c, std::uint64_t k) {
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

double binomial(std::uint64_t k, std::size_t n) {
  double r = 1.0;
  for (std::size_t i = 0; i < n; ++i)
    r = r * static_cast<double>(k - i) / static_cast<double>(i + 1);
  return r;
}

}  // namespace

UniquenessResult check_unique_encoding(const ModulusSet& moduli, double range,
                                       std::size_t n, Model model, double grid_step,
                                       std::uint64_t budget, const ExecutionContext& ctx) {
  require(n >= 1, ErrorCode::invalid_argument, "need at least one source");
  require(grid_step > 0.0 && std::isfinite(grid_step), ErrorCode::invalid_argument,
          "grid_step must be positive");
  require(range > 0.0 && std::isfinite(range), ErrorCode::invalid_argument,
          "range must be positive");
  auto points = static_cast<std::uint64_t>(std::ceil(range / grid_step - 1e-9));
  while (points > 0 && static_cast<double>(points - 1) * grid_step >= range) --points;
  UniquenessResult result;
  if (points < n) return result;
  double tuples = binomial(points, n);
  require(tuples <= static_cast<double>(budget), ErrorCode::budget_exceeded,
          "uniqueness scan needs " + std::to_string(tuples) + " tuples, budget is " +
              std::to_string(budget));

  std::vector<std::vector<std::uint64_t>> combos;
  std::vector<std::uint64_t> c(n);
  std::iota(c.begin(), c.end(), 0);
  do combos.push_back(c);
  while (next_combination(c, points));

  auto values = [&](const std::vector<std::uint64_t>& idx) {
    std::vector<double> xs;
    for (auto k : idx) xs.push_back(static_cast<double>(k) * grid_step);
    return xs;
  };
  std::vector<Encoding> encodings(combos.size());
  parallel_for(ctx, combos.size(), [&](std::size_t i) {
    encodings[i] = encode_tuple(moduli, values(combos[i]), model);
  });

  // Insertion in scan order makes the reported pair the lowest-index one.
  std::map<Encoding, std::size_t> seen;
  for (std::size_t i = 0; i < combos.size(); ++i) {
    ++result.tuples_checked;
    auto [it, inserted] = seen.emplace(std::move(encodings[i]), i);
    if (!inserted) {
      result.unique = false;
      result.collision = std::make_pair(values(combos[it->second]), values(combos[i]));
      return result;
    }
  }
  return result;
}

void validate_geometry(const ArrayGeometry& g) {
  require(g.wavelength > Rational(0), ErrorCode::invalid_geometry, "wavelength must be positive");
  require(g.positions.size() >= 2, ErrorCode::invalid_geometry, "need at least two sensors");
  require(g.positions.front() == Rational(0), ErrorCode::invalid_geometry,
          "first sensor must sit at the origin");
  for (std::size_t l = 1; l < g.positions.size(); ++l)
    require(g.positions[l - 1] < g.positions[l], ErrorCode::invalid_geometry,
            "sensor positions must be strictly ascending");
}

namespace {

std::vector<Rational> spatial_moduli(const ArrayGeometry& g) {
  std::vector<Rational> out;
  for (std::size_t l = 1; l < g.positions.size(); ++l) out.push_back(g.wavelength / g.positions[l]);
  return out;
}

}  // namespace

DoaVerdict doa_representable(const ArrayGeometry& geometry) {
  validate_geometry(geometry);
  Rational c = rational_lcm(spatial_moduli(geometry));
  return {c, c >= Rational(2)};
}

std::optional<std::pair<double, double>> doa_ambiguity_search(const ArrayGeometry& geometry,
                                                              i64 grid) {
  validate_geometry(geometry);
  require(grid >= 2, ErrorCode::invalid_argument, "grid needs at least two points");
  auto moduli = spatial_moduli(geometry);
  // Grid points are -1 + 2k/grid; two of them differ by d = 2j/grid.
  for (i64 j = 1; j < grid; ++j) {
    Rational d(2 * j, grid);
    bool congruent = std::all_of(moduli.begin(), moduli.end(),
                                 [&](const Rational& m) { return (d / m).is_integer(); });
    if (congruent) return std::make_pair(-1.0, -1.0 + d.to_double());
  }
  return std::nullopt;
}

i64 default_doa_grid(const ArrayGeometry& geometry, i64 minimum) {
  validate_geometry(geometry);
  i64 base = checked_mul(2, checked_mul(geometry.wavelength.den(), geometry.positions[1].num()));
  i64 k = std::max<i64>(1, (minimum + base - 1) / base);
  return checked_mul(base, k);
}

std::vector<double> ordered_crt_decode(const std::vector<std::vector<double>>& residues,
                                       const ModulusSet& moduli) {
  double gamma = moduli.gamma();
  std::vector<double> out;
  for (const auto& r : residues) {
    require(r.size() == moduli.size(), ErrorCode::invalid_argument,
            "each source needs one residue per modulus");
    double common = real_mod(r[0], gamma);
    CongruenceSystem system;
    for (std::size_t l = 0; l < r.size(); ++l) {
      double f = (r[l] - common) / gamma;
      double rounded = std::round(f);
      require(std::abs(f - rounded) <= 1e-6, ErrorCode::non_integral_folding,
              "residues of one source disagree modulo gamma");
      i64 part = moduli.parts()[l];
      system.push_back({floor_mod(static_cast<i64>(rounded), part), part});
    }
    out.push_back(static_cast<double>(solve_crt(system)) * gamma + common);
  }
  return out;
}

RateSelectionReport rate_selection_report(const ModulusSet& moduli, std::size_t max_sources) {
  require(max_sources >= 1, ErrorCode::invalid_argument, "need at least one source");
  RateSelectionReport r;
  r.gamma = moduli.gamma();
  r.parts = moduli.parts();
  r.moduli = moduli.moduli();
  // gcd and lcm scale with a common factor, so the bound is gamma times the
  // bound on the co-prime parts.
  auto d = delta_upper_bound(moduli.parts());
  r.delta_upper_bound = static_cast<double>(d.bound) * r.gamma;
  r.worst_partition_parts = d.witness;
  for (i64 p : d.witness) r.worst_partition.push_back(static_cast<double>(p) * r.gamma);
  for (std::size_t n = 1; n <= max_sources; ++n) {
    i64 dq = folding_range(moduli, n);
    r.complex_folding_range.push_back(dq);
    r.complex_dynamic_range.push_back(r.gamma * static_cast<double>(dq - 1));
    Rational rq = real_folding_range(moduli, n);
    r.real_folding_range.push_back(rq);
    r.real_dynamic_range.push_back(r.gamma * rq.to_double());
  }
  r.lcm = r.gamma * static_cast<double>(moduli.part_product());
  return r;
}

}  // namespace remrec
