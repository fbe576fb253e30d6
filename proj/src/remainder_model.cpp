#include "remrec/remainder_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "remrec/decoder_complex.hpp"
#include "remrec/decoder_real.hpp"
#include "remrec/error.hpp"
#include "remrec/log.hpp"
#include "remrec/rng.hpp"

namespace remrec {

std::string_view model_name(Model model) {
  return model == Model::complex ? "complex" : "real";
}

Model parse_model(std::string_view text) {
  if (text == "complex") return Model::complex;
  if (text == "real") return Model::real;
  fail(ErrorCode::invalid_argument, "unknown model '" + std::string(text) + "'");
}

std::string_view noise_kind_name(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::uniform: return "uniform";
    case NoiseKind::fixed: return "fixed";
    default: return "none";
  }
}

ModulusSet::ModulusSet(double gamma, std::vector<i64> coprime_parts)
    : gamma_(gamma), parts_(std::move(coprime_parts)) {
  require(gamma_ > 0.0 && std::isfinite(gamma_), ErrorCode::non_positive_modulus,
          "gamma must be positive");
  require(parts_.size() >= 2, ErrorCode::invalid_argument,
          "a modulus set needs at least two samplers");
  for (std::size_t l = 0; l < parts_.size(); ++l) {
    require(parts_[l] >= 1, ErrorCode::non_positive_modulus,
            "co-prime parts must be positive");
    require(l == 0 || parts_[l - 1] < parts_[l], ErrorCode::invalid_argument,
            "co-prime parts must be strictly ascending");
  }
  require(pairwise_coprime(parts_), ErrorCode::non_coprime_moduli,
          "co-prime parts must be pairwise co-prime");
}

std::vector<double> ModulusSet::moduli() const {
  std::vector<double> m(parts_.size());
  for (std::size_t l = 0; l < parts_.size(); ++l) m[l] = modulus(l);
  return m;
}

std::size_t ResidueObservation::n_sources() const {
  if (residues.empty()) return 0;
  std::size_t n = residues.front().size();
  return model == Model::real ? n / 2 : n;
}

namespace {

void check_sources(const SourceSet& sources, Model expected) {
  require(sources.model == expected, ErrorCode::invalid_argument,
          "source model does not match encoder");
  require(!sources.values.empty(), ErrorCode::empty_input, "no sources");
  std::vector<double> sorted = sources.values;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    require(std::isfinite(sorted[i]) && sorted[i] >= 0.0, ErrorCode::invalid_argument,
            "sources must be finite and nonnegative");
    require(i == 0 || sorted[i] != sorted[i - 1], ErrorCode::invalid_argument,
            "sources must be pairwise distinct");
  }
}

// rows x L noise matrix for this spec.
std::vector<std::vector<double>> noise_matrix(const NoiseSpec& noise, std::size_t rows,
                                              std::size_t cols) {
  std::vector<std::vector<double>> delta(rows, std::vector<double>(cols, 0.0));
  switch (noise.kind) {
    case NoiseKind::none:
      break;
    case NoiseKind::uniform: {
      require(noise.delta >= 0.0, ErrorCode::invalid_argument, "delta must be >= 0");
      Rng rng(noise.seed, "noise");
      for (auto& row : delta)
        for (auto& d : row) d = rng.symmetric_open(noise.delta);
      break;
    }
    case NoiseKind::fixed: {
      require(noise.values.size() == rows, ErrorCode::invalid_argument,
              "fixed noise matrix has " + std::to_string(noise.values.size()) +
                  " rows, expected " + std::to_string(rows));
      for (std::size_t i = 0; i < rows; ++i) {
        require(noise.values[i].size() == cols, ErrorCode::invalid_argument,
                "fixed noise row has the wrong number of columns");
        for (std::size_t l = 0; l < cols; ++l) {
          double d = noise.values[i][l];
          bool ok = std::abs(d) < noise.delta || d == 0.0;
          require(ok, ErrorCode::noise_bound_exceeded,
                  "fixed noise " + std::to_string(d) + " violates |delta| < " +
                      std::to_string(noise.delta));
          delta[i][l] = d;
        }
      }
      break;
    }
  }
  return delta;
}

void warn_out_of_range(ResidueObservation& obs, const SourceSet& sources,
                       const ModulusSet& moduli) {
  std::size_t n = sources.values.size();
  if (sources.model == Model::complex && n > moduli.size()) {
    obs.warnings.push_back("more sources than moduli; no dynamic range guarantee");
    return;
  }
  double d = dynamic_range(moduli, n, sources.model);
  for (double x : sources.values) {
    if (x >= d) {
      std::ostringstream msg;
      msg << "source " << x << " lies outside the dynamic range [0, " << d << ")";
      obs.warnings.push_back(msg.str());
    }
  }
  for (const auto& w : obs.warnings) log::warn(w);
}

struct Entry {
  double value;
  ResidueLabel label;
};

void store_sorted(ResidueObservation& obs, std::vector<std::vector<Entry>> per_modulus) {
  obs.residues.clear();
  obs.labels.clear();
  for (auto& entries : per_modulus) {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& a, const Entry& b) { return a.value < b.value; });
    std::vector<double> values;
    std::vector<ResidueLabel> labels;
    for (const auto& e : entries) {
      values.push_back(e.value);
      labels.push_back(e.label);
    }
    obs.residues.push_back(std::move(values));
    obs.labels.push_back(std::move(labels));
  }
}

}  // namespace

ResidueObservation encode_complex(const SourceSet& sources, const ModulusSet& moduli,
                                  const NoiseSpec& noise) {
  check_sources(sources, Model::complex);
  std::size_t n = sources.values.size();
  std::size_t L = moduli.size();
  auto delta = noise_matrix(noise, n, L);

  std::vector<std::vector<Entry>> per_modulus(L);
  for (std::size_t l = 0; l < L; ++l) {
    for (std::size_t i = 0; i < n; ++i) {
      double r = real_mod(sources.values[i] + delta[i][l], moduli.modulus(l));
      per_modulus[l].push_back({r, {static_cast<int>(i), false}});
    }
  }
  ResidueObservation obs;
  obs.model = Model::complex;
  obs.noise_bound = noise.kind == NoiseKind::none ? 0.0 : noise.delta;
  store_sorted(obs, std::move(per_modulus));
  warn_out_of_range(obs, sources, moduli);
  return obs;
}

ResidueObservation encode_real(const SourceSet& sources, const ModulusSet& moduli,
                               const NoiseSpec& noise) {
  check_sources(sources, Model::real);
  std::size_t n = sources.values.size();
  std::size_t L = moduli.size();
  auto delta = noise_matrix(noise, 2 * n, L);

  std::vector<std::vector<Entry>> per_modulus(L);
  for (std::size_t l = 0; l < L; ++l) {
    double m = moduli.modulus(l);
    for (std::size_t i = 0; i < n; ++i) {
      double x = sources.values[i];
      per_modulus[l].push_back({real_mod(x + delta[i][l], m), {static_cast<int>(i), false}});
      per_modulus[l].push_back(
          {real_mod(-x + delta[n + i][l], m), {static_cast<int>(i), true}});
    }
  }
  ResidueObservation obs;
  obs.model = Model::real;
  obs.noise_bound = noise.kind == NoiseKind::none ? 0.0 : noise.delta;
  store_sorted(obs, std::move(per_modulus));
  warn_out_of_range(obs, sources, moduli);
  return obs;
}

ResidueObservation encode(const SourceSet& sources, const ModulusSet& moduli,
                          const NoiseSpec& noise) {
  return sources.model == Model::complex ? encode_complex(sources, moduli, noise)
                                         : encode_real(sources, moduli, noise);
}

double common_residue(double residue, double gamma) { return real_mod(residue, gamma); }

double dynamic_range(const ModulusSet& moduli, std::size_t n_sources, Model model) {
  if (model == Model::complex) {
    return moduli.gamma() * static_cast<double>(folding_range(moduli, n_sources) - 1);
  }
  return moduli.gamma() * real_folding_range(moduli, n_sources).to_double();
}

ResidueObservation shuffled(const ResidueObservation& obs, std::uint64_t seed) {
  ResidueObservation out = obs;
  Rng rng(seed, "shuffle");
  for (std::size_t l = 0; l < out.residues.size(); ++l) {
    std::size_t k = out.residues[l].size();
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    // Fisher-Yates on our own integer draws: std::shuffle is not portable.
    for (std::size_t i = k; i > 1; --i) {
      auto j = static_cast<std::size_t>(rng.integer(0, static_cast<i64>(i) - 1));
      std::swap(perm[i - 1], perm[j]);
    }
    std::vector<double> values(k);
    for (std::size_t i = 0; i < k; ++i) values[i] = obs.residues[l][perm[i]];
    out.residues[l] = std::move(values);
    if (l < obs.labels.size() && obs.labels[l].size() == k) {
      std::vector<ResidueLabel> labels(k);
      for (std::size_t i = 0; i < k; ++i) labels[i] = obs.labels[l][perm[i]];
      out.labels[l] = std::move(labels);
    }
  }
  return out;
}

void canonicalize(ResidueObservation& obs) {
  bool labelled = obs.labels.size() == obs.residues.size();
  std::vector<std::vector<Entry>> per_modulus(obs.residues.size());
  for (std::size_t l = 0; l < obs.residues.size(); ++l) {
    for (std::size_t i = 0; i < obs.residues[l].size(); ++i) {
      ResidueLabel label = labelled && i < obs.labels[l].size() ? obs.labels[l][i]
                                                                 : ResidueLabel{};
      per_modulus[l].push_back({obs.residues[l][i], label});
    }
  }
  store_sorted(obs, std::move(per_modulus));
  if (!labelled) obs.labels.clear();
}

void check_observation(const ResidueObservation& obs, const ModulusSet& moduli,
                       std::size_t per_modulus) {
  require(obs.residues.size() == moduli.size(), ErrorCode::invalid_argument,
          "observation has " + std::to_string(obs.residues.size()) +
              " residue sets for " + std::to_string(moduli.size()) + " moduli");
  for (std::size_t l = 0; l < moduli.size(); ++l) {
    require(obs.residues[l].size() == per_modulus, ErrorCode::invalid_argument,
            "residue set " + std::to_string(l) + " has " +
                std::to_string(obs.residues[l].size()) + " entries, expected " +
                std::to_string(per_modulus));
    for (double r : obs.residues[l]) {
      require(std::isfinite(r) && r >= 0.0 && r < moduli.modulus(l),
              ErrorCode::invalid_argument, "residue outside [0, m_l)");
    }
  }
}

}  // namespace remrec
