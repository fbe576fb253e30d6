#pragma once

// Shared data model: modulus sets, sources, residue observations, and the
// noiseless/noisy encoders for the complex and real waveform models.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "remrec/numtheory.hpp"

namespace remrec {

enum class Model { complex, real };

std::string_view model_name(Model model);
Model parse_model(std::string_view text);

// Sampling rates m_l = gamma * M_l with strictly ascending, pairwise co-prime
// parts M_l and at least two samplers.
class ModulusSet {
 public:
  ModulusSet(double gamma, std::vector<i64> coprime_parts);

  double gamma() const noexcept { return gamma_; }
  const std::vector<i64>& parts() const noexcept { return parts_; }
  std::size_t size() const noexcept { return parts_.size(); }
  double modulus(std::size_t l) const { return gamma_ * static_cast<double>(parts_.at(l)); }
  std::vector<double> moduli() const;
  // prod M_l; lcm of the moduli is gamma times this.
  i64 part_product() const { return product(parts_); }

 private:
  double gamma_;
  std::vector<i64> parts_;
};

struct SourceSet {
  std::vector<double> values;
  Model model = Model::complex;
};

enum class NoiseKind { none, uniform, fixed };

std::string_view noise_kind_name(NoiseKind kind);

// Residue-domain noise. `values` holds a fixed Delta matrix: N x L for the
// complex model; 2N x L for the real model, rows [0, N) perturbing the
// positive copies and rows [N, 2N) the negative copies. Uniform draws come
// from the "noise" sub-stream of `seed` in the same row-major order.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::none;
  double delta = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::vector<double>> values;

  static NoiseSpec none() { return {}; }
  static NoiseSpec uniform(double delta, std::uint64_t seed) {
    return {NoiseKind::uniform, delta, seed, {}};
  }
  static NoiseSpec fixed(double delta, std::vector<std::vector<double>> values) {
    return {NoiseKind::fixed, delta, 0, std::move(values)};
  }
};

// Provenance of one residue, known only when we produced the encoding.
struct ResidueLabel {
  int source = 0;
  bool negative = false;
  friend bool operator==(const ResidueLabel&, const ResidueLabel&) = default;
};

// Per-modulus residue multisets, each sorted ascending. For the real model a
// multiset holds 2N entries (positive and negative copies, unlabeled).
struct ResidueObservation {
  Model model = Model::complex;
  std::vector<std::vector<double>> residues;
  // Parallel to `residues` when provenance is known, empty otherwise.
  std::vector<std::vector<ResidueLabel>> labels;
  double noise_bound = 0.0;
  std::vector<std::string> warnings;

  std::size_t n_sources() const;
};

ResidueObservation encode_complex(const SourceSet& sources, const ModulusSet& moduli,
                                  const NoiseSpec& noise);
ResidueObservation encode_real(const SourceSet& sources, const ModulusSet& moduli,
                               const NoiseSpec& noise);
// Dispatches on sources.model.
ResidueObservation encode(const SourceSet& sources, const ModulusSet& moduli,
                          const NoiseSpec& noise);

// <residue>_gamma.
double common_residue(double residue, double gamma);

// Value dynamic range D of the decoder for `model` with n sources:
// gamma*(D_q - 1) for complex, gamma*D_q (real folding range) for real.
double dynamic_range(const ModulusSet& moduli, std::size_t n_sources, Model model);

// Same multisets, each permuted under the "shuffle" sub-stream of `seed`.
// Labels are permuted alongside.
ResidueObservation shuffled(const ResidueObservation& obs, std::uint64_t seed);

// Restores the sorted-ascending storage order.
void canonicalize(ResidueObservation& obs);

// Validates sizes and ranges against a modulus set; throws invalid_argument.
void check_observation(const ResidueObservation& obs, const ModulusSet& moduli,
                       std::size_t per_modulus);

}  // namespace remrec
