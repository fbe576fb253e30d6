#pragma once

// Synthetic multi-tone signals, undersampling at the modulus rates, and
// residue extraction from DFT peaks.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <vector>

#include "remrec/remainder_model.hpp"

namespace remrec {

struct Tone {
  double amplitude = 1.0;
  double frequency = 0.0;
  double phase = 0.0;
};

struct WaveformSpec {
  std::vector<Tone> tones;
  Model model = Model::complex;
  // Standard deviation of additive Gaussian noise (per real component).
  double noise_floor = 0.0;
};

struct SampledSequence {
  double rate = 1.0;
  double window = 1.0;
  Model model = Model::complex;
  // Real-model samples carry a zero imaginary part.
  std::vector<std::complex<double>> samples;
};

// round(rate * window) samples of the waveform; noise from the "signal"
// sub-stream of seed.
SampledSequence synthesize(const WaveformSpec& spec, double rate, double window,
                           std::uint64_t seed);

// Forward DFT, X_k = sum_n x_n exp(-2 pi j k n / size).
std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x);

struct ExtractOptions {
  // Smallest tone amplitude expected; sets the peak threshold.
  double min_amplitude = 1.0;
  // Three-point parabolic refinement of each peak location.
  bool interpolate = false;
};

struct SpectralPeak {
  std::size_t bin = 0;
  double residue = 0.0;
  double magnitude = 0.0;
  // Tones sharing the bin, estimated from the magnitude.
  std::size_t multiplicity = 1;
  // Interpolated offset from the bin centre, in bins.
  double offset = 0.0;
};

struct Extraction {
  // Ascending, with coincident residues repeated per multiplicity.
  std::vector<double> residues;
  std::vector<SpectralPeak> peaks;
  double max_abs_offset = 0.0;
};

Extraction extract_peaks(const SampledSequence& seq, std::size_t expected_count,
                         const ExtractOptions& options = {});
std::vector<double> extract_residues(const SampledSequence& seq, std::size_t expected_count,
                                     const ExtractOptions& options = {});

// index,re,im
void write_sequence_csv(std::ostream& out, const SampledSequence& seq);
// Interleaved little-endian float64 re/im pairs.
void write_sequence_binary(std::ostream& out, const SampledSequence& seq);
// bin,magnitude
void write_spectrum_csv(std::ostream& out, const SampledSequence& seq);

// Decimal text for CSV: shortest round-trip form, '.' separator, no locale.
std::string format_number(double value);

}  // namespace remrec
