#include "remrec/signal_harness.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <mutex>
#include <numbers>

#include "remrec/error.hpp"
#include "remrec/rng.hpp"

namespace remrec {

SampledSequence synthesize(const WaveformSpec& spec, double rate, double window,
                           std::uint64_t seed) {
  require(rate > 0.0 && std::isfinite(rate), ErrorCode::invalid_argument,
          "rate must be positive");
  require(window > 0.0 && std::isfinite(window), ErrorCode::invalid_argument,
          "window must be positive");
  for (const auto& t : spec.tones)
    require(t.amplitude > 0.0, ErrorCode::invalid_argument, "tone amplitudes must be positive");

  auto count = static_cast<std::size_t>(std::llround(rate * window));
  SampledSequence seq{rate, window, spec.model, std::vector<std::complex<double>>(count)};
  Rng rng(seed, "signal");
  for (std::size_t n = 0; n < count; ++n) {
    std::complex<double> v = 0.0;
    for (const auto& t : spec.tones) {
      // Reduce f/rate * n exactly enough for large n by folding f first.
      double cycles = real_mod(t.frequency, rate) / rate * static_cast<double>(n);
      cycles -= std::floor(cycles);
      v += t.amplitude * std::polar(1.0, 2.0 * std::numbers::pi * cycles + t.phase);
    }
    if (spec.model == Model::real) v = v.real();
    if (spec.noise_floor > 0.0) {
      double re = spec.noise_floor * rng.gaussian();
      double im = spec.model == Model::real ? 0.0 : spec.noise_floor * rng.gaussian();
      v += std::complex<double>(re, im);
    }
    seq.samples[n] = v;
  }
  return seq;
}

std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x) {
  std::vector<std::complex<double>> in = x;
  std::vector<std::complex<double>> out(x.size());
  if (x.empty()) return out;
  // Planning touches FFTW's global state; execution does not.
  static std::mutex plan_mutex;
  fftw_plan plan;
  {
    std::lock_guard lock(plan_mutex);
    plan = fftw_plan_dft_1d(static_cast<int>(x.size()),
                            reinterpret_cast<fftw_complex*>(in.data()),
                            reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(plan_mutex);
    fftw_destroy_plan(plan);
  }
  return out;
}

Extraction extract_peaks(const SampledSequence& seq, std::size_t expected_count,
                         const ExtractOptions& options) {
  std::size_t n = seq.samples.size();
  require(expected_count >= 1, ErrorCode::invalid_argument, "expected_count must be >= 1");
  require(2 * expected_count <= n, ErrorCode::invalid_argument,
          "expected_count exceeds half the sample count");
  require(options.min_amplitude > 0.0, ErrorCode::invalid_argument,
          "min_amplitude must be positive");

  auto spectrum = dft(seq.samples);
  std::vector<double> mag(n);
  for (std::size_t k = 0; k < n; ++k) mag[k] = std::abs(spectrum[k]);

  // A real tone splits its energy between the +f and -f bins.
  double single = options.min_amplitude * static_cast<double>(n);
  if (seq.model == Model::real) single /= 2.0;
  double threshold = 0.5 * single;

  std::vector<SpectralPeak> peaks;
  for (std::size_t k = 0; k < n; ++k) {
    double left = mag[(k + n - 1) % n];
    double right = mag[(k + 1) % n];
    if (mag[k] < threshold) continue;
    // An on-grid tone beside a stronger coincident group is not a local
    // maximum but still sits on an exact multiple of the single amplitude.
    double ratio = mag[k] / single;
    bool on_grid = std::abs(ratio - std::round(ratio)) * single < 1e-6 * static_cast<double>(n);
    if (!on_grid && (mag[k] < left || mag[k] < right)) continue;
    SpectralPeak p;
    p.bin = k;
    p.magnitude = mag[k];
    p.multiplicity = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(mag[k] / single)));
    if (options.interpolate && n >= 3) {
      double denom = left - 2.0 * mag[k] + right;
      if (denom != 0.0) p.offset = std::clamp(0.5 * (left - right) / denom, -0.5, 0.5);
    }
    p.residue = real_mod((static_cast<double>(k) + p.offset) / seq.window, seq.rate);
    peaks.push_back(p);
  }
  std::stable_sort(peaks.begin(), peaks.end(), [](const SpectralPeak& a, const SpectralPeak& b) {
    return a.magnitude > b.magnitude;
  });

  Extraction ex;
  for (const auto& p : peaks) {
    if (ex.residues.size() >= expected_count) break;
    for (std::size_t i = 0; i < p.multiplicity && ex.residues.size() < expected_count; ++i)
      ex.residues.push_back(p.residue);
    ex.peaks.push_back(p);
    ex.max_abs_offset = std::max(ex.max_abs_offset, std::abs(p.offset));
  }
  if (ex.residues.size() < expected_count) {
    fail(ErrorCode::peak_deficit, "found " + std::to_string(ex.residues.size()) +
                                      " spectral peaks above threshold, expected " +
                                      std::to_string(expected_count));
  }
  std::sort(ex.residues.begin(), ex.residues.end());
  return ex;
}

std::vector<double> extract_residues(const SampledSequence& seq, std::size_t expected_count,
                                     const ExtractOptions& options) {
  return extract_peaks(seq, expected_count, options).residues;
}

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

void write_sequence_csv(std::ostream& out, const SampledSequence& seq) {
  out << "index,re,im\n";
  for (std::size_t i = 0; i < seq.samples.size(); ++i) {
    out << i << ',' << format_number(seq.samples[i].real()) << ','
        << format_number(seq.samples[i].imag()) << '\n';
  }
}

void write_sequence_binary(std::ostream& out, const SampledSequence& seq) {
  auto put = [&](double v) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    char bytes[8];
    for (int b = 0; b < 8; ++b) bytes[b] = static_cast<char>((bits >> (8 * b)) & 0xffu);
    out.write(bytes, 8);
  };
  for (const auto& s : seq.samples) {
    put(s.real());
    put(s.imag());
  }
}

void write_spectrum_csv(std::ostream& out, const SampledSequence& seq) {
  auto spectrum = dft(seq.samples);
  out << "bin,magnitude\n";
  for (std::size_t k = 0; k < spectrum.size(); ++k)
    out << k << ',' << format_number(std::abs(spectrum[k])) << '\n';
}

}  // namespace remrec
