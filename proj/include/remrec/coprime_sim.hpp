#pragma once

// Co-prime sampling: two streams at intervals P*T and Q*T, lag products
// paired through Bezout coefficients, and the bias of the resulting
// autocorrelation estimate.

#include <complex>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "remrec/numtheory.hpp"
#include "remrec/parallel.hpp"

namespace remrec {

struct CoprimeTone {
  // In Hz.
  double frequency = 0.0;
  // f*T as an exact rational when the input was given exactly.
  std::optional<Rational> normalized;
  double amplitude = 1.0;
};

// Parses "p/q" or a decimal as f*T (exact), so frequency = value / T.
CoprimeTone parse_coprime_tone(std::string_view text, double period);

struct CoprimeConfig {
  i64 p = 3;
  i64 q = 5;
  double period = 1.0;  // T
  i64 cycles = 1;       // K
  std::vector<CoprimeTone> tones;
};

void validate(const CoprimeConfig& config);

struct PairVerdict {
  std::size_t i = 0;
  std::size_t j = 0;
  bool failing = false;
};

// For every pair i < j: failing iff P*Q*(f_i - f_j)*T is an integer (exact
// for rational tones, within 1e-9 otherwise).
std::vector<PairVerdict> failure_condition(const CoprimeConfig& config);

struct LagPair {
  i64 n1 = 0;
  i64 n2 = 0;
};

// P*n1 - Q*n2 == lag with n1 = Q*k + u, u in [0, Q), and n2 = P*k + v,
// v in [-P*cycle_span, P). Lags in [0, P*Q) always fit with cycle_span 1.
LagPair bezout_lag_pairs(i64 p, i64 q, i64 lag, i64 k, i64 cycle_span = 1);

enum class Estimator {
  cross,         // x1[n1] * conj(x2[n2]) at Bezout pairs
  self_stream1,  // x1 products; lags must be multiples of P
  self_stream2,  // x2 products; lags must be multiples of Q
};

struct LagEstimate {
  i64 lag = 0;
  LagPair pair;  // the cycle-0 indices used
  std::complex<double> estimate;
  std::complex<double> truth;
  double bias = 0.0;
};

// Stream samples straight from the tone description.
std::complex<double> stream_sample(const CoprimeConfig& config, int stream, i64 n);

std::vector<LagEstimate> estimate_autocorrelation(const CoprimeConfig& config,
                                                  const std::vector<i64>& lags,
                                                  Estimator estimator = Estimator::cross,
                                                  const ExecutionContext& ctx = {});

// Sum_i A_i^2 exp(j 2 pi f_i lag T).
std::complex<double> true_autocorrelation(const CoprimeConfig& config, i64 lag);

struct SpectrumPoint {
  double frequency = 0.0;
  double power = 0.0;
};

// Lags must be 0..L (extended by r(-l) = conj r(l)) or -L..L, contiguous.
// Frequencies are k / (fft_size * T) in [0, 1/T).
std::vector<SpectrumPoint> spectrum_from_lags(const std::vector<LagEstimate>& estimates,
                                              std::size_t fft_size, double period = 1.0);

// Up to `count` local maxima, strongest first.
std::vector<SpectrumPoint> spectrum_peaks(const std::vector<SpectrumPoint>& spectrum,
                                          std::size_t count);

}  // namespace remrec
