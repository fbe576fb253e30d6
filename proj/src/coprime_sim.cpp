#include "remrec/coprime_sim.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "remrec/error.hpp"
#include "remrec/signal_harness.hpp"

namespace remrec {

CoprimeTone parse_coprime_tone(std::string_view text, double period) {
  require(period > 0.0, ErrorCode::invalid_argument, "period must be positive");
  Rational r = Rational::parse(text);
  return {r.to_double() / period, r, 1.0};
}

void validate(const CoprimeConfig& c) {
  require(c.p >= 1 && c.q >= 1, ErrorCode::invalid_argument, "P and Q must be positive");
  require(gcd(c.p, c.q) == 1, ErrorCode::non_coprime_moduli, "P and Q must be co-prime");
  require(c.period > 0.0 && std::isfinite(c.period), ErrorCode::invalid_argument,
          "T must be positive");
  require(c.cycles >= 1, ErrorCode::invalid_argument, "need at least one cycle");
  for (const auto& t : c.tones)
    require(t.amplitude > 0.0, ErrorCode::invalid_argument, "amplitudes must be positive");
}

std::vector<PairVerdict> failure_condition(const CoprimeConfig& c) {
  validate(c);
  std::vector<PairVerdict> out;
  for (std::size_t i = 0; i < c.tones.size(); ++i) {
    for (std::size_t j = i + 1; j < c.tones.size(); ++j) {
      const auto& a = c.tones[i];
      const auto& b = c.tones[j];
      bool failing;
      if (a.normalized && b.normalized) {
        failing = (Rational(c.p * c.q) * (*a.normalized - *b.normalized)).is_integer();
      } else {
        double v = static_cast<double>(c.p * c.q) * (a.frequency - b.frequency) * c.period;
        failing = std::abs(v - std::round(v)) <= 1e-9;
      }
      out.push_back({i, j, failing});
    }
  }
  return out;
}

LagPair bezout_lag_pairs(i64 p, i64 q, i64 lag, i64 k, i64 cycle_span) {
  require(p >= 1 && q >= 1, ErrorCode::invalid_argument, "P and Q must be positive");
  require(gcd(p, q) == 1, ErrorCode::non_coprime_moduli, "P and Q must be co-prime");
  i64 u = floor_mod(checked_mul(floor_mod(lag, q), mod_inverse(p, q)), q);
  i64 v = (checked_mul(p, u) - lag) / q;
  if (v < -checked_mul(p, cycle_span) || v >= p) {
    fail(ErrorCode::no_pair_in_window,
         "lag " + std::to_string(lag) + " has no index pair within the cycle window");
  }
  return {checked_add(checked_mul(q, k), u), checked_add(checked_mul(p, k), v)};
}

namespace {

// Fractional part of x*n, exact when x is rational.
double cycles_of(const CoprimeTone& t, double period, i64 stride, i64 n) {
  if (t.normalized) {
    i128 num = static_cast<i128>(t.normalized->num()) * stride % t.normalized->den();
    num = num * (n % t.normalized->den()) % t.normalized->den();
    if (num < 0) num += t.normalized->den();
    return static_cast<double>(num) / static_cast<double>(t.normalized->den());
  }
  double c = t.frequency * period * static_cast<double>(stride) * static_cast<double>(n);
  return c - std::floor(c);
}

}  // namespace

std::complex<double> stream_sample(const CoprimeConfig& c, int stream, i64 n) {
  i64 stride = stream == 1 ? c.p : c.q;
  std::complex<double> v = 0.0;
  for (const auto& t : c.tones)
    v += t.amplitude * std::polar(1.0, 2.0 * std::numbers::pi * cycles_of(t, c.period, stride, n));
  return v;
}

std::complex<double> true_autocorrelation(const CoprimeConfig& c, i64 lag) {
  std::complex<double> v = 0.0;
  for (const auto& t : c.tones)
    v += t.amplitude * t.amplitude *
         std::polar(1.0, 2.0 * std::numbers::pi * cycles_of(t, c.period, 1, lag));
  return v;
}

std::vector<LagEstimate> estimate_autocorrelation(const CoprimeConfig& c,
                                                  const std::vector<i64>& lags,
                                                  Estimator estimator,
                                                  const ExecutionContext& ctx) {
  validate(c);
  std::vector<LagEstimate> out(lags.size());
  parallel_for(ctx, lags.size(), [&](std::size_t idx) {
    i64 lag = lags[idx];
    LagEstimate e;
    e.lag = lag;
    std::complex<double> sum = 0.0;
    if (estimator == Estimator::cross) {
      e.pair = bezout_lag_pairs(c.p, c.q, lag, 0);
      for (i64 k = 0; k < c.cycles; ++k) {
        auto pr = bezout_lag_pairs(c.p, c.q, lag, k);
        sum += stream_sample(c, 1, pr.n1) * std::conj(stream_sample(c, 2, pr.n2));
      }
    } else {
      int stream = estimator == Estimator::self_stream1 ? 1 : 2;
      i64 stride = stream == 1 ? c.p : c.q;
      i64 period_len = stream == 1 ? c.q : c.p;
      require(lag % stride == 0, ErrorCode::no_pair_in_window,
              "lag " + std::to_string(lag) + " is not a multiple of the stream stride");
      i64 offset = lag / stride;
      e.pair = {offset, 0};
      for (i64 k = 0; k < c.cycles; ++k) {
        i64 base = period_len * k;
        sum += stream_sample(c, stream, base + offset) * std::conj(stream_sample(c, stream, base));
      }
    }
    e.estimate = sum / static_cast<double>(c.cycles);
    e.truth = true_autocorrelation(c, lag);
    e.bias = std::abs(e.estimate - e.truth);
    out[idx] = e;
  });
  return out;
}

std::vector<SpectrumPoint> spectrum_from_lags(const std::vector<LagEstimate>& estimates,
                                              std::size_t fft_size, double period) {
  require(period > 0.0, ErrorCode::invalid_argument, "period must be positive");
  std::map<i64, std::complex<double>> r;
  for (const auto& e : estimates) r[e.lag] = e.estimate;
  require(r.size() >= 2, ErrorCode::insufficient_lags, "need at least two lags");
  i64 lo = r.begin()->first;
  i64 hi = r.rbegin()->first;
  require(static_cast<i64>(r.size()) == hi - lo + 1, ErrorCode::insufficient_lags,
          "lags must be contiguous");
  if (lo == 0) {
    for (i64 l = 1; l <= hi; ++l) r[-l] = std::conj(r[l]);
  } else {
    require(lo == -hi, ErrorCode::insufficient_lags, "lag window must be symmetric");
  }
  require(fft_size >= static_cast<std::size_t>(2 * hi + 1), ErrorCode::insufficient_lags,
          "fft_size is shorter than the lag window");

  std::vector<std::complex<double>> seq(fft_size, 0.0);
  for (auto [l, v] : r) seq[static_cast<std::size_t>(floor_mod(l, static_cast<i64>(fft_size)))] = v;
  auto spectrum = dft(seq);
  std::vector<SpectrumPoint> out(fft_size);
  for (std::size_t k = 0; k < fft_size; ++k)
    out[k] = {static_cast<double>(k) / (static_cast<double>(fft_size) * period),
              std::abs(spectrum[k])};
  return out;
}

std::vector<SpectrumPoint> spectrum_peaks(const std::vector<SpectrumPoint>& s,
                                          std::size_t count) {
  std::size_t n = s.size();
  std::vector<SpectrumPoint> peaks;
  for (std::size_t k = 0; k < n; ++k) {
    double left = s[(k + n - 1) % n].power;
    double right = s[(k + 1) % n].power;
    if (s[k].power > left && s[k].power >= right) peaks.push_back(s[k]);
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const SpectrumPoint& a, const SpectrumPoint& b) { return a.power > b.power; });
  if (peaks.size() > count) peaks.resize(count);
  return peaks;
}

}  // namespace remrec
