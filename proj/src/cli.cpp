#include "remrec/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "remrec/coprime_sim.hpp"
#include "remrec/decoder_complex.hpp"
#include "remrec/decoder_real.hpp"
#include "remrec/design_tools.hpp"
#include "remrec/error.hpp"
#include "remrec/json_io.hpp"
#include "remrec/montecarlo.hpp"
#include "remrec/rng.hpp"
#include "remrec/signal_harness.hpp"

namespace remrec {

namespace {

struct Common {
  std::string format = "json";
  std::string out_path;
  unsigned jobs = 1;
  std::uint64_t seed = 0;
};

class Emitter {
 public:
  Emitter(const Common& c, std::ostream& out) : common_(c), out_(out) {}

  void text(const std::string& body) {
    if (common_.out_path.empty()) {
      out_ << body;
      return;
    }
    std::ofstream f(common_.out_path, std::ios::binary);
    if (!f) fail(ErrorCode::io_error, "cannot write '" + common_.out_path + "'");
    f << body;
    if (!f) fail(ErrorCode::io_error, "write to '" + common_.out_path + "' failed");
  }

  void json(const Json& j) { text(j.dump(2) + "\n"); }
  bool csv() const { return common_.format == "csv"; }

 private:
  const Common& common_;
  std::ostream& out_;
};

std::string num(double v) { return format_number(v); }

std::vector<i64> parse_lags(const std::string& spec, i64 default_hi) {
  std::vector<i64> lags;
  if (spec.empty()) {
    for (i64 l = 0; l <= default_hi; ++l) lags.push_back(l);
    return lags;
  }
  auto to_int = [](const std::string& s) {
    try {
      std::size_t used = 0;
      long long v = std::stoll(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return static_cast<i64>(v);
    } catch (const std::exception&) {
      fail(ErrorCode::invalid_argument, "bad lag '" + s + "'");
    }
  };
  if (auto colon = spec.find(':'); colon != std::string::npos) {
    i64 lo = to_int(spec.substr(0, colon));
    i64 hi = to_int(spec.substr(colon + 1));
    require(lo <= hi, ErrorCode::invalid_argument, "empty lag range");
    for (i64 l = lo; l <= hi; ++l) lags.push_back(l);
    return lags;
  }
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) lags.push_back(to_int(item));
  return lags;
}

int solution_exit(bool ambiguous) { return ambiguous ? 2 : 0; }

Json decode_any(const ObservationFile& f, const std::string& variant, const ExecutionContext& ctx,
                std::vector<std::vector<double>>* estimates) {
  std::size_t n = f.obs.n_sources();
  Json j;
  if (variant == "complex") {
    auto sols = decode_complex(f.obs, f.moduli, n, ctx);
    j = solutions_to_json(sols, f.moduli, n);
    if (estimates)
      for (const auto& s : sols) estimates->push_back(s.estimates);
  } else {
    require(f.obs.model == Model::real, ErrorCode::invalid_argument,
            variant + " decoding needs a real-model observation");
    auto sols = variant == "real-single" ? decode_real_single(f.obs, f.moduli, ctx)
                                         : decode_real_multi(f.obs, f.moduli, n, ctx);
    j = solutions_to_json(sols, f.moduli, n, variant);
    if (estimates)
      for (const auto& s : sols) estimates->push_back(s.estimates);
  }
  return j;
}

std::string decode_csv(const Json& j) {
  std::string s = "solution,source,estimate,folding_number,certified_bound\n";
  std::size_t k = 0;
  for (const auto& sol : j["solutions"]) {
    for (std::size_t i = 0; i < sol["estimates"].size(); ++i) {
      s += std::to_string(k) + "," + std::to_string(i) + "," +
           num(sol["estimates"][i].get<double>()) + "," +
           std::to_string(sol["folding_numbers"][i].get<i64>()) + "," +
           num(sol["certified_bound"].get<double>()) + "\n";
    }
    ++k;
  }
  return s;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust remainder reconstruction of undersampled frequencies", "remrec"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", common.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", common.out_path, "Output file (default stdout)");
    sub->add_option("--jobs", common.jobs, "Worker threads")->check(CLI::Range(1u, 1024u));
  };

  double gamma = 0.0;
  std::vector<i64> parts;
  std::string model_text = "complex";
  std::vector<double> sources;
  double delta = 0.0;
  std::string in_path;
  auto add_moduli = [&](CLI::App* sub, bool required) {
    auto* g = sub->add_option("--gamma", gamma, "Common factor gamma");
    auto* p = sub->add_option("--parts", parts, "Co-prime parts, e.g. 3,4,5")->delimiter(',');
    if (required) {
      g->required();
      p->required();
    }
  };

  // range
  auto* range = app.add_subcommand("range", "Dynamic ranges and the noise bound of a rate set");
  std::size_t range_n = 1;
  std::size_t range_max = 0;
  add_common(range);
  add_moduli(range, true);
  range->add_option("--model", model_text)->check(CLI::IsMember({"complex", "real"}));
  range->add_option("--n-sources", range_n, "Number of sources N")->check(CLI::PositiveNumber);
  range->add_option("--max-sources", range_max, "Largest N in the table (default L)");

  // encode
  auto* encode_cmd = app.add_subcommand("encode", "Residue observation of a source set");
  bool no_shuffle = false;
  add_common(encode_cmd);
  add_moduli(encode_cmd, false);
  encode_cmd->add_option("--model", model_text)->check(CLI::IsMember({"complex", "real"}));
  encode_cmd->add_option("--sources", sources, "Source values")->delimiter(',');
  encode_cmd->add_option("--delta", delta, "Uniform residue noise bound")->check(CLI::NonNegativeNumber);
  auto* encode_seed = encode_cmd->add_option("--seed", common.seed, "Run seed");
  encode_cmd->add_option("--in", in_path, "Problem JSON");
  encode_cmd->add_flag("--no-shuffle", no_shuffle, "Keep residues sorted");

  // decode
  auto* decode_cmd = app.add_subcommand("decode", "Reconstruct sources from an observation");
  std::string variant;
  add_common(decode_cmd);
  decode_cmd->add_option("variant", variant, "complex | real-single | real-multi")
      ->required()
      ->check(CLI::IsMember({"complex", "real-single", "real-multi"}));
  decode_cmd->add_option("--in", in_path, "Observation JSON")->required();

  // harness
  auto* harness = app.add_subcommand("harness", "Synthesize, extract residues, decode");
  double window = 1.0;
  double noise_floor = 0.0;
  double amplitude = 1.0;
  bool interpolate = false;
  bool random_phase = false;
  add_common(harness);
  add_moduli(harness, true);
  harness->add_option("--model", model_text)->check(CLI::IsMember({"complex", "real"}));
  harness->add_option("--sources", sources, "Tone frequencies")->delimiter(',')->required();
  harness->add_option("--delta", delta, "Claimed residue noise bound for decoding")
      ->check(CLI::NonNegativeNumber);
  auto* harness_seed = harness->add_option("--seed", common.seed, "Run seed");
  harness->add_option("--window", window, "Observation window in seconds")->check(CLI::PositiveNumber);
  harness->add_option("--noise-floor", noise_floor, "Gaussian noise std per component")
      ->check(CLI::NonNegativeNumber);
  harness->add_option("--amplitude", amplitude, "Tone amplitude")->check(CLI::PositiveNumber);
  harness->add_flag("--interpolate", interpolate, "Parabolic peak refinement");
  harness->add_flag("--random-phase", random_phase, "Draw tone phases from the seed");

  // coprime
  auto* coprime = app.add_subcommand("coprime", "Co-prime sampling bias and spectrum");
  CoprimeConfig ccfg;
  std::vector<std::string> freqs;
  std::string lag_spec;
  std::string estimator_text = "cross";
  std::size_t fft_size = 128;
  std::string spectrum_out;
  add_common(coprime);
  coprime->add_option("--p", ccfg.p, "Stream 1 interval factor P")->required();
  coprime->add_option("--q", ccfg.q, "Stream 2 interval factor Q")->required();
  coprime->add_option("--period", ccfg.period, "Nyquist interval T")->check(CLI::PositiveNumber);
  coprime->add_option("--cycles", ccfg.cycles, "Cycles K")->check(CLI::PositiveNumber);
  coprime->add_option("--freqs", freqs, "f*T values, e.g. 1/10,6/35")->delimiter(',')->required();
  coprime->add_option("--lags", lag_spec, "Lags as lo:hi or a list (default 0:PQ-1)");
  coprime->add_option("--estimator", estimator_text)
      ->check(CLI::IsMember({"cross", "self1", "self2"}));
  coprime->add_option("--fft-size", fft_size, "Spectrum DFT size")->check(CLI::PositiveNumber);
  coprime->add_option("--spectrum-out", spectrum_out, "Spectrum CSV (freq,power)");

  // doa
  auto* doa = app.add_subcommand("doa", "DoA representability of a sensor array");
  std::string lambda_text;
  std::vector<std::string> positions;
  i64 grid = 0;
  add_common(doa);
  doa->add_option("--lambda", lambda_text, "Wavelength, e.g. 2 or 3/2");
  doa->add_option("--positions", positions, "Sensor positions, e.g. 0,4,6")->delimiter(',');
  doa->add_option("--grid", grid, "Ambiguity search grid (default automatic)");
  doa->add_option("--in", in_path, "Geometry JSON");

  // montecarlo
  auto* mc = app.add_subcommand("montecarlo", "Seeded Monte-Carlo check of a decoder bound");
  MonteCarloConfig mcfg;
  std::string experiment_text = "complex-bound";
  add_common(mc);
  add_moduli(mc, false);
  mc->add_option("--experiment", experiment_text)
      ->check(CLI::IsMember({"complex-bound", "complex-separated", "real-single-bound",
                             "real-multi-bound", "separation-frequency"}));
  mc->add_option("--n-sources", mcfg.n_sources)->check(CLI::PositiveNumber);
  mc->add_option("--trials", mcfg.trials)->check(CLI::PositiveNumber);
  mc->add_option("--delta", mcfg.delta, "Noise bound (default gamma/4)");
  mc->add_option("--range", mcfg.range, "Source range (default dynamic range)");
  mc->add_option("--seed", common.seed, "Run seed")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    Json line = {{"error", "UsageError"}, {"message", e.what()}};
    err << line.dump() << "\n";
    return 1;
  }

  Emitter emit(common, out);
  ExecutionContext ctx{common.jobs};
  try {
    if (*range) {
      ModulusSet moduli(gamma, parts);
      Model model = parse_model(model_text);
      std::size_t max_n = range_max == 0 ? moduli.size() : range_max;
      auto report = rate_selection_report(moduli, std::max(max_n, range_n));
      if (emit.csv()) {
        std::string s =
            "n_sources,complex_folding_range,complex_dynamic_range,real_folding_range,"
            "real_dynamic_range\n";
        for (std::size_t k = 0; k < report.complex_folding_range.size(); ++k) {
          s += std::to_string(k + 1) + "," + std::to_string(report.complex_folding_range[k]) +
               "," + num(report.complex_dynamic_range[k]) + "," +
               report.real_folding_range[k].str() + "," + num(report.real_dynamic_range[k]) + "\n";
        }
        emit.text(s);
      } else {
        Json j;
        j["kind"] = "range";
        j["model"] = model_text;
        j["n_sources"] = range_n;
        j["folding_range"] = model == Model::complex
                                 ? std::to_string(folding_range(moduli, range_n))
                                 : real_folding_range(moduli, range_n).str();
        j["dynamic_range"] = dynamic_range(moduli, range_n, model);
        j["report"] = rate_report_to_json(report);
        emit.json(j);
      }
      return 0;
    }

    if (*encode_cmd) {
      std::optional<Problem> problem;
      if (!in_path.empty()) {
        problem = parse_problem(read_json_file(in_path));
        if (problem->noise.kind == NoiseKind::uniform) common.seed = problem->noise.seed;
      } else {
        require(gamma > 0.0 && !parts.empty() && !sources.empty(), ErrorCode::invalid_argument,
                "encode needs --in or --gamma, --parts and --sources");
        require(delta == 0.0 || encode_seed->count() > 0, ErrorCode::invalid_argument,
                "--seed is required when --delta > 0");
        NoiseSpec noise = delta > 0.0 ? NoiseSpec::uniform(delta, common.seed) : NoiseSpec::none();
        problem = Problem{ModulusSet(gamma, parts), {sources, parse_model(model_text)}, noise};
      }
      auto obs = encode(problem->sources, problem->moduli, problem->noise);
      if (!no_shuffle) obs = shuffled(obs, common.seed);
      if (emit.csv()) {
        std::string s = "modulus_index,modulus,residue\n";
        for (std::size_t l = 0; l < obs.residues.size(); ++l)
          for (double r : obs.residues[l])
            s += std::to_string(l) + "," + num(problem->moduli.modulus(l)) + "," + num(r) + "\n";
        emit.text(s);
      } else {
        emit.json(observation_to_json(obs, problem->moduli));
      }
      return 0;
    }

    if (*decode_cmd) {
      auto file = parse_observation(read_json_file(in_path));
      auto j = decode_any(file, variant, ctx, nullptr);
      if (emit.csv())
        emit.text(decode_csv(j));
      else
        emit.json(j);
      return solution_exit(j["ambiguous"].get<bool>());
    }

    if (*harness) {
      require(!(noise_floor > 0.0 || random_phase) || harness_seed->count() > 0,
              ErrorCode::invalid_argument, "--seed is required for randomized harness runs");
      ModulusSet moduli(gamma, parts);
      Model model = parse_model(model_text);
      SourceSet set{sources, model};
      auto analytic = encode(set, moduli, NoiseSpec::none());
      WaveformSpec spec;
      spec.model = model;
      spec.noise_floor = noise_floor;
      Rng phases(common.seed, "phase");
      for (double f : sources)
        spec.tones.push_back(
            {amplitude, f, random_phase ? phases.uniform(-std::numbers::pi, std::numbers::pi) : 0.0});

      std::size_t expected = model == Model::real ? 2 * sources.size() : sources.size();
      ResidueObservation obs;
      obs.model = model;
      obs.noise_bound = delta;
      Json rings = Json::array();
      bool agree = true;
      for (std::size_t l = 0; l < moduli.size(); ++l) {
        auto seq = synthesize(spec, moduli.modulus(l), window, substream_seed(common.seed, "harness", l));
        auto ex = extract_peaks(seq, expected, {amplitude, interpolate});
        agree = agree && ex.residues == analytic.residues[l];
        rings.push_back({{"rate", moduli.modulus(l)},
                         {"extracted", ex.residues},
                         {"analytic", analytic.residues[l]},
                         {"max_offset", ex.max_abs_offset}});
        obs.residues.push_back(std::move(ex.residues));
      }
      Json j;
      j["kind"] = "harness";
      j["model"] = model_text;
      j["gamma"] = moduli.gamma();
      j["coprime_parts"] = moduli.parts();
      j["sources"] = sources;
      j["window"] = window;
      j["rings"] = std::move(rings);
      j["agree"] = agree;
      int code = 0;
      try {
        std::vector<std::vector<double>> estimates;
        std::string v = model == Model::complex ? "complex"
                        : sources.size() == 1   ? "real-single"
                                                : "real-multi";
        auto dj = decode_any({moduli, obs}, v, ctx, &estimates);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& e : estimates) best = std::min(best, matched_error(e, sources));
        j["matched_error"] = number_or_null(best);
        j["decode_error"] = nullptr;
        code = solution_exit(dj["ambiguous"].get<bool>());
        j["decode"] = std::move(dj);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::no_feasible_proposal &&
            e.code() != ErrorCode::insufficient_distinct_clusters)
          throw;
        j["matched_error"] = nullptr;
        j["decode_error"] = std::string(error_code_name(e.code()));
        j["decode"] = nullptr;
        code = 2;
      }
      if (emit.csv()) {
        std::string s = "modulus_index,rate,extracted,analytic\n";
        for (std::size_t l = 0; l < moduli.size(); ++l)
          for (std::size_t i = 0; i < obs.residues[l].size(); ++i)
            s += std::to_string(l) + "," + num(moduli.modulus(l)) + "," + num(obs.residues[l][i]) +
                 "," + num(analytic.residues[l][i]) + "\n";
        emit.text(s);
      } else {
        emit.json(j);
      }
      return code;
    }

    if (*coprime) {
      for (const auto& f : freqs) ccfg.tones.push_back(parse_coprime_tone(f, ccfg.period));
      validate(ccfg);
      Estimator est = estimator_text == "self1"   ? Estimator::self_stream1
                      : estimator_text == "self2" ? Estimator::self_stream2
                                                  : Estimator::cross;
      auto lags = parse_lags(lag_spec, ccfg.p * ccfg.q - 1);
      auto estimates = estimate_autocorrelation(ccfg, lags, est, ctx);
      auto failure = failure_condition(ccfg);

      std::optional<std::vector<SpectrumPoint>> spectrum;
      try {
        spectrum = spectrum_from_lags(estimates, fft_size, ccfg.period);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::insufficient_lags || !spectrum_out.empty()) throw;
      }
      if (spectrum && !spectrum_out.empty()) {
        std::ofstream f(spectrum_out, std::ios::binary);
        if (!f) fail(ErrorCode::io_error, "cannot write '" + spectrum_out + "'");
        f << "freq,power\n";
        for (const auto& p : *spectrum) f << num(p.frequency) << "," << num(p.power) << "\n";
      }

      if (emit.csv()) {
        std::string s = "lag,re,im,truth_re,truth_im,bias\n";
        for (const auto& e : estimates)
          s += std::to_string(e.lag) + "," + num(e.estimate.real()) + "," + num(e.estimate.imag()) +
               "," + num(e.truth.real()) + "," + num(e.truth.imag()) + "," + num(e.bias) + "\n";
        emit.text(s);
        return 0;
      }
      Json j;
      j["kind"] = "coprime";
      j["p"] = ccfg.p;
      j["q"] = ccfg.q;
      j["period"] = ccfg.period;
      j["cycles"] = ccfg.cycles;
      j["frequencies"] = freqs;
      j["estimator"] = estimator_text;
      Json fj = Json::array();
      for (const auto& v : failure) fj.push_back({{"i", v.i}, {"j", v.j}, {"failing", v.failing}});
      j["failure"] = std::move(fj);
      Json lj = Json::array();
      double max_bias = 0.0;
      for (const auto& e : estimates) {
        max_bias = std::max(max_bias, e.bias);
        lj.push_back({{"lag", e.lag},
                      {"n1", e.pair.n1},
                      {"n2", e.pair.n2},
                      {"re", e.estimate.real()},
                      {"im", e.estimate.imag()},
                      {"truth_re", e.truth.real()},
                      {"truth_im", e.truth.imag()},
                      {"bias", e.bias}});
      }
      j["lags"] = std::move(lj);
      j["max_bias"] = max_bias;
      Json pj = Json::array();
      if (spectrum)
        for (const auto& p : spectrum_peaks(*spectrum, ccfg.tones.size()))
          pj.push_back({{"frequency", p.frequency}, {"power", p.power}});
      j["spectrum_peaks"] = std::move(pj);
      emit.json(j);
      return 0;
    }

    if (*doa) {
      ArrayGeometry g;
      if (!in_path.empty()) {
        g = parse_geometry(read_json_file(in_path));
      } else {
        require(!lambda_text.empty() && !positions.empty(), ErrorCode::invalid_argument,
                "doa needs --in or --lambda and --positions");
        g.wavelength = Rational::parse(lambda_text);
        for (const auto& p : positions) g.positions.push_back(Rational::parse(p));
      }
      auto verdict = doa_representable(g);
      i64 used_grid = grid > 0 ? grid : default_doa_grid(g);
      auto witness = doa_ambiguity_search(g, used_grid);
      if (emit.csv()) {
        std::string s = "C,unique,witness_a,witness_b\n" + verdict.c.str() + "," +
                        (verdict.unique ? "true" : "false") + "," +
                        (witness ? num(witness->first) : "") + "," +
                        (witness ? num(witness->second) : "") + "\n";
        emit.text(s);
        return 0;
      }
      Json j;
      j["kind"] = "doa";
      j["lambda"] = g.wavelength.str();
      Json pos = Json::array();
      for (const auto& p : g.positions) pos.push_back(p.str());
      j["positions"] = std::move(pos);
      j["C"] = verdict.c.str();
      j["unique"] = verdict.unique;
      j["grid"] = used_grid;
      j["witness"] = witness ? Json::array({witness->first, witness->second}) : Json(nullptr);
      j["agree"] = verdict.unique == !witness.has_value();
      emit.json(j);
      return 0;
    }

    if (*mc) {
      mcfg.experiment = parse_experiment(experiment_text);
      if (gamma > 0.0) mcfg.gamma = gamma;
      if (!parts.empty()) mcfg.parts = parts;
      mcfg.seed = common.seed;
      auto stats = run_montecarlo(mcfg, ctx);
      if (emit.csv()) {
        emit.text("experiment,pass,trials,counted,within_bound,max_error\n" + stats.experiment + "," +
                  (stats.pass ? "true" : "false") + "," + std::to_string(stats.trials) + "," +
                  std::to_string(stats.counted) + "," + std::to_string(stats.within_bound) + "," +
                  num(stats.max_error) + "\n");
        return 0;
      }
      Json j = montecarlo_to_json(stats);
      Json full;
      full["kind"] = "montecarlo";
      full["gamma"] = mcfg.gamma;
      full["coprime_parts"] = mcfg.parts;
      full["n_sources"] = mcfg.n_sources;
      full["seed"] = mcfg.seed;
      for (auto& [k, v] : j.items()) full[k] = v;
      emit.json(full);
      return 0;
    }
  } catch (const Error& e) {
    Json line = {{"error", std::string(error_code_name(e.code()))}, {"message", e.what()}};
    err << line.dump() << "\n";
    bool infeasible = e.code() == ErrorCode::no_feasible_proposal ||
                      e.code() == ErrorCode::insufficient_distinct_clusters;
    return infeasible ? 2 : 1;
  }
  return 1;
}

}  // namespace remrec
