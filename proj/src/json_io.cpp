#include "remrec/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "remrec/error.hpp"

namespace remrec {

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

namespace {

template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::invalid_argument, std::string(what) + ": " + e.what());
  }
}

ModulusSet parse_moduli(const Json& j) {
  return ModulusSet(j.at("gamma").get<double>(), j.at("coprime_parts").get<std::vector<i64>>());
}

void put_moduli(Json& j, const ModulusSet& m) {
  j["gamma"] = m.gamma();
  j["coprime_parts"] = m.parts();
}

}  // namespace

Problem parse_problem(const Json& j) {
  return guarded("problem", [&] {
    ModulusSet moduli = parse_moduli(j);
    SourceSet sources{j.at("sources").get<std::vector<double>>(),
                      parse_model(j.value("model", std::string("complex")))};
    NoiseSpec noise;
    if (j.contains("noise") && !j["noise"].is_null()) {
      const auto& nj = j["noise"];
      std::string type = nj.value("type", std::string("uniform"));
      double delta = nj.value("delta", 0.0);
      if (type == "uniform") {
        noise = NoiseSpec::uniform(delta, nj.value("seed", std::uint64_t{0}));
      } else if (type == "fixed") {
        noise = NoiseSpec::fixed(delta, nj.at("values").get<std::vector<std::vector<double>>>());
      } else if (type == "none") {
        noise = NoiseSpec::none();
      } else {
        fail(ErrorCode::invalid_argument, "unknown noise type '" + type + "'");
      }
    }
    return Problem{std::move(moduli), std::move(sources), std::move(noise)};
  });
}

Json problem_to_json(const Problem& p) {
  Json j;
  put_moduli(j, p.moduli);
  j["model"] = std::string(model_name(p.sources.model));
  j["sources"] = p.sources.values;
  Json noise;
  noise["type"] = std::string(noise_kind_name(p.noise.kind));
  noise["delta"] = p.noise.delta;
  noise["seed"] = p.noise.seed;
  if (p.noise.kind == NoiseKind::fixed) noise["values"] = p.noise.values;
  j["noise"] = noise;
  return j;
}

ObservationFile parse_observation(const Json& j) {
  return guarded("observation", [&] {
    ModulusSet moduli = parse_moduli(j);
    ResidueObservation obs;
    obs.model = parse_model(j.at("model").get<std::string>());
    obs.residues = j.at("residues").get<std::vector<std::vector<double>>>();
    obs.noise_bound = j.value("noise_bound", 0.0);
    if (j.contains("labels")) {
      for (const auto& row : j["labels"]) {
        std::vector<ResidueLabel> labels;
        for (const auto& e : row)
          labels.push_back({e.at("source").get<int>(), e.at("negative").get<bool>()});
        obs.labels.push_back(std::move(labels));
      }
    }
    if (j.contains("warnings")) obs.warnings = j["warnings"].get<std::vector<std::string>>();
    return ObservationFile{std::move(moduli), std::move(obs)};
  });
}

Json observation_to_json(const ResidueObservation& obs, const ModulusSet& moduli) {
  Json j;
  j["kind"] = "observation";
  put_moduli(j, moduli);
  j["model"] = std::string(model_name(obs.model));
  j["noise_bound"] = obs.noise_bound;
  j["residues"] = obs.residues;
  if (!obs.labels.empty()) {
    Json rows = Json::array();
    for (const auto& row : obs.labels) {
      Json r = Json::array();
      for (const auto& e : row) r.push_back({{"source", e.source}, {"negative", e.negative}});
      rows.push_back(std::move(r));
    }
    j["labels"] = std::move(rows);
  }
  j["warnings"] = obs.warnings;
  return j;
}

Json solutions_to_json(const std::vector<DecodeSolution>& sols, const ModulusSet& moduli,
                       std::size_t n) {
  Json j;
  j["kind"] = "solution";
  j["model"] = "complex";
  j["decoder"] = "complex";
  put_moduli(j, moduli);
  j["n_sources"] = n;
  j["folding_range"] = std::to_string(folding_range(moduli, n));
  j["dynamic_range"] = dynamic_range(moduli, n, Model::complex);
  auto groups = distinct_estimates(sols, moduli.gamma() / 2.0).size();
  j["ambiguous"] = groups > 1;
  j["distinct_estimate_sets"] = groups;
  Json list = Json::array();
  for (const auto& s : sols) {
    list.push_back({{"estimates", s.estimates},
                    {"folding_numbers", s.folding_numbers},
                    {"clusters", s.clusters},
                    {"taus", s.taus},
                    {"certified_bound", s.certified_bound}});
  }
  j["solutions"] = std::move(list);
  return j;
}

Json solutions_to_json(const std::vector<RealDecodeSolution>& sols, const ModulusSet& moduli,
                       std::size_t n, std::string_view decoder) {
  Json j;
  j["kind"] = "solution";
  j["model"] = "real";
  j["decoder"] = std::string(decoder);
  put_moduli(j, moduli);
  j["n_sources"] = n;
  j["folding_range"] = real_folding_range(moduli, n).str();
  j["dynamic_range"] = dynamic_range(moduli, n, Model::real);
  auto groups = distinct_estimates(sols, moduli.gamma() / 2.0).size();
  j["ambiguous"] = groups > 1;
  j["distinct_estimate_sets"] = groups;
  Json list = Json::array();
  for (const auto& s : sols) {
    Json ops = Json::array();
    for (auto op : s.operations) ops.push_back(op == OperationChoice::op1 ? "op1" : "op2");
    list.push_back({{"estimates", s.estimates},
                    {"folding_numbers", s.folding_numbers},
                    {"clusters", s.clusters},
                    {"taus", s.taus},
                    {"operations", ops},
                    {"certified_bound", s.certified_bound},
                    {"degenerate", s.degenerate}});
  }
  j["solutions"] = std::move(list);
  return j;
}

Json rate_report_to_json(const RateSelectionReport& r) {
  Json j;
  j["gamma"] = r.gamma;
  j["coprime_parts"] = r.parts;
  j["moduli"] = r.moduli;
  j["lcm"] = r.lcm;
  j["delta_upper_bound"] = r.delta_upper_bound;
  j["worst_partition"] = r.worst_partition;
  Json table = Json::array();
  for (std::size_t k = 0; k < r.complex_folding_range.size(); ++k) {
    table.push_back({{"n_sources", k + 1},
                     {"complex_folding_range", r.complex_folding_range[k]},
                     {"complex_dynamic_range", r.complex_dynamic_range[k]},
                     {"real_folding_range", r.real_folding_range[k].str()},
                     {"real_dynamic_range", r.real_dynamic_range[k]}});
  }
  j["ranges"] = std::move(table);
  return j;
}

Json montecarlo_to_json(const MonteCarloStats& s) {
  Json j;
  j["experiment"] = s.experiment;
  j["pass"] = s.pass;
  j["trials"] = s.trials;
  j["counted"] = s.counted;
  j["within_bound"] = s.within_bound;
  j["no_feasible"] = s.no_feasible;
  j["impure"] = s.impure;
  j["degenerate"] = s.degenerate;
  j["degenerate_within_bound"] = s.degenerate_within_bound;
  j["ambiguous"] = s.ambiguous;
  j["bound"] = s.bound;
  j["max_error"] = number_or_null(s.max_error);
  j["range"] = s.range;
  j["delta"] = s.delta;
  j["empirical_frequency"] = s.empirical_frequency;
  j["predicted_frequency"] = s.predicted_frequency;
  return j;
}

ArrayGeometry parse_geometry(const Json& j) {
  return guarded("geometry", [&] {
    auto as_rational = [](const Json& v) {
      if (v.is_string()) return Rational::parse(v.get<std::string>());
      if (v.is_number_integer()) return Rational(v.get<i64>());
      fail(ErrorCode::invalid_geometry, "geometry values must be rational strings like \"3/2\"");
    };
    ArrayGeometry g;
    g.wavelength = as_rational(j.at("lambda"));
    for (const auto& p : j.at("positions")) g.positions.push_back(as_rational(p));
    return g;
  });
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io_error, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::invalid_argument, "'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace remrec
