#pragma once

// JSON forms of problems, observations, solutions and reports. Non-finite
// numbers are written as null.

#include <json.hpp>
#include <string>
#include <vector>

#include "remrec/coprime_sim.hpp"
#include "remrec/decoder_complex.hpp"
#include "remrec/decoder_real.hpp"
#include "remrec/design_tools.hpp"
#include "remrec/montecarlo.hpp"
#include "remrec/remainder_model.hpp"

namespace remrec {

using Json = nlohmann::ordered_json;

struct Problem {
  ModulusSet moduli;
  SourceSet sources;
  NoiseSpec noise;
};

struct ObservationFile {
  ModulusSet moduli;
  ResidueObservation obs;
};

Json number_or_null(double v);

Problem parse_problem(const Json& j);
Json problem_to_json(const Problem& p);

ObservationFile parse_observation(const Json& j);
Json observation_to_json(const ResidueObservation& obs, const ModulusSet& moduli);

Json solutions_to_json(const std::vector<DecodeSolution>& sols, const ModulusSet& moduli,
                       std::size_t n_sources);
Json solutions_to_json(const std::vector<RealDecodeSolution>& sols, const ModulusSet& moduli,
                       std::size_t n_sources, std::string_view decoder);

Json rate_report_to_json(const RateSelectionReport& r);
Json montecarlo_to_json(const MonteCarloStats& s);

ArrayGeometry parse_geometry(const Json& j);

// Reads a whole file or throws io_error.
Json read_json_file(const std::string& path);

}  // namespace remrec
