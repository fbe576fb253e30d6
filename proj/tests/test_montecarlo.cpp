#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "remrec/decoder_complex.hpp"
#include "remrec/error.hpp"
#include "remrec/montecarlo.hpp"

using namespace remrec;

TEST_CASE("experiment names round trip") {
  for (auto e : {Experiment::complex_bound, Experiment::complex_separated,
                 Experiment::real_single_bound, Experiment::real_multi_bound,
                 Experiment::separation_frequency})
    CHECK(parse_experiment(experiment_name(e)) == e);
  CHECK_THROWS_AS(parse_experiment("nope"), Error);
}

TEST_CASE("small runs pass and ignore the worker count") {
  MonteCarloConfig cfg;
  cfg.trials = 60;
  cfg.seed = 4;
  auto a = run_montecarlo(cfg, {1});
  auto b = run_montecarlo(cfg, {4});
  CHECK(a.pass);
  CHECK(a.within_bound == a.counted);
  CHECK(a.counted == 60);
  CHECK(a.max_error == b.max_error);
  CHECK(a.ambiguous == b.ambiguous);
  CHECK(a.bound == 48);
  CHECK(a.range == 64 * 34);
}

TEST_CASE("real single-source run") {
  MonteCarloConfig cfg;
  cfg.experiment = Experiment::real_single_bound;
  cfg.gamma = 4;
  cfg.parts = {3, 4, 5};
  cfg.n_sources = 1;
  cfg.trials = 200;
  auto s = run_montecarlo(cfg);
  CHECK(s.pass);
  CHECK(s.range == 30);
  CHECK(s.delta == 1);
  CHECK(s.counted + s.degenerate == s.trials);
}

TEST_CASE("separation frequency run") {
  MonteCarloConfig cfg;
  cfg.experiment = Experiment::separation_frequency;
  cfg.parts = {7, 11, 13};
  cfg.n_sources = 2;
  cfg.trials = 20000;
  cfg.frequency_tolerance = 0.01;
  auto s = run_montecarlo(cfg);
  CHECK(s.predicted_frequency == doctest::Approx(separation_probability(cfg.parts)));
  CHECK(std::abs(s.empirical_frequency - s.predicted_frequency) < 0.01);
}
