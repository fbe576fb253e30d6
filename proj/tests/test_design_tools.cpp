#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <vector>

#include "oracles.hpp"
#include "remrec/design_tools.hpp"
#include "remrec/error.hpp"
#include "remrec/rng.hpp"

using namespace remrec;

namespace {

// Independent subset scan with the witness recomputed from the mask.
i64 brute_delta(const std::vector<i64>& m) {
  i64 best = -1;
  for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << m.size()); ++mask) {
    i64 a = 1, b = 1;
    for (std::size_t l = 0; l < m.size(); ++l) {
      i64& t = (mask >> l) & 1 ? a : b;
      t = t / gcd(t, m[l]) * m[l];
    }
    i64 g = gcd(a, b);
    if (best < 0 || g < best) best = g;
  }
  return best;
}

ArrayGeometry geometry(Rational lambda, std::vector<Rational> p) { return {lambda, std::move(p)}; }

}  // namespace

TEST_CASE("delta upper bound examples") {
  std::vector<i64> a{12, 16, 20};
  auto d = delta_upper_bound(a);
  CHECK(d.bound == 4);
  CHECK(d.witness == std::vector<i64>{12});
  std::vector<i64> b{6, 10, 15};
  auto e = delta_upper_bound(b);
  CHECK(e.bound == 6);
  CHECK(e.witness == std::vector<i64>{6});
  std::vector<i64> c{7, 9};
  auto f = delta_upper_bound(c);
  CHECK(f.bound == 1);
  CHECK(f.witness == std::vector<i64>{7});
  std::vector<i64> one{7};
  CHECK_THROWS_AS(delta_upper_bound(one), Error);
}

TEST_CASE("delta upper bound matches a subset scan") {
  Rng rng(6);
  for (int t = 0; t < 200; ++t) {
    std::size_t L = static_cast<std::size_t>(rng.integer(2, 6));
    std::vector<i64> m(L);
    for (auto& v : m) v = rng.integer(1, 60);
    CHECK(delta_upper_bound(m).bound == brute_delta(m));
  }
}

TEST_CASE("scaled co-prime parts give gamma") {
  for (i64 gamma : {2, 4, 8, 12}) {
    std::vector<i64> m{gamma * 5, gamma * 7, gamma * 9, gamma * 11};
    CHECK(delta_upper_bound(m).bound == gamma);
  }
}

TEST_CASE("uniqueness scan") {
  ModulusSet m(4, {3, 4, 5});
  auto a = check_unique_encoding(m, 240, 1, Model::complex, 1);
  CHECK(a.unique);
  CHECK(a.tuples_checked == 240);
  auto b = check_unique_encoding(m, 241, 1, Model::complex, 1);
  REQUIRE_FALSE(b.unique);
  CHECK(b.collision->first == std::vector<double>{0});
  CHECK(b.collision->second == std::vector<double>{240});

  ModulusSet r(1, {3, 4, 5});
  auto c = check_unique_encoding(r, 9, 1, Model::real, 0.5);
  REQUIRE_FALSE(c.unique);
  CHECK(c.collision->first == std::vector<double>{3.5});
  CHECK(c.collision->second == std::vector<double>{8.5});
  CHECK(check_unique_encoding(r, 8.5, 1, Model::real, 0.5).unique);
}

TEST_CASE("uniqueness scan does not depend on the worker count") {
  ModulusSet m(2, {3, 5});
  auto a = check_unique_encoding(m, 30, 2, Model::complex, 1, 10'000'000, {1});
  auto b = check_unique_encoding(m, 30, 2, Model::complex, 1, 10'000'000, {4});
  CHECK(a.unique == b.unique);
  CHECK(a.collision == b.collision);
  CHECK(a.tuples_checked == b.tuples_checked);
  CHECK_THROWS_AS(check_unique_encoding(m, 1e6, 2, Model::complex, 1, 1000), Error);
}

TEST_CASE("doa representability examples") {
  auto a = doa_representable(geometry(2, {0, 3, 4}));
  CHECK(a.c == Rational(2));
  CHECK(a.unique);
  auto b = doa_representable(geometry(2, {0, 4, 6}));
  CHECK(b.c == Rational(1));
  CHECK_FALSE(b.unique);
  auto c = doa_representable(geometry(1, {0, Rational(1, 2)}));
  CHECK(c.c == Rational(2));
  CHECK(c.unique);
  CHECK_THROWS_AS(doa_representable(geometry(1, {1, 2})), Error);
  CHECK_THROWS_AS(doa_representable(geometry(1, {0})), Error);
  CHECK_THROWS_AS(doa_representable(geometry(1, {0, 2, 2})), Error);
}

TEST_CASE("doa ambiguity search examples") {
  auto g = geometry(2, {0, 4, 6});
  auto w = doa_ambiguity_search(g, default_doa_grid(g));
  REQUIRE(w);
  CHECK(w->second - w->first == doctest::Approx(1));
  CHECK(w->first >= -1);
  CHECK(w->second < 1);
  auto h = geometry(2, {0, 3, 4});
  CHECK_FALSE(doa_ambiguity_search(h, default_doa_grid(h)));
  auto s = geometry(5, {0, 2});
  CHECK_FALSE(doa_ambiguity_search(s, default_doa_grid(s)));
}

TEST_CASE("doa verdicts agree with the ambiguity search") {
  Rng rng(19);
  for (int t = 0; t < 200; ++t) {
    Rational lambda(rng.integer(1, 12), rng.integer(1, 12));
    std::vector<Rational> p{Rational(0)};
    std::size_t count = static_cast<std::size_t>(rng.integer(1, 3));
    while (p.size() <= count) {
      Rational next = p.back() + Rational(rng.integer(1, 12), rng.integer(1, 12));
      p.push_back(next);
    }
    auto g = geometry(lambda, p);
    auto verdict = doa_representable(g);
    auto witness = doa_ambiguity_search(g, default_doa_grid(g));
    CHECK(verdict.unique == !witness.has_value());
  }
}

TEST_CASE("ordered CRT decode") {
  ModulusSet m(4, {3, 4, 5});
  CHECK(ordered_crt_decode({{4, 4, 0}}, m) == std::vector<double>{100});
  CHECK(ordered_crt_decode({{0, 0, 0}}, m) == std::vector<double>{0});
  auto two = ordered_crt_decode({{4, 4, 0}, {233 % 12, 233 % 16, 233 % 20}}, m);
  CHECK(two == std::vector<double>{100, 233});
}

TEST_CASE("rate selection report") {
  ModulusSet m(4, {3, 4, 5});
  auto r = rate_selection_report(m, 2);
  CHECK(r.delta_upper_bound == 4);
  CHECK(r.complex_folding_range == std::vector<i64>{60, 12});
  CHECK(r.real_folding_range[0] == Rational(15, 2));
  CHECK(r.real_dynamic_range[0] == 30);
  CHECK(r.complex_dynamic_range[0] == 236);
  CHECK(r.lcm == 240);
}
