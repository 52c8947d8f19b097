#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "doctest.h"
#include "kronalign/synth.h"

// Mean degree of n = 1000 graphs against 2 E[k] for the clamped, rounded
// lognormal k, with E[k] estimated by Monte-Carlo.
TEST_CASE("rgg mean degree within 20% of twice the mean neighbor count") {
  const int n = 1000;
  std::mt19937_64 rng(99);
  std::lognormal_distribution<double> lognormal(std::log(5.0), 1.0);
  double ek = 0.0;
  const int draws = 1000000;
  for (int t = 0; t < draws; ++t) {
    ek += std::clamp(std::floor(lognormal(rng) + 0.5), 1.0, n - 1.0);
  }
  ek /= draws;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const double mean = 2.0 * kronalign::Rgg(n, seed).edge_count() / n;
    CAPTURE(seed);
    CAPTURE(mean);
    CAPTURE(2.0 * ek);
    CHECK(mean >= 0.8 * 2.0 * ek);
    CHECK(mean <= 1.2 * 2.0 * ek);
  }
}
