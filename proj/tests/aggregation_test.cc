// Copyright 2026 The vapeval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vapeval/aggregation.h"

#include <cmath>
#include <random>

#include "doctest.h"
#include "vapeval/errors.h"

using namespace vapeval;

namespace {

// Brute-force oracle: evaluates the defining per-label sum straight from the
// bit layout without going through decode_label or marginals.
double oracle_weight(const std::array<double, 256>& d, int speaker,
                     bool now) {
  const double dur[4] = {0.2, 0.4, 0.6, 0.8};
  const int lo = now ? 0 : 2;
  const double norm = dur[lo] + dur[lo + 1];
  double total = 0.0;
  for (int y = 0; y < 256; ++y) {
    double active = 0.0;
    for (int i = lo; i < lo + 2; ++i) {
      if ((y >> (7 - (4 * speaker + i))) & 1) active += dur[i];
    }
    total += d[y] * active / norm;
  }
  return total;
}

double oracle_p(const std::array<double, 256>& d, bool now) {
  const double a = oracle_weight(d, 0, now);
  const double u = oracle_weight(d, 1, now);
  return a + u == 0.0 ? 0.5 : a / (a + u);
}

std::array<double, 256> random_probs(std::mt19937& rng) {
  std::gamma_distribution<double> g(0.3, 1.0);
  std::array<double, 256> p;
  double sum = 0.0;
  for (auto& v : p) {
    v = g(rng);
    sum += v;
  }
  for (auto& v : p) v /= sum;
  return p;
}

LabelDistribution mix(std::initializer_list<std::pair<int, double>> parts) {
  std::array<double, 256> p{};
  for (auto [y, w] : parts) p[y] += w;
  return LabelDistribution(p);
}

}  // namespace

TEST_CASE("LabelDistribution validation") {
  std::array<double, 256> p{};
  CHECK_THROWS_AS(LabelDistribution{p}, ValidationError);
  p[3] = 0.9;
  CHECK_THROWS_AS(LabelDistribution{p}, ValidationError);
  p[3] = 1.00005;  // inside 1e-4
  CHECK_NOTHROW(LabelDistribution{p});
  p[3] = 1.0;
  p[4] = -0.0001;
  CHECK_THROWS_AS(LabelDistribution{p}, ValidationError);
  CHECK_THROWS_AS(LabelDistribution::OneHot(256), std::out_of_range);
}

TEST_CASE("speaker_region_weight examples") {
  const auto d240 = LabelDistribution::OneHot(240);
  CHECK(speaker_region_weight(d240, Speaker::kAgent, Region::kNow) == 1.0);

  const auto u = LabelDistribution::Uniform();
  for (auto s : {Speaker::kAgent, Speaker::kUser})
    for (auto r : {Region::kNow, Region::kFut})
      CHECK(speaker_region_weight(u, s, r) == doctest::Approx(0.5).epsilon(1e-12));

  const auto d60 = LabelDistribution::OneHot(60);
  CHECK(speaker_region_weight(d60, Speaker::kAgent, Region::kFut) == 1.0);
  CHECK(speaker_region_weight(d60, Speaker::kAgent, Region::kNow) == 0.0);
}

TEST_CASE("p_now and p_fut examples") {
  const auto d240 = LabelDistribution::OneHot(240);
  CHECK(p_now(d240) == 1.0);
  CHECK(p_fut(d240) == 1.0);

  const auto d60 = LabelDistribution::OneHot(60);
  CHECK(p_now(d60) == 0.0);
  CHECK(p_fut(d60) == 1.0);

  const auto half = mix({{240, 0.5}, {15, 0.5}});
  CHECK(p_now(half) == doctest::Approx(oracle_p(half.probs(), true)));
  CHECK(p_now(half) == doctest::Approx(0.5));
  CHECK(p_fut(half) == doctest::Approx(0.5));

  const auto u = LabelDistribution::Uniform();
  CHECK(p_now(u) == doctest::Approx(0.5));
  CHECK(p_fut(u) == doctest::Approx(0.5));

  // Silence everywhere carries no preference.
  CHECK(p_now(LabelDistribution::OneHot(0)) == 0.5);
  CHECK(p_fut(LabelDistribution::OneHot(0)) == 0.5);
}

TEST_CASE("uniform bin weighting differs from duration weighting") {
  // Label 128: agent bin 0 only. Label 4: user bin 1 only.
  const auto d = mix({{128, 0.5}, {4, 0.5}});
  // duration: agent 0.5 * 0.2/0.6, user 0.5 * 0.4/0.6 -> p_now = 1/3.
  CHECK(p_now(d, BinWeighting::kDuration) == doctest::Approx(1.0 / 3.0));
  CHECK(p_now(d, BinWeighting::kUniform) == doctest::Approx(0.5));
  CHECK(parse_bin_weighting("uniform") == BinWeighting::kUniform);
  CHECK_THROWS_AS(parse_bin_weighting("median"), ValidationError);
}

TEST_CASE("fast marginal path matches brute force on random distributions") {
  std::mt19937 rng(1234);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const auto probs = random_probs(rng);
    const LabelDistribution d(probs);
    const auto fast = next_speaker_probs(d);
    worst = std::max(worst, std::abs(fast.p_now - oracle_p(probs, true)));
    worst = std::max(worst, std::abs(fast.p_fut - oracle_p(probs, false)));
    const auto m = bin_marginals(d);
    for (auto s : {Speaker::kAgent, Speaker::kUser}) {
      for (auto r : {Region::kNow, Region::kFut}) {
        worst = std::max(worst, std::abs(region_weight(m, s, r) -
                                         speaker_region_weight(d, s, r)));
      }
    }
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("channel swap maps p to 1 - p") {
  std::mt19937 rng(99);
  for (int k = 0; k < 200; ++k) {
    const auto probs = random_probs(rng);
    std::array<double, 256> swapped{};
    for (int y = 0; y < 256; ++y) {
      swapped[swap_channels(VapLabel(y)).value()] = probs[y];
    }
    const auto a = next_speaker_probs(LabelDistribution(probs));
    const auto b = next_speaker_probs(LabelDistribution(swapped));
    CHECK(std::abs(a.p_now - (1.0 - b.p_now)) <= 1e-12);
    CHECK(std::abs(a.p_fut - (1.0 - b.p_fut)) <= 1e-12);
    CHECK(a.p_now >= 0.0);
    CHECK(a.p_now <= 1.0);
    CHECK(a.p_fut >= 0.0);
    CHECK(a.p_fut <= 1.0);
  }
}

TEST_CASE("trace_from_distributions") {
  std::vector<LabelDistribution> three(3, LabelDistribution::OneHot(240));
  const auto t = trace_from_distributions(three, 50.0);
  REQUIRE(t.size() == 3);
  for (const auto& f : t.frames()) CHECK(f == ProbFrame{1.0, 1.0});

  std::vector<LabelDistribution> two(2, LabelDistribution::Uniform());
  const auto u = trace_from_distributions(two, 50.0);
  for (const auto& f : u.frames()) {
    CHECK(f.p_now == doctest::Approx(0.5));
    CHECK(f.p_fut == doctest::Approx(0.5));
  }

  std::vector<LabelDistribution> mixed = {LabelDistribution::OneHot(240),
                                          LabelDistribution::OneHot(15)};
  const auto m = trace_from_distributions(mixed, 50.0);
  CHECK(m[0] == ProbFrame{1.0, 1.0});
  CHECK(m[1] == ProbFrame{0.0, 0.0});

  CHECK_THROWS_AS(trace_from_distributions({}, 50.0), ValidationError);
}

TEST_CASE("ProbTrace rejects out-of-range values") {
  CHECK_THROWS_AS(ProbTrace(50.0, {{0.5, 1.2}}), ValidationError);
  CHECK_THROWS_AS(ProbTrace(0.0, {{0.5, 0.5}}), ValidationError);
  CHECK_THROWS_AS(ProbTrace(50.0, {}), ValidationError);
}
