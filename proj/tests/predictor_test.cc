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

#include "vapeval/predictor.h"

#include <cstring>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "vapeval/csv.h"
#include "vapeval/errors.h"
#include "vapeval/turn_metrics.h"

using namespace vapeval;

namespace {

std::vector<float> random_rows(std::size_t frames, std::mt19937& rng) {
  std::gamma_distribution<float> g(0.5f, 1.0f);
  std::vector<float> v(frames * 256);
  for (std::size_t f = 0; f < frames; ++f) {
    double sum = 0.0;
    for (int y = 0; y < 256; ++y) sum += v[f * 256 + y] = g(rng);
    for (int y = 0; y < 256; ++y) v[f * 256 + y] = static_cast<float>(v[f * 256 + y] / sum);
  }
  return v;
}

std::string text_row(int hot) {
  std::string row;
  for (int y = 0; y < 256; ++y) {
    if (y) row += ',';
    row += y == hot ? "1" : "0";
  }
  return row + "\n";
}

int argmax(std::span<const float> row) {
  return static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
}

// Label of frame n computed from seconds, independent of frame_activity:
// frame k of the window is active when its centre lies inside the interval.
int label_by_time(double agent_on, double agent_off, double user_on,
                  double user_off, int n) {
  const int edges[] = {0, 10, 30, 60, 100};
  int label = 0;
  for (int i = 0; i < 4; ++i) {
    int a = 0, u = 0;
    for (int j = edges[i]; j < edges[i + 1]; ++j) {
      const double t = (n + 1 + j + 0.5) / 50.0;
      a += t >= agent_on && t < agent_off;
      u += t >= user_on && t < user_off;
    }
    const int len = edges[i + 1] - edges[i];
    if (2 * a > len) label |= 1 << (7 - i);
    if (2 * u > len) label |= 1 << (3 - i);
  }
  return label;
}

}  // namespace

TEST_CASE("binary trace layout") {
  std::vector<float> v(256, 0.0f);
  v[240] = 1.0f;
  const FrameDistTrace t(50.0f, v);
  const auto bytes = serialize_trace(t);
  REQUIRE(bytes.size() == 4 + 1 + 4 + 4 + 256 * 4);
  CHECK(bytes.substr(0, 4) == "VAPT");
  CHECK(static_cast<unsigned char>(bytes[4]) == 1);
  float rate;
  std::memcpy(&rate, bytes.data() + 5, 4);
  CHECK(rate == 50.0f);
  const unsigned char* n = reinterpret_cast<const unsigned char*>(bytes.data() + 9);
  CHECK(n[0] == 1);
  CHECK(n[1] == 0);
  float one;
  std::memcpy(&one, bytes.data() + 13 + 240 * 4, 4);
  CHECK(one == 1.0f);
}

TEST_CASE("binary round trip is bit-exact") {
  std::mt19937 rng(21);
  const FrameDistTrace t(50.0f, random_rows(40, rng));
  const auto bytes = serialize_trace(t);
  const auto back = parse_trace(bytes);
  CHECK(back.frame_rate() == t.frame_rate());
  REQUIRE(back.values().size() == t.values().size());
  CHECK(std::memcmp(back.values().data(), t.values().data(),
                    t.values().size() * sizeof(float)) == 0);
  CHECK(serialize_trace(back) == bytes);

  const auto path = (std::filesystem::temp_directory_path() / "vapeval_rt.vapt").string();
  write_trace(t, path);
  CHECK(load_trace(path) == t);
  std::filesystem::remove(path);
}

TEST_CASE("binary format errors") {
  std::vector<float> v(256, 0.0f);
  v[0] = 1.0f;
  auto bytes = serialize_trace(FrameDistTrace(50.0f, v));
  CHECK_THROWS_AS(parse_trace(bytes.substr(0, 10)), InputError);
  CHECK_THROWS_AS(parse_trace(bytes.substr(0, bytes.size() - 4)), InputError);
  auto bad_version = bytes;
  bad_version[4] = 2;
  CHECK_THROWS_AS(parse_trace(bad_version), InputError);
  auto not_a_dist = bytes;
  const float half = 0.5f;
  std::memcpy(not_a_dist.data() + 13, &half, 4);
  CHECK_THROWS_WITH_AS(parse_trace(not_a_dist), doctest::Contains("row 0"),
                       ValidationError);
}

TEST_CASE("text distribution traces") {
  const std::string text = "frame_rate=50\nframes=2\n" + text_row(240) + text_row(15);
  const auto t = parse_trace(text);
  CHECK(t.num_frames() == 2);
  const auto p = to_prob_trace(t);
  CHECK(p[0] == ProbFrame{1.0, 1.0});
  CHECK(p[1] == ProbFrame{0.0, 0.0});

  std::string short_row = "frame_rate=50\n" + text_row(240);
  short_row += "1";
  for (int y = 1; y < 255; ++y) short_row += ",0";
  short_row += "\n";
  CHECK_THROWS_WITH_AS(parse_trace(short_row), doctest::Contains("row 1"), InputError);

  std::string bad_sum = "frame_rate=50\n0.9";
  for (int y = 1; y < 256; ++y) bad_sum += ",0";
  CHECK_THROWS_WITH_AS(parse_trace(bad_sum + "\n"), doctest::Contains("row 0"),
                       ValidationError);

  CHECK_THROWS_AS(parse_trace(text_row(3)), InputError);
  CHECK_THROWS_AS(parse_trace("frame_rate=50\nframe_rate=25\n" + text_row(3)), InputError);
  CHECK_THROWS_AS(parse_trace("frame_rate=50\nframes=3\n" + text_row(3)), InputError);
}

TEST_CASE("p-trace round trip") {
  const ProbTrace t(50.0, {{0.25, 0.75}, {1.0, 0.0}, {0.1, 0.30000000000000004}});
  const auto back = parse_ptrace(format_ptrace(t));
  CHECK(back.frame_rate() == 50.0);
  CHECK(back.frames() == t.frames());
  CHECK_THROWS_AS(parse_ptrace("frame_rate=50\n0.5\n"), InputError);
  CHECK_THROWS_AS(parse_ptrace("frame_rate=50\n0.5,1.5\n"), ValidationError);
}

TEST_CASE("oracle examples") {
  const CodecConfig cfg;
  VaScenario agent_only{4.0, {{{{0.0, 4.0}}, {}}}};
  const auto a = oracle_distributions(agent_only, cfg);
  CHECK(a.num_frames() == 100);
  CHECK(argmax(a.row(25)) == 240);  // t = 0.5 s

  VaScenario silent{4.0, {}};
  const auto s = oracle_distributions(silent, cfg);
  for (std::size_t n = 0; n < s.num_frames(); ++n) CHECK(argmax(s.row(n)) == 0);
  CHECK(to_prob_trace(s)[0] == ProbFrame{0.5, 0.5});

  // agent [0, 2], user [2.4, 4], t = 1.9 s: only 0.1 s of agent speech
  // falls in bin 0, so the agent nibble is empty and the user holds bins 2-3.
  VaScenario handover{4.2, {{{{0.0, 2.0}}, {{{2.4, 4.0}}}}}};
  const auto h = oracle_distributions(handover, cfg);
  CHECK(argmax(h.row(95)) == label_by_time(0.0, 2.0, 2.4, 4.0, 95));
  CHECK(argmax(h.row(95)) == 3);
}

TEST_CASE("oracle rows are one-hot and match a time-domain oracle") {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const CodecConfig cfg;
  for (int k = 0; k < 40; ++k) {
    const double ao = 3.0 * u(rng), af = ao + 0.2 + 2.0 * u(rng);
    const double uo = 3.0 * u(rng), uf = uo + 0.2 + 2.0 * u(rng);
    VaScenario sc{6.0, {{{{ao, af}}, {{{uo, uf}}}}}};
    const auto t = oracle_distributions(sc, cfg);
    REQUIRE(t.num_frames() == 200);
    for (std::size_t n = 0; n < t.num_frames(); ++n) {
      const auto row = t.row(n);
      CHECK(std::count(row.begin(), row.end(), 1.0f) == 1);
      CHECK(argmax(row) == label_by_time(ao, af, uo, uf, static_cast<int>(n)));
    }
  }
}

TEST_CASE("oracle scenario errors") {
  const CodecConfig cfg;
  CHECK_THROWS_AS(oracle_distributions(VaScenario{2.0, {}}, cfg), ValidationError);
  CHECK_THROWS_AS(oracle_distributions(VaScenario{4.0, {{{{1.0, 0.5}}, {}}}}, cfg),
                  ValidationError);
  CHECK_THROWS_AS(
      oracle_distributions(VaScenario{4.0, {{{{0.0, 1.0}, {0.5, 2.0}}, {}}}}, cfg),
      ValidationError);
  CHECK_THROWS_AS(oracle_distributions(VaScenario{4.0, {{{{0.0, 5.0}}, {}}}}, cfg),
                  ValidationError);
}

TEST_CASE("scenario JSON round trip") {
  const auto j = nlohmann::json::parse(
      R"({"duration": 6, "agent": [[0, 1.2], [1.6, 3.0]], "user": [[3.2, 6]]})");
  const auto s = scenario_from_json(j);
  CHECK(s.speech[0].size() == 2);
  CHECK(s.speech[1][0].onset == 3.2);
  CHECK(scenario_from_json(scenario_to_json(s)).speech[0][1].offset == 3.0);
  CHECK_THROWS_AS(scenario_from_json(nlohmann::json::parse(R"({"agent": []})")),
                  InputError);
}

TEST_CASE("statement, pause, question, then the user takes the turn") {
  // Agent: statement [0.2, 2.0), question [2.4, 4.4). User from 4.6 s.
  VaScenario sc{7.2, {{{{0.2, 2.0}, {2.4, 4.4}}, {{{4.6, 7.2}}}}}};
  const auto trace = to_prob_trace(oracle_distributions(sc, CodecConfig()));
  const auto r = derive_regions(TurnMarkers{2.0, 2.4, 4.4}, 50.0);
  const auto m = classify(trace, r);
  CHECK(m.weak_hold);
  CHECK(m.strong_hold);
  CHECK(m.early_yield);
  CHECK(m.late_yield);
}
