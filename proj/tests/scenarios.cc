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

#include "scenarios.h"

namespace vapeval::testing {

namespace {

// Frame n at 50 Hz sees VA frames n+1 .. n+100; bins are [n+1, n+11),
// [n+11, n+31), [n+31, n+61), [n+61, n+101). Frame k is active when
// (k + 0.5) / 50 lies in an interval, so speech starting at t covers
// frames k >= ceil(50 t - 0.5).

Alignment turn(double statement_on, double se, double qs, double qe) {
  return Alignment({{"work.", statement_on, se}, {"you?", qs, qe}},
                   TurnMarkers{se, qs, qe});
}

VaScenario va(double duration, std::vector<Interval> agent,
              std::vector<Interval> user) {
  VaScenario s;
  s.duration = duration;
  s.speech[0] = std::move(agent);
  s.speech[1] = std::move(user);
  return s;
}

constexpr bool T = true;
constexpr bool F = false;

}  // namespace

std::vector<OracleCase> oracle_cases() {
  std::vector<OracleCase> c;
  // Default turn: statement to 2.0 s, pause to 2.4 s, question to 4.4 s.
  // Regions: pause [100, 120), early [190, 220), late [220, 240).
  const auto base = turn(0.2, 2.0, 2.4, 4.4);

  // Agent fills the now bins (question from frame 120) and fut bins during
  // the pause; the user (from frame 230) fills every fut bin of the early
  // window and bin 1 of the late window.
  c.push_back({"hold_then_user_turn",
               va(7.2, {{0.2, 2.0}, {2.4, 4.4}}, {{4.6, 7.2}}), base, {T, T, T, T}});

  // Nobody speaks after the question: early and late windows see only
  // silence, p = 0.5, which favours neither side.
  c.push_back({"hold_then_silence", va(7.2, {{0.2, 2.0}, {2.4, 4.4}}, {}), base,
               {T, T, F, F}});

  // Agent keeps talking past the marked question end.
  c.push_back({"agent_continues", va(7.2, {{0.2, 2.0}, {2.4, 7.0}}, {}), base,
               {T, T, F, F}});

  // Pause [100, 150) with a user backchannel over frames 100..139. p_fut is
  // 1 throughout (bin 3 is agent, the backchannel never fills bin 2).
  // p_now: 0 for n <= 129, 2/3 for n in 130..133, 1 after; mean 0.37.
  c.push_back({"backchannel_in_pause",
               va(7.6, {{0.2, 2.0}, {3.0, 5.0}}, {{2.0, 2.8}, {5.2, 7.6}}),
               turn(0.2, 2.0, 3.0, 5.0), {T, F, T, T}});

  // User talks from 2.0 s on while the agent still asks the question.
  // Pause p_fut = 0.5 (both fill bins 2-3); p_now mean 0.425.
  c.push_back({"user_overlaps_pause",
               va(7.0, {{0.2, 2.0}, {2.4, 4.4}}, {{2.0, 7.0}}), base, {F, F, T, T}});

  c.push_back({"all_silence", va(7.0, {}, {}), base, {F, F, F, F}});

  // User speaks first, then a normal agent turn and user response.
  // Pause [130, 150): agent fills bin 1 from n = 130.
  c.push_back({"user_first_then_hold",
               va(7.6, {{1.0, 2.6}, {3.0, 5.0}}, {{0.0, 0.8}, {5.2, 7.6}}),
               turn(1.0, 2.6, 3.0, 5.0), {T, T, T, T}});

  // 200 ms pause: regions pause [100, 110), early [180, 210), late [210, 230).
  c.push_back({"short_pause",
               va(7.0, {{0.2, 2.0}, {2.2, 4.2}}, {{4.4, 7.0}}),
               turn(0.2, 2.0, 2.2, 4.2), {T, T, T, T}});

  // One-second silent pause: p_now is 0.5 for n < 130 and 1 after, mean 0.7.
  c.push_back({"long_silent_pause",
               va(7.6, {{0.2, 2.0}, {3.0, 5.0}}, {{5.2, 7.6}}),
               turn(0.2, 2.0, 3.0, 5.0), {T, T, T, T}});

  // User answers a full second after the question: bin 3 carries the user
  // during the early window, but the late window's now bins stay silent.
  c.push_back({"late_user_response",
               va(8.0, {{0.2, 2.0}, {2.4, 4.4}}, {{5.4, 8.0}}), base, {T, T, T, F}});

  // Agent resumes at 5.0 s: fut bin 3 is agent in the early window, and the
  // late window's p_now averages 0.75.
  c.push_back({"agent_resumes",
               va(7.2, {{0.2, 2.0}, {2.4, 4.4}, {5.0, 7.0}}, {}), base,
               {T, T, F, F}});

  // The user takes over right after the statement; the agent never asks.
  c.push_back({"user_takes_over",
               va(7.0, {{0.2, 2.0}}, {{2.1, 7.0}}), base, {F, F, T, T}});

  // hold_then_user_turn with the channels exchanged.
  c.push_back({"swapped_roles",
               va(7.2, {{4.6, 7.2}}, {{0.2, 2.0}, {2.4, 4.4}}), base, {F, F, F, F}});
  return c;
}

nlohmann::json case_to_json(const OracleCase& c) {
  auto j = scenario_to_json(c.va);
  j["alignment"] = alignment_to_json(c.alignment);
  return j;
}

}  // namespace vapeval::testing
