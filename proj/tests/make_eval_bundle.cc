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

// Regenerates tests/data/eval_bundle: make_eval_bundle <out_dir>
#include <iostream>

#include "eval_bundle.h"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_eval_bundle <out_dir>\n";
    return 1;
  }
  vapeval::testing::write_eval_bundle(argv[1],
                                      VAPEVAL_TEST_DATA_DIR "/alignments/fig2.json");
  return 0;
}
