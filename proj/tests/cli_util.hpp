// Copyright 2026 The topicflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Helpers for driving the command-line binary from tests.

#pragma once

#include <sys/wait.h>

#include <cstdlib>
#include <string>

#include "test_util.hpp"

namespace topicflow::testing {

struct CliRun {
  int code = -1;
  std::string log;  // stderr
};

// Runs the CLI with `args` (already shell-quoted where needed).
inline CliRun run_cli(const std::string& args, const std::string& log_path) {
  const std::string cmd = std::string("\"") + TOPICFLOW_CLI + "\" " + args + " >/dev/null 2>\"" + log_path + "\"";
  const int status = std::system(cmd.c_str());
  CliRun r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.log = slurp(log_path);
  return r;
}

// A pipeline small enough to run end to end in a few seconds.
inline std::string small_config(const std::string& corpus, const std::string& work_dir) {
  return "[paths]\ncorpus = \"" + corpus + "\"\nwork_dir = \"" + work_dir +
         "\"\n"
         "[preprocess]\nmin_df = 1\n"
         "[sweep]\nk_min = 2\nk_max = 4\nruns = 2\n"
         "[lda]\nk = 3\npasses = 3\nbatch_size = 64\n"
         "[embed]\ndim = 16\nbuckets = 5000\nepochs = 2\n"
         "[kmeans]\nk = 3\nrestarts = 3\n"
         "[projection]\nneighbors = 8\nepochs = 30\n"
         "[classifier]\ndim = 16\nbuckets = 5000\nepochs = 3\n"
         "[eval]\nk_max = 3\n"
         "[synth]\ntopics = 3\ndocs_per_topic = 30\nnoise_vocab = 50\nreplies_per_news = 1\n";
}

}  // namespace topicflow::testing
