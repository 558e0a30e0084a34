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


#pragma once

#include "topicflow/cluster.hpp"
#include "topicflow/coherence.hpp"
#include "topicflow/common.hpp"
#include "topicflow/corpus.hpp"
#include "topicflow/embed.hpp"
#include "topicflow/eval.hpp"
#include "topicflow/lda.hpp"
#include "topicflow/project.hpp"
#include "topicflow/synthgen.hpp"
#include "topicflow/text.hpp"
#include "topicflow/viz.hpp"
