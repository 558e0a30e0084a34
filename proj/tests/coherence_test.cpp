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


#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "test_util.hpp"
#include "topicflow/coherence.hpp"

namespace topicflow {
namespace {

std::vector<oracle::Doc> split_docs(const std::vector<std::string>& texts) {
  std::vector<oracle::Doc> out;
  for (const auto& t : texts) {
    oracle::Doc d;
    for (auto w : text::split_whitespace(t)) d.emplace_back(w);
    out.push_back(d);
  }
  return out;
}

std::set<WordId> all_ids(const TokenizedCorpus& c) {
  std::set<WordId> s;
  for (WordId i = 0; i < c.vocabulary.size(); ++i) s.insert(i);
  return s;
}

WordId id(const TokenizedCorpus& c, const std::string& w) { return *c.vocabulary.id_of(w); }

const std::vector<std::string> kFiveDocs = {
    "paz acuerdo firma paz gobierno farc",
    "gol seleccion partido gol estadio",
    "acuerdo farc gobierno plebiscito voto paz",
    "partido seleccion estadio hinchas gol gol",
    "plebiscito voto paz acuerdo gobierno hinchas"};

TEST(WindowCounts, ShortDocIsOneWindow) {
  const auto c = testing::corpus_of({"a b"});
  const auto counts = window_counts(c, all_ids(c), 110);
  EXPECT_EQ(counts.total_windows, 1u);
  EXPECT_EQ(counts.count(id(c, "a")), 1u);
  EXPECT_EQ(counts.count(id(c, "b")), 1u);
  EXPECT_EQ(counts.count(id(c, "a"), id(c, "b")), 1u);
}

TEST(WindowCounts, SlidesWithStepOne) {
  const auto c = testing::corpus_of({"a b c"});
  const auto counts = window_counts(c, all_ids(c), 2);
  EXPECT_EQ(counts.total_windows, 2u);
  EXPECT_EQ(counts.count(id(c, "a"), id(c, "c")), 0u);
  EXPECT_EQ(counts.count(id(c, "b")), 2u);
  EXPECT_EQ(counts.count(id(c, "a"), id(c, "b")), 1u);
}

TEST(WindowCounts, MatchesBruteForceEnumerator) {
  const auto c = testing::corpus_of(kFiveDocs);
  const auto docs = split_docs(kFiveDocs);
  for (std::size_t width : {1u, 2u, 3u, 4u, 7u}) {
    const auto counts = window_counts(c, all_ids(c), width, 2);
    const auto ws = oracle::windows(docs, width);
    ASSERT_EQ(counts.total_windows, ws.size());
    for (const auto& a : c.vocabulary.words()) {
      for (const auto& b : c.vocabulary.words()) {
        ASSERT_EQ(counts.count(id(c, a), id(c, b)), oracle::count_windows(ws, a, b)) << a << "," << b << " w=" << width;
      }
    }
  }
}

TEST(WindowCounts, RandomCorporaMatchBruteForce) {
  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::string> texts;
    const auto n_docs = 1 + rng.below(6);
    std::size_t total = 0;
    for (std::uint64_t d = 0; d < n_docs; ++d) {
      std::string t;
      const auto len = 1 + rng.below(25);
      total += len;
      for (std::uint64_t i = 0; i < len; ++i) t += "w" + std::to_string(rng.below(8)) + " ";
      texts.push_back(t);
    }
    ASSERT_LE(total, 1000u);
    const auto c = testing::corpus_of(texts);
    const std::size_t width = 1 + static_cast<std::size_t>(trial % 6);
    const auto counts = window_counts(c, all_ids(c), width);
    const auto ws = oracle::windows(split_docs(texts), width);
    ASSERT_EQ(counts.total_windows, ws.size());
    for (const auto& a : c.vocabulary.words()) {
      for (const auto& b : c.vocabulary.words()) {
        ASSERT_EQ(counts.count(id(c, a), id(c, b)), oracle::count_windows(ws, a, b));
      }
    }
  }
}

TEST(WindowCounts, RejectsEmptyWordSet) {
  const auto c = testing::corpus_of({"a b"});
  EXPECT_THROW(window_counts(c, {}, 3), InvalidArgument);
}

TEST(Npmi, SelfPairIsOne) {
  for (double p : {0.01, 0.3, 0.9}) EXPECT_NEAR(npmi(p, p, p, 1e-12), 1.0, 1e-9);
}

TEST(Npmi, IndependenceAndExclusion) {
  EXPECT_NEAR(npmi(0.06, 0.2, 0.3, 0.0), 0.0, 1e-12);
  EXPECT_NEAR(npmi(0.0, 0.2, 0.3, 1e-12), -1.0 + std::log(1.0 / 0.06) / -std::log(1e-12), 1e-12);
  EXPECT_DOUBLE_EQ(npmi(1.0, 1.0, 1.0, 1e-12), 1.0);
}

TEST(Npmi, BoundedAndSymmetricOnRandomCorpora) {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> texts;
    for (int d = 0; d < 6; ++d) {
      std::string t;
      for (std::uint64_t i = 0, n = 2 + rng.below(12); i < n; ++i) t += "w" + std::to_string(rng.below(10)) + " ";
      texts.push_back(t);
    }
    const auto c = testing::corpus_of(texts);
    const auto counts = window_counts(c, all_ids(c), 1 + rng.below(5));
    const double total = static_cast<double>(counts.total_windows);
    for (WordId a = 0; a < c.vocabulary.size(); ++a) {
      for (WordId b = 0; b < c.vocabulary.size(); ++b) {
        if (counts.count(a, b) == 0) continue;
        const double pa = counts.count(a) / total, pb = counts.count(b) / total, pab = counts.count(a, b) / total;
        const double x = npmi(pab, pa, pb, 1e-12);
        ASSERT_GE(x, -1.0);
        ASSERT_LE(x, 1.0);
        ASSERT_EQ(x, npmi(pab, pb, pa, 1e-12));
      }
    }
  }
}

TEST(CvScore, MatchesOracleOnHandWrittenDocs) {
  const auto c = testing::corpus_of(kFiveDocs);
  const auto docs = split_docs(kFiveDocs);
  const std::vector<std::vector<std::string>> topics = {
      {"paz", "acuerdo", "gobierno", "farc"}, {"gol", "partido", "estadio"}, {"voto", "hinchas", "paz", "gol"}};
  for (std::size_t width : {2u, 3u, 5u, 110u}) {
    std::vector<std::vector<WordId>> ids;
    for (const auto& t : topics) {
      ids.emplace_back();
      for (const auto& w : t) ids.back().push_back(id(c, w));
    }
    CoherenceConfig cfg;
    cfg.window = width;
    const auto res = cv_score(ids, c, cfg);
    double mean = 0;
    for (std::size_t t = 0; t < topics.size(); ++t) {
      const double expect = oracle::topic_cv(docs, topics[t], width);
      EXPECT_NEAR(res.per_topic[t], expect, 1e-9) << "topic " << t << " window " << width;
      mean += expect / 3.0;
    }
    EXPECT_NEAR(res.mean, mean, 1e-9);
  }
}

TEST(CvScore, CoOccurringTopicBeatsDisjointTopic) {
  // x,y always together; u,v never share a window
  const auto c = testing::corpus_of({"x y", "x y", "u", "v"});
  const std::vector<std::vector<WordId>> topics = {{id(c, "x"), id(c, "y")}, {id(c, "u"), id(c, "v")}};
  const auto res = cv_score(topics, c, CoherenceConfig{});
  // Topic 1: P(x) = P(y) = P(x,y) = 1/2, NPMI = 1, both context vectors (1, 1): C_V = 1.
  // Topic 2: P(u) = P(v) = 1/4, P(u,v) = 0, NPMI = -1 + d with d = log(16) / -log(eps).
  // Vectors (1, -1+d) and (-1+d, 1) sum to (d, d), so each cosine is
  // d / (sqrt(2) * sqrt(1 + (1-d)^2)).
  const double d = std::log(16.0) / -std::log(1e-12);
  EXPECT_NEAR(res.per_topic[0], 1.0, 1e-12);
  EXPECT_NEAR(res.per_topic[1], d / (std::sqrt(2.0) * std::sqrt(1.0 + (1.0 - d) * (1.0 - d))), 1e-9);
  EXPECT_GT(res.per_topic[0], res.per_topic[1]);
}

TEST(CvScore, PermutationAndDuplicationInvariant) {
  auto texts = kFiveDocs;
  const auto c = testing::corpus_of(texts);
  std::vector<std::vector<WordId>> topics = {{id(c, "paz"), id(c, "voto"), id(c, "gol")},
                                             {id(c, "estadio"), id(c, "hinchas"), id(c, "farc"), id(c, "firma")}};
  CoherenceConfig cfg;
  cfg.window = 3;
  const auto base = cv_score(topics, c, cfg);

  std::reverse(texts.begin(), texts.end());
  const auto c2 = testing::corpus_of(texts);  // same bytewise vocabulary
  const auto rev = cv_score(topics, c2, cfg);
  texts.insert(texts.end(), texts.begin(), texts.end());
  const auto dup = cv_score(topics, testing::corpus_of(texts), cfg);
  std::reverse(topics[1].begin(), topics[1].end());
  std::swap(topics[0][0], topics[0][2]);
  const auto reordered = cv_score(topics, c, cfg);
  for (std::size_t t = 0; t < 2; ++t) {
    EXPECT_NEAR(rev.per_topic[t], base.per_topic[t], 1e-9);
    EXPECT_NEAR(dup.per_topic[t], base.per_topic[t], 1e-9);
    EXPECT_NEAR(reordered.per_topic[t], base.per_topic[t], 1e-12);
    EXPECT_GE(base.per_topic[t], -1.0);
    EXPECT_LE(base.per_topic[t], 1.0);
  }
}

TEST(CvScore, UnseenWordTakesEpsilonPathAndIsReported) {
  auto texts = kFiveDocs;
  texts.push_back("raro");
  auto c = testing::corpus_of(texts);
  c.docs.pop_back();  // "raro" is in the vocabulary but in no window
  const std::vector<std::vector<WordId>> topics = {{id(c, "paz"), id(c, "raro")}};
  const auto res = cv_score(topics, c, CoherenceConfig{});
  EXPECT_EQ(res.unseen_words, (std::vector<WordId>{id(c, "raro")}));
  EXPECT_TRUE(std::isfinite(res.mean));
}

TEST(CvScore, RejectsSingleWordTopics) {
  const auto c = testing::corpus_of(kFiveDocs);
  EXPECT_THROW(cv_score(std::vector<std::vector<WordId>>{{id(c, "paz")}}, c, CoherenceConfig{}), InvalidArgument);
}

TokenizedCorpus planted_like() {
  std::vector<std::string> texts;
  Rng rng(8);
  for (int d = 0; d < 60; ++d) {
    const int t = d % 3;
    std::string s;
    for (int i = 0; i < 15; ++i) s += "t" + std::to_string(t) + "w" + std::to_string(rng.below(8)) + " ";
    texts.push_back(s);
  }
  return testing::corpus_of(texts);
}

TEST(Sweep, SingleRunHasZeroStdAndCsvRoundTrips) {
  testing::TempDir dir;
  const auto c = planted_like();
  LdaConfig lda;
  lda.passes = 5;
  CoherenceConfig cfg;
  cfg.top_n = 5;
  const auto rep = sweep(c, {4, 2, 3}, 1, lda, cfg);
  ASSERT_EQ(rep.entries.size(), 3u);
  EXPECT_EQ(rep.entries[0].k, 2);
  for (const auto& e : rep.entries) EXPECT_EQ(e.std, 0.0);
  write_sweep_csv(rep, dir.file("s.csv"));
  EXPECT_EQ(read_selected_k(dir.file("s.csv")), rep.selected_k);
  EXPECT_EQ(testing::slurp(dir.file("s.csv")).substr(0, 25), "K,mean_cv,std_cv,selected");
}

TEST(Sweep, SelectsArgmaxAndStdNonNegative) {
  const auto c = planted_like();
  LdaConfig lda;
  lda.passes = 5;
  CoherenceConfig cfg;
  cfg.top_n = 5;
  cfg.threads = 2;
  const auto rep = sweep(c, {2, 3, 4, 5}, 3, lda, cfg);
  double best = -2;
  int best_k = 0;
  for (const auto& e : rep.entries) {
    EXPECT_GE(e.std, 0.0);
    EXPECT_EQ(e.scores.size(), 3u);
    if (e.mean > best) best = e.mean, best_k = e.k;
  }
  EXPECT_EQ(rep.selected_k, best_k);
}

TEST(Sweep, FailingCandidatesAreExcluded) {
  const auto c = planted_like();
  LdaConfig lda;
  lda.passes = 2;
  lda.kappa = 2.0;  // invalid: every run fails
  CoherenceConfig cfg;
  cfg.top_n = 3;
  EXPECT_THROW(sweep(c, {2, 3}, 2, lda, cfg), DataError);
  lda.kappa = 0.7;
  const auto rep = sweep(c, {0, 3}, 1, lda, cfg);
  EXPECT_EQ(rep.excluded, std::vector<int>{0});
  EXPECT_EQ(rep.selected_k, 3);
}

}  // namespace
}  // namespace topicflow
