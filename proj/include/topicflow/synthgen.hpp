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

// Planted-topic corpora with known ground truth. The distributions are test
// fixtures (uniform word choice, uniform length, Poisson engagement), not a
// model of real social media text.

#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "topicflow/common.hpp"
#include "topicflow/corpus.hpp"

namespace topicflow {

struct EngagementMeans {
  double likes = 20.0;
  double retweets = 5.0;
  double replies = 3.0;
};

struct PlantedSpec {
  int topics = 5;
  int vocab_per_topic = 50;
  int noise_vocab = 500;
  double noise_fraction = 0.1;  // chance that a news token comes from the noise vocabulary
  int docs_per_topic = 400;
  int min_length = 15;
  int max_length = 30;
  int replies_per_news = 2;
  double reply_correlation = 0.8;  // chance that a reply token comes from the parent topic
  std::vector<EngagementMeans> engagement;  // one per topic; empty means defaults everywhere
  std::uint64_t seed = 42;

  void validate() const {
    require(topics >= 1 && vocab_per_topic >= 1 && docs_per_topic >= 1, "synth: counts must be >= 1");
    require(noise_vocab >= 0, "synth: noise_vocab must be >= 0");
    require(min_length >= 1 && max_length >= min_length, "synth: need 1 <= min_length <= max_length");
    require(replies_per_news >= 0, "synth: replies_per_news must be >= 0");
    require(reply_correlation >= 0.0 && reply_correlation <= 1.0, "synth: reply_correlation must be in [0, 1]");
    require(noise_fraction >= 0.0 && noise_fraction <= 1.0, "synth: noise_fraction must be in [0, 1]");
    require(noise_vocab > 0 || noise_fraction == 0.0, "synth: noise_fraction > 0 needs a noise vocabulary");
    require(engagement.empty() || engagement.size() == static_cast<std::size_t>(topics),
            "synth: one engagement entry per topic");
    for (const auto& e : engagement) {
      require(e.likes >= 0 && e.retweets >= 0 && e.replies >= 0, "synth: engagement means must be >= 0");
    }
  }
};

struct PlantedCorpus {
  std::vector<PostRecord> records;           // news first, then replies
  std::map<std::string, int> topic_of_news;  // ground truth
  std::map<std::string, int> topic_of_reply;  // parent's topic
  std::vector<std::vector<std::string>> topic_vocab;
  std::vector<std::string> noise_vocab;
};

namespace synth_detail {

// Lowercase letters only, so words survive preprocessing unchanged.
inline std::string letters(int n, int width) {
  std::string s(static_cast<std::size_t>(width), 'a');
  for (int i = width - 1; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = static_cast<char>('a' + n % 26);
    n /= 26;
  }
  return s;
}

inline std::string timestamp(std::int64_t minutes) {
  using namespace std::chrono;
  const sys_days base = year{2016} / September / 1;
  const sys_days day = base + days{minutes / 1440};
  const year_month_day ymd{day};
  const auto rem = minutes % 1440;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:00Z", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long long>(rem / 60), static_cast<long long>(rem % 60));
  return buf;
}

}  // namespace synth_detail

inline PlantedCorpus generate(const PlantedSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  PlantedCorpus out;
  const int width = 3;
  for (int t = 0; t < spec.topics; ++t) {
    auto& v = out.topic_vocab.emplace_back();
    for (int j = 0; j < spec.vocab_per_topic; ++j) {
      v.push_back("t" + synth_detail::letters(t, 2) + "w" + synth_detail::letters(j, width));
    }
  }
  for (int j = 0; j < spec.noise_vocab; ++j) out.noise_vocab.push_back("nz" + synth_detail::letters(j, width));

  // topic-independent pool for uncorrelated reply tokens
  std::vector<const std::string*> pool;
  for (const auto& v : out.topic_vocab) {
    for (const auto& w : v) pool.push_back(&w);
  }
  for (const auto& w : out.noise_vocab) pool.push_back(&w);

  auto sample_length = [&] {
    return spec.min_length + static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.max_length - spec.min_length + 1)));
  };
  auto pick = [&](const std::vector<std::string>& v) -> const std::string& { return v[rng.below(v.size())]; };

  std::vector<int> order;
  for (int t = 0; t < spec.topics; ++t) {
    for (int d = 0; d < spec.docs_per_topic; ++d) order.push_back(t);
  }
  rng.shuffle(order);

  std::vector<PostRecord> replies;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const int t = order[i];
    PostRecord news;
    char id[32];
    std::snprintf(id, sizeof id, "n%06zu", i);
    news.id = id;
    news.kind = PostKind::News;
    news.created_at = synth_detail::timestamp(static_cast<std::int64_t>(i) * 7);
    const int len = sample_length();
    for (int w = 0; w < len; ++w) {
      const bool noise = spec.noise_fraction > 0.0 && rng.uniform() < spec.noise_fraction;
      if (w) news.text += ' ';
      news.text += noise ? pick(out.noise_vocab) : pick(out.topic_vocab[static_cast<std::size_t>(t)]);
    }
    const EngagementMeans means = spec.engagement.empty() ? EngagementMeans{} : spec.engagement[static_cast<std::size_t>(t)];
    news.likes = rng.poisson(means.likes);
    news.retweets = rng.poisson(means.retweets);
    news.reply_count = rng.poisson(means.replies);
    out.topic_of_news[news.id] = t;

    for (int r = 0; r < spec.replies_per_news; ++r) {
      PostRecord reply;
      reply.id = news.id + "-r" + std::to_string(r);
      reply.kind = PostKind::Reply;
      reply.parent_id = news.id;
      reply.created_at = synth_detail::timestamp(static_cast<std::int64_t>(i) * 7 + r + 1);
      const int rlen = sample_length();
      for (int w = 0; w < rlen; ++w) {
        if (w) reply.text += ' ';
        if (rng.uniform() < spec.reply_correlation) {
          reply.text += pick(out.topic_vocab[static_cast<std::size_t>(t)]);
        } else {
          reply.text += *pool[rng.below(pool.size())];
        }
      }
      reply.likes = rng.poisson(means.likes / 10.0);
      out.topic_of_reply[reply.id] = t;
      replies.push_back(std::move(reply));
    }
    out.records.push_back(std::move(news));
  }
  for (auto& r : replies) out.records.push_back(std::move(r));
  return out;
}

inline void write_truth_csv(const PlantedCorpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write: " + path);
  out << "doc_id,topic\n";
  for (const auto& [id, t] : corpus.topic_of_news) out << id << ',' << t << '\n';
}

}  // namespace topicflow
