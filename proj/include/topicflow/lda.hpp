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

// Latent Dirichlet allocation trained by online (stochastic) variational
// Bayes. Each document gets a K-component topic distribution; each topic a
// Dirichlet over the vocabulary parameterized by a row of lambda.

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "topicflow/common.hpp"
#include "topicflow/corpus.hpp"

namespace topicflow {

struct LdaConfig {
  int k = 12;
  std::optional<double> alpha;  // default 1/K
  std::optional<double> eta;    // default 1/K
  double tau0 = 1.0;
  double kappa = 0.7;
  std::size_t batch_size = 256;
  int passes = 10;
  std::uint64_t seed = 42;
  unsigned threads = 1;
  int max_estep_iter = 100;
  double estep_tol = 1e-3;
  bool track_elbo = false;

  double alpha_value() const { return alpha.value_or(1.0 / k); }
  double eta_value() const { return eta.value_or(1.0 / k); }

  void validate() const {
    require(k >= 1, "LDA: K must be >= 1");
    require(alpha_value() > 0, "LDA: alpha must be > 0");
    require(eta_value() > 0, "LDA: eta must be > 0");
    require(tau0 >= 0, "LDA: tau0 must be >= 0");
    require(kappa > 0.5 && kappa <= 1.0, "LDA: kappa must lie in (0.5, 1]");
    require(batch_size >= 1, "LDA: batch_size must be >= 1");
    require(passes >= 1, "LDA: passes must be >= 1");
    require(max_estep_iter >= 1, "LDA: max_estep_iter must be >= 1");
  }
};

struct DocTopics {
  std::vector<double> probs;
  bool flagged = false;  // no known token; probs is the uniform prior

  std::size_t argmax() const {
    return static_cast<std::size_t>(std::max_element(probs.begin(), probs.end()) - probs.begin());
  }
};

struct LdaModel {
  LdaConfig config;
  Matrix<double> lambda;  // K x V, strictly positive
  std::uint64_t updates = 0;
  std::uint64_t vocab_hash = 0;
  std::vector<std::string> words;

  std::size_t num_topics() const { return lambda.rows(); }
  std::size_t vocab_size() const { return lambda.cols(); }
};

struct LdaFit {
  LdaModel model;
  std::vector<DocTopics> doc_topics;  // training-time gamma, normalized, corpus order
  std::vector<double> elbo;           // one value per M-step when tracked
  std::vector<std::string> warnings;
};

namespace lda_detail {

inline double digamma(double x) {
  double result = 0.0;
  while (x < 10.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  result += std::log(x) - 0.5 * inv -
            inv2 * (1.0 / 12 - inv2 * (1.0 / 120 - inv2 * (1.0 / 252 - inv2 * (1.0 / 240 - inv2 / 132))));
  return result;
}

// E[log x] under Dirichlet(params), written into out.
inline void dirichlet_expectation(std::span<const double> params, std::span<double> out) {
  const double total = digamma(std::accumulate(params.begin(), params.end(), 0.0));
  for (std::size_t i = 0; i < params.size(); ++i) out[i] = digamma(params[i]) - total;
}

struct BagOfWords {
  std::vector<WordId> ids;
  std::vector<double> counts;
  double total = 0.0;
};

inline BagOfWords to_bag(std::span<const WordId> tokens, std::size_t vocab_size) {
  std::map<WordId, double> counts;
  for (WordId t : tokens) {
    if (t < vocab_size) counts[t] += 1.0;
  }
  BagOfWords bag;
  for (const auto& [id, c] : counts) {
    bag.ids.push_back(id);
    bag.counts.push_back(c);
    bag.total += c;
  }
  return bag;
}

// Per-topic exp(E[log beta]) and E[log beta] for the current lambda.
struct TopicExpectations {
  Matrix<double> elog;
  Matrix<double> exp_elog;

  explicit TopicExpectations(const Matrix<double>& lambda)
      : elog(lambda.rows(), lambda.cols()), exp_elog(lambda.rows(), lambda.cols()) {
    for (std::size_t k = 0; k < lambda.rows(); ++k) {
      dirichlet_expectation(lambda.row(k), elog.row(k));
      for (std::size_t v = 0; v < lambda.cols(); ++v) exp_elog(k, v) = std::exp(elog(k, v));
    }
  }
};

// Coordinate ascent on (phi, gamma) for one document with topics frozen.
// gamma is updated in place (warm start). When sstats is given, the
// document's expected counts n_dv * phi_dvk are added to it.
inline void e_step(const BagOfWords& bag, const TopicExpectations& topics, double alpha,
                   int max_iter, double tol, std::vector<double>& gamma,
                   Matrix<double>* sstats) {
  const std::size_t k_count = gamma.size();
  const std::size_t n = bag.ids.size();
  std::vector<double> elog_theta(k_count), exp_theta(k_count), phinorm(n), next(k_count);

  auto refresh = [&] {
    dirichlet_expectation(gamma, elog_theta);
    for (std::size_t k = 0; k < k_count; ++k) exp_theta[k] = std::exp(elog_theta[k]);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < k_count; ++k) s += exp_theta[k] * topics.exp_elog(k, bag.ids[i]);
      phinorm[i] = s + 1e-100;
    }
  };

  refresh();
  for (int it = 0; it < max_iter; ++it) {
    double change = 0.0;
    for (std::size_t k = 0; k < k_count; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        s += bag.counts[i] * topics.exp_elog(k, bag.ids[i]) / phinorm[i];
      }
      next[k] = alpha + exp_theta[k] * s;
      change += std::abs(next[k] - gamma[k]);
    }
    gamma.swap(next);
    refresh();
    if (change / static_cast<double>(k_count) < tol) break;
  }

  if (sstats != nullptr) {
    for (std::size_t k = 0; k < k_count; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        const WordId v = bag.ids[i];
        (*sstats)(k, v) += exp_theta[k] * bag.counts[i] * topics.exp_elog(k, v) / phinorm[i];
      }
    }
  }
}

inline DocTopics normalize(const std::vector<double>& gamma) {
  DocTopics out;
  const double total = std::accumulate(gamma.begin(), gamma.end(), 0.0);
  out.probs.resize(gamma.size());
  for (std::size_t k = 0; k < gamma.size(); ++k) out.probs[k] = gamma[k] / total;
  return out;
}

inline double log_sum_exp(std::span<const double> v) {
  const double m = *std::max_element(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace lda_detail

// Variational lower bound on log p(corpus) with phi at its optimum for the
// given gamma and lambda.
inline double lda_elbo(const std::vector<lda_detail::BagOfWords>& bags,
                       const std::vector<std::vector<double>>& gammas, const Matrix<double>& lambda,
                       double alpha, double eta) {
  using namespace lda_detail;
  const std::size_t k_count = lambda.rows();
  const std::size_t v_count = lambda.cols();
  const TopicExpectations topics(lambda);
  double score = 0.0;
  std::vector<double> elog_theta(k_count), terms(k_count);
  for (std::size_t d = 0; d < bags.size(); ++d) {
    const auto& gamma = gammas[d];
    dirichlet_expectation(gamma, elog_theta);
    for (std::size_t i = 0; i < bags[d].ids.size(); ++i) {
      for (std::size_t k = 0; k < k_count; ++k) terms[k] = elog_theta[k] + topics.elog(k, bags[d].ids[i]);
      score += bags[d].counts[i] * log_sum_exp(terms);
    }
    double gsum = 0.0;
    for (std::size_t k = 0; k < k_count; ++k) {
      score += (alpha - gamma[k]) * elog_theta[k] + std::lgamma(gamma[k]) - std::lgamma(alpha);
      gsum += gamma[k];
    }
    score += std::lgamma(alpha * static_cast<double>(k_count)) - std::lgamma(gsum);
  }
  for (std::size_t k = 0; k < k_count; ++k) {
    double lsum = 0.0;
    for (std::size_t v = 0; v < v_count; ++v) {
      score += (eta - lambda(k, v)) * topics.elog(k, v) + std::lgamma(lambda(k, v)) - std::lgamma(eta);
      lsum += lambda(k, v);
    }
    score += std::lgamma(eta * static_cast<double>(v_count)) - std::lgamma(lsum);
  }
  return score;
}

// Online VB. Documents are shuffled once per pass with the seeded RNG and
// consumed in mini-batches; a batch covering the whole corpus runs plain
// batch VB (rho = 1). Per-document gamma is carried across passes.
inline LdaFit fit_lda(const TokenizedCorpus& corpus, const LdaConfig& cfg) {
  using namespace lda_detail;
  cfg.validate();
  if (corpus.empty()) throw DataError("LDA: empty corpus");
  const std::size_t k_count = static_cast<std::size_t>(cfg.k);
  const std::size_t v_count = corpus.vocabulary.size();
  const std::size_t d_count = corpus.size();
  const double alpha = cfg.alpha_value();
  const double eta = cfg.eta_value();

  LdaFit out;
  if (v_count < k_count) {
    out.warnings.push_back("vocabulary size " + std::to_string(v_count) + " < K = " +
                           std::to_string(k_count));
  }

  Rng rng(cfg.seed);
  LdaModel& model = out.model;
  model.config = cfg;
  model.vocab_hash = corpus.vocabulary.hash();
  model.words = corpus.vocabulary.words();
  model.lambda = Matrix<double>(k_count, v_count);
  for (auto& x : model.lambda.data()) x = rng.gamma(100.0, 0.01);

  std::vector<BagOfWords> bags;
  bags.reserve(d_count);
  for (const auto& doc : corpus.docs) bags.push_back(to_bag(doc.tokens, v_count));
  std::vector<std::vector<double>> gammas(d_count);
  for (std::size_t d = 0; d < d_count; ++d) {
    gammas[d].assign(k_count, alpha + bags[d].total / static_cast<double>(k_count));
  }

  const bool full_batch = cfg.batch_size >= d_count;
  const unsigned workers = std::max(1u, cfg.threads);
  std::vector<std::size_t> order(d_count);
  std::size_t batch_index = 0;
  for (int pass = 0; pass < cfg.passes; ++pass) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    for (std::size_t start = 0; start < d_count; start += cfg.batch_size, ++batch_index) {
      const std::size_t stop = std::min(d_count, start + cfg.batch_size);
      const TopicExpectations topics(model.lambda);
      std::vector<Matrix<double>> partial(workers, Matrix<double>(k_count, v_count));
      parallel_for(stop - start, workers, [&](std::size_t b, std::size_t e, unsigned w) {
        for (std::size_t i = b; i < e; ++i) {
          const std::size_t d = order[start + i];
          e_step(bags[d], topics, alpha, cfg.max_estep_iter, cfg.estep_tol, gammas[d], &partial[w]);
        }
      });
      Matrix<double>& sstats = partial[0];
      for (unsigned w = 1; w < workers; ++w) {
        for (std::size_t i = 0; i < sstats.data().size(); ++i) sstats.data()[i] += partial[w].data()[i];
      }

      const double rho =
          full_batch ? 1.0 : std::pow(cfg.tau0 + static_cast<double>(model.updates), -cfg.kappa);
      const double scale = static_cast<double>(d_count) / static_cast<double>(stop - start);
      auto& lam = model.lambda.data();
      for (std::size_t i = 0; i < lam.size(); ++i) {
        lam[i] = (1.0 - rho) * lam[i] + rho * (eta + scale * sstats.data()[i]);
        if (!std::isfinite(lam[i]) || lam[i] <= 0.0) {
          throw NumericalError("LDA: non-finite or non-positive lambda after batch " +
                               std::to_string(batch_index));
        }
      }
      ++model.updates;
      if (cfg.track_elbo) out.elbo.push_back(lda_elbo(bags, gammas, model.lambda, alpha, eta));
    }
  }

  out.doc_topics.reserve(d_count);
  for (const auto& g : gammas) out.doc_topics.push_back(normalize(g));
  return out;
}

// Topic distribution of one document with lambda frozen. Token ids outside
// the model vocabulary are ignored.
inline DocTopics infer(const LdaModel& model, std::span<const WordId> tokens) {
  using namespace lda_detail;
  const std::size_t k_count = model.num_topics();
  const auto bag = to_bag(tokens, model.vocab_size());
  if (bag.ids.empty()) {
    DocTopics out;
    out.probs.assign(k_count, 1.0 / static_cast<double>(k_count));
    out.flagged = true;
    return out;
  }
  const TopicExpectations topics(model.lambda);
  const double alpha = model.config.alpha_value();
  std::vector<double> gamma(k_count, alpha + bag.total / static_cast<double>(k_count));
  e_step(bag, topics, alpha, model.config.max_estep_iter, model.config.estep_tol, gamma, nullptr);
  return normalize(gamma);
}

inline std::vector<DocTopics> infer_all(const LdaModel& model, const TokenizedCorpus& corpus,
                                        unsigned threads = 1) {
  using namespace lda_detail;
  std::vector<DocTopics> out(corpus.size());
  const TopicExpectations topics(model.lambda);
  const double alpha = model.config.alpha_value();
  const std::size_t k_count = model.num_topics();
  parallel_for(corpus.size(), threads, [&](std::size_t b, std::size_t e, unsigned) {
    for (std::size_t d = b; d < e; ++d) {
      const auto bag = to_bag(corpus.docs[d].tokens, model.vocab_size());
      if (bag.ids.empty()) {
        out[d].probs.assign(k_count, 1.0 / static_cast<double>(k_count));
        out[d].flagged = true;
        continue;
      }
      std::vector<double> gamma(k_count, alpha + bag.total / static_cast<double>(k_count));
      e_step(bag, topics, alpha, model.config.max_estep_iter, model.config.estep_tol, gamma, nullptr);
      out[d] = normalize(gamma);
    }
  });
  return out;
}

// Highest-weight words of a topic; weight is the expected topic-word
// probability lambda_kv / sum_v lambda_kv. Ties go to the lower word id.
inline std::vector<std::pair<std::string, double>> top_words(const LdaModel& model,
                                                             std::size_t topic, std::size_t n) {
  if (topic >= model.num_topics()) {
    throw InvalidArgument("top_words: topic " + std::to_string(topic) + " out of range");
  }
  if (n < 1 || n > model.vocab_size()) {
    throw InvalidArgument("top_words: n must be in [1, V]");
  }
  const auto row = model.lambda.row(topic);
  std::vector<WordId> ids(row.size());
  std::iota(ids.begin(), ids.end(), WordId{0});
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n), ids.end(),
                    [&](WordId a, WordId b) { return row[a] != row[b] ? row[a] > row[b] : a < b; });
  const double total = std::accumulate(row.begin(), row.end(), 0.0);
  std::vector<std::pair<std::string, double>> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const WordId id = ids[i];
    out.emplace_back(id < model.words.size() ? model.words[id] : std::to_string(id), row[id] / total);
  }
  return out;
}

inline std::vector<WordId> top_word_ids(const LdaModel& model, std::size_t topic, std::size_t n) {
  const auto row = model.lambda.row(topic);
  std::vector<WordId> ids(row.size());
  std::iota(ids.begin(), ids.end(), WordId{0});
  n = std::min(n, ids.size());
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n), ids.end(),
                    [&](WordId a, WordId b) { return row[a] != row[b] ? row[a] > row[b] : a < b; });
  ids.resize(n);
  return ids;
}

struct TopicRepresentatives {
  std::map<std::size_t, std::vector<std::size_t>> by_topic;  // topic -> document indices
  std::vector<std::size_t> ties;  // documents whose maximum was shared by several topics
};

// A document represents its argmax topic when that probability is >= threshold.
inline TopicRepresentatives lda_representatives(std::span<const DocTopics> docs, double threshold) {
  require(threshold > 0.0 && threshold <= 1.0, "representatives: threshold must be in (0, 1]");
  TopicRepresentatives out;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    const auto& p = docs[d].probs;
    if (p.empty()) continue;
    const std::size_t best = docs[d].argmax();
    if (p[best] < threshold) continue;
    out.by_topic[best].push_back(d);
    if (std::count(p.begin(), p.end(), p[best]) > 1) out.ties.push_back(d);
  }
  return out;
}

inline constexpr std::string_view kLdaMagic = "TFLDA1";

inline void save_lda(const LdaModel& model, const std::string& path) {
  BinaryWriter w(path);
  w.magic(kLdaMagic);
  const auto& c = model.config;
  w.put<std::uint32_t>(static_cast<std::uint32_t>(c.k));
  w.put<double>(c.alpha_value());
  w.put<double>(c.eta_value());
  w.put<double>(c.tau0);
  w.put<double>(c.kappa);
  w.put<std::uint64_t>(c.batch_size);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(c.passes));
  w.put<std::uint64_t>(c.seed);
  w.put<std::uint64_t>(model.updates);
  w.put<std::uint64_t>(model.vocab_hash);
  w.put<std::uint64_t>(model.lambda.rows());
  w.put<std::uint64_t>(model.lambda.cols());
  w.put_array<double>(model.lambda.data());
  w.close();
}

// The vocabulary must be the one the model was trained on (checked by hash).
inline LdaModel load_lda(const std::string& path, const Vocabulary& vocab) {
  BinaryReader r(path);
  r.expect_magic(kLdaMagic);
  LdaModel model;
  auto& c = model.config;
  c.k = static_cast<int>(r.get<std::uint32_t>());
  c.alpha = r.get<double>();
  c.eta = r.get<double>();
  c.tau0 = r.get<double>();
  c.kappa = r.get<double>();
  c.batch_size = r.get<std::uint64_t>();
  c.passes = static_cast<int>(r.get<std::uint32_t>());
  c.seed = r.get<std::uint64_t>();
  model.updates = r.get<std::uint64_t>();
  model.vocab_hash = r.get<std::uint64_t>();
  const auto rows = r.get<std::uint64_t>();
  const auto cols = r.get<std::uint64_t>();
  auto data = r.get_array<double>();
  if (data.size() != rows * cols || rows != static_cast<std::uint64_t>(c.k)) {
    throw DataError(path + ": lambda dimensions do not match header");
  }
  if (model.vocab_hash != vocab.hash() || cols != vocab.size()) {
    throw DataError(path + ": model was trained on a different vocabulary");
  }
  model.lambda = Matrix<double>(rows, cols);
  model.lambda.data() = std::move(data);
  model.words = vocab.words();
  return model;
}

}  // namespace topicflow
