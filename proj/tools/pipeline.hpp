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

// Pipeline stages. Each stage reads artifacts from the work directory,
// writes its own, and records a manifest (input hashes, config snapshot,
// seed, output hashes) under manifests/. A stage whose manifest still
// matches its inputs, config and outputs is skipped.
//
//   ingest -> sweep -> lda -------+
//   ingest -> embed -> cluster ---+-> project, label -> train-clf -> eval,
//                                     engagement; plot reads project, eval
//                                     and engagement outputs

#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "config.hpp"
#include "topicflow/topicflow.hpp"

namespace topicflow::cli {

namespace fs = std::filesystem;

// An upstream artifact is missing; `stage` is the stage that produces it.
class MissingArtifact : public std::runtime_error {
 public:
  MissingArtifact(const std::string& stage, const std::string& path)
      : std::runtime_error("missing artifact " + path + "; run stage `" + stage + "` first"), stage_(stage) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct Context {
  Config cfg;
  fs::path work;
  unsigned threads = 1;
  bool force = false;
};

inline void log(const std::string& stage, const std::string& msg) {
  std::cerr << "[" << stage << "] " << msg << '\n';
}

inline std::string source_of(const Context& ctx) {
  const auto s = ctx.cfg.str("eval", "source_model");
  if (s != "lda" && s != "embed") {
    throw ConfigError("config " + ctx.cfg.raw("eval", "source_model").origin +
                      ": eval.source_model must be lda or embed, got `" + s + "`");
  }
  return s;
}

// ---------------------------------------------------------------------------
// Typed configs
// ---------------------------------------------------------------------------

inline PreprocessConfig preprocess_config(const Context& ctx) {
  PreprocessConfig p;
  p.min_token_len = static_cast<int>(ctx.cfg.integer("preprocess", "min_token_len"));
  p.keep_emoji = ctx.cfg.boolean("preprocess", "keep_emoji");
  const auto lemmas = ctx.cfg.str("paths", "lemmas");
  if (!lemmas.empty()) p.lemma_table = load_lemma_table(lemmas);
  return p;
}

inline FieldSchema field_schema(const Context& ctx) {
  FieldSchema s;
  s.id = ctx.cfg.str("schema", "id");
  s.kind = ctx.cfg.str("schema", "kind");
  s.text = ctx.cfg.str("schema", "text");
  s.created_at = ctx.cfg.str("schema", "created_at");
  s.likes = ctx.cfg.str("schema", "likes");
  s.retweets = ctx.cfg.str("schema", "retweets");
  s.reply_count = ctx.cfg.str("schema", "reply_count");
  s.parent_id = ctx.cfg.str("schema", "parent_id");
  s.news_value = ctx.cfg.str("schema", "news_value");
  s.reply_value = ctx.cfg.str("schema", "reply_value");
  return s;
}

inline LdaConfig lda_config(const Context& ctx) {
  const auto& c = ctx.cfg;
  LdaConfig l;
  if (!c.is_auto("lda", "k")) l.k = static_cast<int>(c.integer("lda", "k"));
  if (!c.is_auto("lda", "alpha")) l.alpha = c.real("lda", "alpha");
  if (!c.is_auto("lda", "eta")) l.eta = c.real("lda", "eta");
  l.tau0 = c.real("lda", "tau0");
  l.kappa = c.real("lda", "kappa");
  l.batch_size = c.count("lda", "batch_size");
  l.passes = static_cast<int>(c.integer("lda", "passes"));
  l.seed = c.count("lda", "seed");
  l.threads = ctx.threads;
  return l;
}

inline CoherenceConfig coherence_config(const Context& ctx) {
  CoherenceConfig cc;
  cc.top_n = ctx.cfg.count("sweep", "top_n");
  cc.window = ctx.cfg.count("sweep", "window");
  cc.threads = ctx.threads;
  return cc;
}

inline EmbedConfig embed_config(const Context& ctx) {
  const auto& c = ctx.cfg;
  EmbedConfig e;
  e.dim = c.count("embed", "dim");
  e.window = c.count("embed", "window");
  e.negatives = c.count("embed", "neg");
  e.min_n = c.count("embed", "min_n");
  e.max_n = c.count("embed", "max_n");
  e.buckets = c.count("embed", "buckets");
  e.lr = c.real("embed", "lr");
  e.epochs = static_cast<int>(c.integer("embed", "epochs"));
  e.min_count = c.count("embed", "min_count");
  e.seed = c.count("embed", "seed");
  e.threads = ctx.threads;
  return e;
}

inline EmbedConfig classifier_config(const Context& ctx) {
  const auto& c = ctx.cfg;
  EmbedConfig e;
  e.dim = c.count("classifier", "dim");
  e.min_n = c.count("classifier", "min_n");
  e.max_n = c.count("classifier", "max_n");
  e.buckets = c.count("classifier", "buckets");
  e.lr = c.real("classifier", "lr");
  e.epochs = static_cast<int>(c.integer("classifier", "epochs"));
  e.seed = c.count("classifier", "seed");
  e.threads = 1;
  return e;
}

inline KMeansConfig kmeans_config(const Context& ctx) {
  const auto& c = ctx.cfg;
  KMeansConfig k;
  k.k = c.count("kmeans", "k");
  k.restarts = static_cast<int>(c.integer("kmeans", "restarts"));
  k.max_iter = static_cast<int>(c.integer("kmeans", "max_iter"));
  k.tol = c.real("kmeans", "tol");
  k.seed = c.count("kmeans", "seed");
  k.threads = ctx.threads;
  return k;
}

inline ProjectionConfig projection_config(const Context& ctx) {
  const auto& c = ctx.cfg;
  ProjectionConfig p;
  p.n_neighbors = c.count("projection", "neighbors");
  p.min_dist = c.real("projection", "min_dist");
  p.epochs = static_cast<int>(c.integer("projection", "epochs"));
  p.neg_rate = c.count("projection", "neg_rate");
  p.seed = c.count("projection", "seed");
  p.threads = ctx.threads;
  return p;
}

inline PlantedSpec planted_spec(const Config& c) {
  PlantedSpec s;
  s.topics = static_cast<int>(c.integer("synth", "topics"));
  s.vocab_per_topic = static_cast<int>(c.integer("synth", "vocab_per_topic"));
  s.noise_vocab = static_cast<int>(c.integer("synth", "noise_vocab"));
  s.noise_fraction = c.real("synth", "noise_fraction");
  s.docs_per_topic = static_cast<int>(c.integer("synth", "docs_per_topic"));
  s.min_length = static_cast<int>(c.integer("synth", "min_length"));
  s.max_length = static_cast<int>(c.integer("synth", "max_length"));
  s.replies_per_news = static_cast<int>(c.integer("synth", "replies_per_news"));
  s.reply_correlation = c.real("synth", "reply_correlation");
  s.seed = c.count("synth", "seed");
  const EngagementMeans base{c.real("synth", "likes"), c.real("synth", "retweets"), c.real("synth", "replies")};
  const auto high = c.integer("synth", "high_topic");
  const double factor = c.real("synth", "high_factor");
  if (high >= 0) {
    if (high >= s.topics) throw ConfigError("config: synth.high_topic must be below synth.topics");
    s.engagement.assign(static_cast<std::size_t>(s.topics), base);
    auto& e = s.engagement[static_cast<std::size_t>(high)];
    e = {base.likes * factor, base.retweets * factor, base.replies * factor};
  } else {
    s.engagement.assign(static_cast<std::size_t>(s.topics), base);
  }
  return s;
}

// Builds every typed config once so that bad values fail before any work.
inline void validate_all(const Context& ctx) {
  try {
    lda_config(ctx).validate();
    coherence_config(ctx).validate();
    embed_config(ctx).validate();
    classifier_config(ctx).validate();
    kmeans_config(ctx).validate();
    projection_config(ctx).validate();
    source_of(ctx);
    const double tf = ctx.cfg.real("eval", "test_fraction");
    if (!(tf > 0.0 && tf < 1.0)) throw InvalidArgument("eval.test_fraction must be in (0, 1)");
    if (ctx.cfg.integer("eval", "k_max") < 1) throw InvalidArgument("eval.k_max must be >= 1");
    ctx.cfg.boolean("eval", "same_preprocessing");
    const double th = ctx.cfg.real("lda", "threshold");
    if (!(th > 0.0 && th <= 1.0)) throw InvalidArgument("lda.threshold must be in (0, 1]");
    const double rp = ctx.cfg.real("kmeans", "rep_percentile");
    if (!(rp > 0.0 && rp <= 1.0)) throw InvalidArgument("kmeans.rep_percentile must be in (0, 1]");
    if (ctx.cfg.integer("sweep", "k_min") < 1 || ctx.cfg.integer("sweep", "k_max") < ctx.cfg.integer("sweep", "k_min") ||
        ctx.cfg.integer("sweep", "k_step") < 1 || ctx.cfg.integer("sweep", "runs") < 1) {
      throw InvalidArgument("sweep: need 1 <= k_min <= k_max, k_step >= 1, runs >= 1");
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Small CSV and binary helpers
// ---------------------------------------------------------------------------

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else if (c != '\r') {
      out.back() += c;
    }
  }
  return out;
}

// Rows after the header line.
inline std::vector<std::vector<std::string>> read_csv(const fs::path& path, std::size_t min_cols) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto row = csv_split(line);
    if (row.size() < min_cols) throw DataError(path.string() + ": short row `" + line + "`");
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write: " + path.string());
  return out;
}

inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Row-labelled matrix ("TFDV1"): document vectors or topic mixtures.
struct DocMatrix {
  std::vector<std::string> ids;
  Matrix<double> values;
};

inline constexpr std::string_view kDocMatrixMagic = "TFDV1";

inline void save_doc_matrix(const DocMatrix& m, const fs::path& path) {
  BinaryWriter w(path.string());
  w.magic(kDocMatrixMagic);
  w.put<std::uint64_t>(m.values.rows());
  w.put<std::uint64_t>(m.values.cols());
  for (const auto& id : m.ids) w.put_string(id);
  w.put_array<double>(m.values.data());
  w.close();
}

inline DocMatrix load_doc_matrix(const fs::path& path) {
  BinaryReader r(path.string());
  r.expect_magic(kDocMatrixMagic);
  DocMatrix m;
  const auto rows = r.get<std::uint64_t>();
  const auto cols = r.get<std::uint64_t>();
  for (std::uint64_t i = 0; i < rows; ++i) m.ids.push_back(r.get_string());
  auto data = r.get_array<double>();
  if (data.size() != rows * cols) throw DataError(path.string() + ": matrix size does not match header");
  m.values = Matrix<double>(rows, cols);
  m.values.data() = std::move(data);
  return m;
}

// topics-<source>.csv: doc_id,topic,representative
struct TopicMap {
  std::vector<std::string> ids;
  std::vector<int> topics;
  std::vector<bool> representative;

  std::map<std::string, int> as_map() const {
    std::map<std::string, int> m;
    for (std::size_t i = 0; i < ids.size(); ++i) m[ids[i]] = topics[i];
    return m;
  }
  int num_topics() const {
    int k = 0;
    for (int t : topics) k = std::max(k, t + 1);
    return k;
  }
};

inline void write_topic_map(const TopicMap& m, const fs::path& path) {
  auto out = open_out(path);
  out << "doc_id,topic,representative\n";
  for (std::size_t i = 0; i < m.ids.size(); ++i) {
    out << csv_field(m.ids[i]) << ',' << m.topics[i] << ',' << (m.representative[i] ? 1 : 0) << '\n';
  }
}

inline TopicMap read_topic_map(const fs::path& path) {
  TopicMap m;
  for (const auto& row : read_csv(path, 3)) {
    m.ids.push_back(row[0]);
    m.topics.push_back(std::stoi(row[1]));
    m.representative.push_back(row[2] == "1");
  }
  return m;
}

inline std::vector<LabeledComment> read_labeled(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  std::vector<LabeledComment> items;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    LabeledComment c;
    c.label = j.at("label").get<int>();
    c.reply_id = j.at("reply_id").get<std::string>();
    c.parent_id = j.at("parent_id").get<std::string>();
    c.tokens = j.at("tokens").get<std::vector<std::string>>();
    c.source = j.at("source").get<std::string>() == "lda" ? SourceModel::Lda : SourceModel::EmbedKMeans;
    items.push_back(std::move(c));
  }
  return items;
}

// ---------------------------------------------------------------------------
// Manifests
// ---------------------------------------------------------------------------

struct Input {
  fs::path path;
  std::string producer;  // stage that writes it, for error messages
};

struct StageSpec {
  std::string name;  // manifest name, e.g. "label-embed"
  std::vector<Input> inputs;
  nlohmann::json config;
  std::uint64_t seed = 42;
  std::vector<fs::path> outputs;
};

inline std::string display_path(const Context& ctx, const fs::path& p) {
  const auto rel = p.lexically_relative(ctx.work);
  if (!rel.empty() && *rel.begin() != "..") return rel.generic_string();
  return p.generic_string();
}

inline nlohmann::json hash_map(const Context& ctx, const std::vector<fs::path>& paths) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& p : paths) j[display_path(ctx, p)] = file_hash(p.string());
  return j;
}

inline fs::path manifest_path(const Context& ctx, const std::string& name) {
  return ctx.work / "manifests" / (name + ".json");
}

inline bool up_to_date(const Context& ctx, const StageSpec& spec, const nlohmann::json& inputs) {
  const auto path = manifest_path(ctx, spec.name);
  if (!fs::exists(path)) return false;
  nlohmann::json m;
  try {
    m = nlohmann::json::parse(read_file(path.string()));
  } catch (const std::exception&) {
    return false;
  }
  if (m.value("inputs", nlohmann::json()) != inputs || m.value("config", nlohmann::json()) != spec.config ||
      m.value("seed", std::uint64_t{0}) != spec.seed) {
    return false;
  }
  for (const auto& out : spec.outputs) {
    if (!fs::exists(out)) return false;
  }
  return m.value("outputs", nlohmann::json()) == hash_map(ctx, spec.outputs);
}

// Runs `body` unless the stage is up to date; always leaves a manifest.
template <typename Body>
void run_stage(const Context& ctx, const StageSpec& spec, Body&& body) {
  std::vector<fs::path> in_paths;
  for (const auto& in : spec.inputs) {
    if (!fs::exists(in.path)) throw MissingArtifact(in.producer, in.path.generic_string());
    in_paths.push_back(in.path);
  }
  const auto inputs = hash_map(ctx, in_paths);
  if (!ctx.force && up_to_date(ctx, spec, inputs)) {
    log(spec.name, "up to date, skipped");
    return;
  }
  body();
  nlohmann::json m;
  m["stage"] = spec.name;
  m["format"] = 1;
  m["inputs"] = inputs;
  m["config"] = spec.config;
  m["seed"] = spec.seed;
  m["outputs"] = hash_map(ctx, spec.outputs);
  fs::create_directories(ctx.work / "manifests");
  auto out = open_out(manifest_path(ctx, spec.name));
  out << m.dump(2) << '\n';
  log(spec.name, "done");
}

// ---------------------------------------------------------------------------
// Artifact names
// ---------------------------------------------------------------------------

struct Paths {
  fs::path work;
  fs::path posts() const { return work / "posts.jsonl"; }
  fs::path corpus() const { return work / "news.corpus"; }
  fs::path ingest_report() const { return work / "ingest-report.json"; }
  fs::path sweep_csv() const { return work / "sweep.csv"; }
  fs::path sweep_svg() const { return work / "sweep-coherence.svg"; }
  fs::path lda_model() const { return work / "lda.model"; }
  fs::path lda_mixtures() const { return work / "lda-doc-topics.bin"; }
  fs::path lda_doc_topics() const { return work / "lda-doc-topics.csv"; }
  fs::path lda_topics() const { return work / "lda-topics.csv"; }
  fs::path vectors_model() const { return work / "embed.vec"; }
  fs::path doc_vectors() const { return work / "doc-vectors.bin"; }
  fs::path kmeans_model() const { return work / "kmeans.model"; }
  fs::path assignments() const { return work / "kmeans-assignments.csv"; }
  fs::path topic_map(const std::string& src) const { return work / ("topics-" + src + ".csv"); }
  fs::path projection(const std::string& src) const { return work / ("projection-" + src + ".csv"); }
  fs::path labeled(const std::string& src) const { return work / ("labeled-" + src + ".jsonl"); }
  fs::path classifier(const std::string& src) const { return work / ("classifier-" + src + ".cls"); }
  fs::path pr_csv(const std::string& src) const { return work / ("pr_at_k-" + src + ".csv"); }
  fs::path engagement_csv(const std::string& src) const { return work / ("engagement-" + src + ".csv"); }
  fs::path map_svg(const std::string& src) const { return work / ("plot-topic-map-" + src + ".svg"); }
  fs::path pr_svg(const std::string& src) const { return work / ("plot-pr-at-k-" + src + ".svg"); }
  fs::path totals_svg(const std::string& src) const { return work / ("plot-engagement-totals-" + src + ".svg"); }
  fs::path means_svg(const std::string& src) const { return work / ("plot-engagement-means-" + src + ".svg"); }
};

inline std::string topic_map_producer(const std::string& src) { return src == "lda" ? "lda" : "cluster"; }

// ---------------------------------------------------------------------------
// Stages
// ---------------------------------------------------------------------------

inline void stage_ingest(const Context& ctx) {
  const Paths p{ctx.work};
  const auto corpus_path = ctx.cfg.str("paths", "corpus");
  if (corpus_path.empty()) throw ConfigError("config: paths.corpus is not set");
  StageSpec spec;
  spec.name = "ingest";
  spec.inputs.push_back({corpus_path, "input corpus (paths.corpus)"});
  const auto lemmas = ctx.cfg.str("paths", "lemmas");
  if (!lemmas.empty()) spec.inputs.push_back({lemmas, "lemma table (paths.lemmas)"});
  spec.config = ctx.cfg.snapshot({"schema", "preprocess"});
  spec.outputs = {p.posts(), p.corpus(), p.ingest_report()};
  run_stage(ctx, spec, [&] {
    const auto loaded = load_corpus(corpus_path, field_schema(ctx));
    std::size_t news = 0;
    for (const auto& r : loaded.records) news += r.kind == PostKind::News;
    log("ingest", std::to_string(loaded.records.size()) + " records (" + std::to_string(news) + " news), " +
                      std::to_string(loaded.errors.size()) + " malformed lines, " +
                      std::to_string(loaded.orphan_ids.size()) + " orphan replies");
    for (std::size_t i = 0; i < loaded.errors.size() && i < 5; ++i) {
      log("ingest", "line " + std::to_string(loaded.errors[i].line) + ": " + loaded.errors[i].message);
    }
    const auto build = build_corpus(loaded.records, PostKind::News, preprocess_config(ctx),
                                    ctx.cfg.count("preprocess", "min_df"), ctx.threads);
    log("ingest", std::to_string(build.corpus.docs.size()) + " news documents, vocabulary " +
                      std::to_string(build.corpus.vocabulary.size()) + ", " +
                      std::to_string(build.dropped_ids.size()) + " empty after preprocessing");
    fs::create_directories(ctx.work);
    write_jsonl(p.posts().string(), loaded.records);
    save_corpus(build.corpus, p.corpus().string());
    nlohmann::json report;
    report["records"] = loaded.records.size();
    report["news"] = news;
    report["replies"] = loaded.records.size() - news;
    report["orphans"] = loaded.orphan_ids;
    report["dropped_empty"] = build.dropped_ids;
    report["documents"] = build.corpus.docs.size();
    report["vocabulary"] = build.corpus.vocabulary.size();
    nlohmann::json errors = nlohmann::json::array();
    for (const auto& e : loaded.errors) errors.push_back({{"line", e.line}, {"message", e.message}});
    report["malformed"] = errors;
    open_out(p.ingest_report()) << report.dump(2) << '\n';
  });
}

inline std::vector<int> sweep_candidates(const Context& ctx) {
  std::vector<int> ks;
  const auto lo = ctx.cfg.integer("sweep", "k_min"), hi = ctx.cfg.integer("sweep", "k_max");
  const auto step = ctx.cfg.integer("sweep", "k_step");
  for (auto k = lo; k <= hi; k += step) ks.push_back(static_cast<int>(k));
  return ks;
}

inline SweepReport read_sweep_csv(const fs::path& path) {
  SweepReport report;
  for (const auto& row : read_csv(path, 4)) {
    SweepEntry e;
    e.k = std::stoi(row[0]);
    e.mean = std::stod(row[1]);
    e.std = std::stod(row[2]);
    if (row[3] == "1") report.selected_k = e.k;
    report.entries.push_back(e);
  }
  if (report.entries.empty()) throw DataError(path.string() + ": empty sweep report");
  return report;
}

inline viz::PlotSpec plot_spec(const Context& ctx, const std::string& title) {
  viz::PlotSpec s;
  s.width = ctx.cfg.real("plot", "width");
  s.height = ctx.cfg.real("plot", "height");
  s.title = title;
  return s;
}

inline void stage_sweep(const Context& ctx) {
  const Paths p{ctx.work};
  StageSpec spec;
  spec.name = "sweep";
  spec.inputs = {{p.corpus(), "ingest"}};
  spec.config = ctx.cfg.snapshot({"sweep", "lda", "plot"});
  spec.config["lda"].erase("k");
  spec.config["lda"].erase("seed");
  spec.config["lda"].erase("threshold");
  spec.config["lda"].erase("top_words");
  spec.seed = ctx.cfg.count("sweep", "seed");
  spec.outputs = {p.sweep_csv(), p.sweep_svg()};
  run_stage(ctx, spec, [&] {
    const auto corpus = load_tokenized_corpus(p.corpus().string());
    auto tmpl = lda_config(ctx);
    tmpl.seed = spec.seed;
    const auto ks = sweep_candidates(ctx);
    const int runs = static_cast<int>(ctx.cfg.integer("sweep", "runs"));
    log("sweep", std::to_string(ks.size()) + " candidates x " + std::to_string(runs) + " runs");
    const auto report = sweep(corpus, ks, runs, tmpl, coherence_config(ctx));
    for (const auto& e : report.entries) {
      for (const auto& f : e.failures) log("sweep", "failed run " + f);
      log("sweep", "K=" + std::to_string(e.k) + " C_V " + fmt("%.4f", e.mean) + " +/- " + fmt("%.4f", e.std));
    }
    for (int k : report.excluded) log("sweep", "K=" + std::to_string(k) + " excluded: every run failed");
    log("sweep", "selected K=" + std::to_string(report.selected_k));
    write_sweep_csv(report, p.sweep_csv().string());
    viz::write_text(p.sweep_svg().string(), viz::sweep_chart(report, plot_spec(ctx, "Topic coherence")));
  });
}

inline void stage_lda(const Context& ctx) {
  const Paths p{ctx.work};
  StageSpec spec;
  spec.name = "lda";
  spec.inputs = {{p.corpus(), "ingest"}};
  const bool auto_k = ctx.cfg.is_auto("lda", "k");
  if (auto_k) spec.inputs.push_back({p.sweep_csv(), "sweep"});
  spec.config = ctx.cfg.snapshot({"lda"});
  spec.seed = ctx.cfg.count("lda", "seed");
  spec.outputs = {p.lda_model(), p.lda_mixtures(), p.lda_doc_topics(), p.lda_topics(), p.topic_map("lda")};
  run_stage(ctx, spec, [&] {
    const auto corpus = load_tokenized_corpus(p.corpus().string());
    auto cfg = lda_config(ctx);
    if (auto_k) {
      cfg.k = read_selected_k(p.sweep_csv().string());
      log("lda", "K=" + std::to_string(cfg.k) + " from sweep");
    }
    const auto fit = fit_lda(corpus, cfg);
    for (const auto& w : fit.warnings) log("lda", "warning: " + w);
    const auto mixtures = infer_all(fit.model, corpus, ctx.threads);
    save_lda(fit.model, p.lda_model().string());

    const auto k = static_cast<std::size_t>(cfg.k);
    DocMatrix dm;
    dm.values = Matrix<double>(corpus.docs.size(), k);
    auto dt = open_out(p.lda_doc_topics());
    dt << "doc_id,topic,max_prob";
    for (std::size_t t = 0; t < k; ++t) dt << ",p" << t;
    dt << '\n';
    for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
      dm.ids.push_back(corpus.docs[d].id);
      const auto& probs = mixtures[d].probs;
      std::copy(probs.begin(), probs.end(), dm.values.row(d).begin());
      const auto top = mixtures[d].argmax();
      dt << csv_field(corpus.docs[d].id) << ',' << top << ',' << fmt("%.6f", probs[top]);
      for (double v : probs) dt << ',' << fmt("%.6f", v);
      dt << '\n';
    }
    save_doc_matrix(dm, p.lda_mixtures());

    const auto reps = lda_representatives(mixtures, ctx.cfg.real("lda", "threshold"));
    TopicMap tm;
    tm.ids = dm.ids;
    tm.representative.assign(corpus.docs.size(), false);
    for (std::size_t d = 0; d < corpus.docs.size(); ++d) tm.topics.push_back(static_cast<int>(mixtures[d].argmax()));
    std::size_t n_reps = 0;
    for (const auto& [topic, docs] : reps.by_topic) {
      for (auto d : docs) tm.representative[d] = true;
      n_reps += docs.size();
    }
    write_topic_map(tm, p.topic_map("lda"));
    log("lda", std::to_string(n_reps) + " representative documents at threshold " +
                   fmt("%.2f", ctx.cfg.real("lda", "threshold")) + ", " + std::to_string(reps.ties.size()) + " ties");

    auto tw = open_out(p.lda_topics());
    tw << "topic,rank,word,weight\n";
    const auto n_words = ctx.cfg.count("lda", "top_words");
    for (std::size_t t = 0; t < k; ++t) {
      const auto words = top_words(fit.model, t, std::min<std::size_t>(n_words, corpus.vocabulary.size()));
      for (std::size_t r = 0; r < words.size(); ++r) {
        tw << t << ',' << r + 1 << ',' << csv_field(words[r].first) << ',' << fmt("%.8f", words[r].second) << '\n';
      }
    }
    const auto cv = cv_score(fit.model, corpus, coherence_config(ctx));
    log("lda", "mean C_V " + fmt("%.4f", cv.mean));
  });
}

inline void stage_embed(const Context& ctx) {
  const Paths p{ctx.work};
  StageSpec spec;
  spec.name = "embed";
  spec.inputs = {{p.corpus(), "ingest"}};
  spec.config = ctx.cfg.snapshot({"embed"});
  spec.seed = ctx.cfg.count("embed", "seed");
  spec.outputs = {p.vectors_model(), p.doc_vectors()};
  run_stage(ctx, spec, [&] {
    const auto corpus = load_tokenized_corpus(p.corpus().string());
    const auto cfg = embed_config(ctx);
    const auto fit = train_unsupervised<float>(corpus, cfg);
    log("embed", "vocabulary " + std::to_string(fit.stats.vocab_size) + ", final epoch loss " +
                     fmt("%.4f", fit.stats.epoch_loss.back()));
    save_embedding(fit.model, p.vectors_model().string());
    DocMatrix dm;
    std::vector<std::vector<double>> rows;
    std::size_t flagged = 0;
    for (const auto& doc : corpus.docs) {
      auto v = doc_vector(fit.model, corpus.words_of(doc));
      if (v.flagged) {
        ++flagged;
        continue;
      }
      dm.ids.push_back(doc.id);
      rows.push_back(std::move(v.values));
    }
    if (rows.empty()) throw DataError("embed: no document has a usable word vector");
    if (flagged) log("embed", std::to_string(flagged) + " documents without usable words left out");
    dm.values = Matrix<double>(rows.size(), cfg.dim);
    for (std::size_t i = 0; i < rows.size(); ++i) std::copy(rows[i].begin(), rows[i].end(), dm.values.row(i).begin());
    save_doc_matrix(dm, p.doc_vectors());
  });
}

inline void stage_cluster(const Context& ctx) {
  const Paths p{ctx.work};
  StageSpec spec;
  spec.name = "cluster";
  spec.inputs = {{p.doc_vectors(), "embed"}};
  spec.config = ctx.cfg.snapshot({"kmeans"});
  spec.seed = ctx.cfg.count("kmeans", "seed");
  spec.outputs = {p.kmeans_model(), p.assignments(), p.topic_map("embed")};
  run_stage(ctx, spec, [&] {
    const auto dm = load_doc_matrix(p.doc_vectors());
    const auto fit = fit_kmeans(dm.values, kmeans_config(ctx));
    log("cluster", "inertia " + fmt("%.6f", fit.model.inertia) + " (restart " + std::to_string(fit.best_run) + ")");
    save_kmeans(fit.model, p.kmeans_model().string());
    auto out = open_out(p.assignments());
    out << "doc_id,cluster,distance\n";
    for (std::size_t i = 0; i < dm.ids.size(); ++i) {
      out << csv_field(dm.ids[i]) << ',' << fit.assignments[i] << ',' << fmt("%.9f", fit.distances[i]) << '\n';
    }
    const auto reps = kmeans_representatives(fit.model, dm.values, fit.assignments,
                                             ctx.cfg.real("kmeans", "rep_percentile"));
    TopicMap tm;
    tm.ids = dm.ids;
    tm.representative.assign(dm.ids.size(), false);
    for (auto a : fit.assignments) tm.topics.push_back(static_cast<int>(a));
    for (const auto& [c, members] : reps) {
      for (auto i : members) tm.representative[i] = true;
    }
    write_topic_map(tm, p.topic_map("embed"));
  });
}

inline void stage_project(const Context& ctx) {
  const Paths p{ctx.work};
  const auto src = source_of(ctx);
  StageSpec spec;
  spec.name = "project-" + src;
  const auto points_path = src == "lda" ? p.lda_mixtures() : p.doc_vectors();
  spec.inputs = {{points_path, src == "lda" ? "lda" : "embed"}, {p.topic_map(src), topic_map_producer(src)}};
  spec.config = ctx.cfg.snapshot({"projection"});
  spec.seed = ctx.cfg.count("projection", "seed");
  spec.outputs = {p.projection(src)};
  run_stage(ctx, spec, [&] {
    const auto dm = load_doc_matrix(points_path);
    const auto tm = read_topic_map(p.topic_map(src));
    if (tm.ids != dm.ids) throw DataError("project: topic map and points disagree; rerun upstream stages");
    auto cfg = projection_config(ctx);
    if (dm.values.rows() <= cfg.n_neighbors) {
      cfg.n_neighbors = std::max<std::size_t>(2, dm.values.rows() - 1);
      log(spec.name, "n_neighbors reduced to " + std::to_string(cfg.n_neighbors));
    }
    const auto emb = project(dm.values, cfg);
    if (dm.values.rows() > 10) {
      log(spec.name, "trustworthiness(k=10) " + fmt("%.4f", trustworthiness(dm.values, to_matrix(emb), 10)));
    }
    auto out = open_out(p.projection(src));
    out << "doc_id,x,y,topic,representative\n";
    for (std::size_t i = 0; i < emb.size(); ++i) {
      out << csv_field(dm.ids[i]) << ',' << fmt("%.6f", emb[i].x) << ',' << fmt("%.6f", emb[i].y) << ','
          << tm.topics[i] << ',' << (tm.representative[i] ? 1 : 0) << '\n';
    }
  });
}

inline void stage_label(const Context& ctx) {
  const Paths p{ctx.work};
  const auto src = source_of(ctx);
  StageSpec spec;
  spec.name = "label-" + src;
  spec.inputs = {{p.posts(), "ingest"}, {p.topic_map(src), topic_map_producer(src)}};
  spec.config = ctx.cfg.snapshot({"preprocess"});
  spec.config["same_preprocessing"] = ctx.cfg.boolean("eval", "same_preprocessing");
  spec.outputs = {p.labeled(src)};
  run_stage(ctx, spec, [&] {
    const auto loaded = load_corpus(p.posts().string());
    const auto tm = read_topic_map(p.topic_map(src));
    const auto build = build_labeled(tm.as_map(), loaded.records, preprocess_config(ctx),
                                     src == "lda" ? SourceModel::Lda : SourceModel::EmbedKMeans,
                                     ctx.cfg.boolean("eval", "same_preprocessing") ? ReplyTokens::Preprocessed
                                                                                   : ReplyTokens::Raw);
    log(spec.name, std::to_string(build.items.size()) + " labelled replies; skipped " +
                       std::to_string(build.orphans) + " orphans, " + std::to_string(build.empty) + " empty, " +
                       std::to_string(build.unlabeled_parent) + " with unlabelled parent");
    auto out = open_out(p.labeled(src));
    for (const auto& c : build.items) {
      nlohmann::json j;
      j["label"] = c.label;
      j["reply_id"] = c.reply_id;
      j["parent_id"] = c.parent_id;
      j["source"] = to_string(c.source);
      j["tokens"] = c.tokens;
      out << j.dump() << '\n';
    }
  });
}

inline Split split_for(const Context& ctx, const fs::path& labeled, const std::string& stage) {
  const auto items = read_labeled(labeled);
  auto s = split(items, ctx.cfg.real("eval", "test_fraction"), ctx.cfg.count("eval", "seed"));
  for (const auto& w : s.warnings) log(stage, "warning: " + w);
  return s;
}

inline nlohmann::json split_snapshot(const Context& ctx) {
  auto j = ctx.cfg.snapshot({"eval"});
  j["eval"].erase("k_max");
  j["eval"].erase("source_model");
  j["eval"].erase("same_preprocessing");
  return j;
}

inline void stage_train_clf(const Context& ctx) {
  const Paths p{ctx.work};
  const auto src = source_of(ctx);
  StageSpec spec;
  spec.name = "train-clf-" + src;
  spec.inputs = {{p.labeled(src), "label"}};
  spec.config = ctx.cfg.snapshot({"classifier"});
  spec.config.update(split_snapshot(ctx));
  spec.seed = ctx.cfg.count("classifier", "seed");
  spec.outputs = {p.classifier(src)};
  run_stage(ctx, spec, [&] {
    const auto s = split_for(ctx, p.labeled(src), spec.name);
    std::vector<LabeledTokens> train;
    train.reserve(s.train.size());
    for (const auto& c : s.train) train.push_back({c.label, c.tokens});
    const auto fit = train_supervised<float>(train, classifier_config(ctx));
    log(spec.name, std::to_string(train.size()) + " training replies, " + std::to_string(fit.model.num_labels()) +
                       " labels, final epoch loss " + fmt("%.4f", fit.epoch_loss.back()));
    save_classifier(fit.model, p.classifier(src).string());
  });
}

inline void stage_eval(const Context& ctx) {
  const Paths p{ctx.work};
  const auto src = source_of(ctx);
  StageSpec spec;
  spec.name = "eval-" + src;
  spec.inputs = {{p.classifier(src), "train-clf"}, {p.labeled(src), "label"}};
  spec.config = split_snapshot(ctx);
  spec.config["eval"]["k_max"] = ctx.cfg.raw("eval", "k_max").text;
  spec.seed = ctx.cfg.count("eval", "seed");
  spec.outputs = {p.pr_csv(src)};
  // the test split must be the one the classifier was trained against
  const auto clf_manifest = manifest_path(ctx, "train-clf-" + src);
  if (fs::exists(clf_manifest)) {
    const auto m = nlohmann::json::parse(read_file(clf_manifest.string()));
    if (m.contains("config") && m["config"].value("eval", nlohmann::json()) != split_snapshot(ctx)["eval"]) {
      throw MissingArtifact("train-clf", p.classifier(src).generic_string() + " for the current split settings");
    }
  }
  run_stage(ctx, spec, [&] {
    const auto model = load_classifier(p.classifier(src).string());
    const auto s = split_for(ctx, p.labeled(src), spec.name);
    auto k_max = static_cast<std::size_t>(ctx.cfg.integer("eval", "k_max"));
    if (k_max > model.num_labels()) {
      log(spec.name, "k_max reduced to the label count " + std::to_string(model.num_labels()));
      k_max = model.num_labels();
    }
    const auto report = pr_at_k(model, s.test, k_max, ctx.threads);
    log(spec.name, std::to_string(report.test_size) + " test replies, P@1 " + fmt("%.4f", report.rows[0].precision) +
                       " (random baseline " + fmt("%.4f", 1.0 / static_cast<double>(report.label_count)) + ")");
    write_pr_csv(report, p.pr_csv(src).string());
  });
}

inline void stage_engagement(const Context& ctx) {
  const Paths p{ctx.work};
  const auto src = source_of(ctx);
  StageSpec spec;
  spec.name = "engagement-" + src;
  spec.inputs = {{p.posts(), "ingest"}, {p.topic_map(src), topic_map_producer(src)}};
  spec.config = nlohmann::json::object();
  spec.outputs = {p.engagement_csv(src)};
  run_stage(ctx, spec, [&] {
    const auto loaded = load_corpus(p.posts().string());
    const auto tm = read_topic_map(p.topic_map(src));
    const auto report = engagement_by_topic(loaded.records, tm.as_map(), tm.num_topics());
    write_engagement_csv(report, p.engagement_csv(src).string());
  });
}

inline PrAtKReport read_pr_csv(const fs::path& path) {
  PrAtKReport r;
  for (const auto& row : read_csv(path, 4)) {
    r.rows.push_back({std::stoul(row[0]), std::stod(row[1]), std::stod(row[2]), std::stoul(row[3])});
  }
  return r;
}

inline EngagementReport read_engagement_csv(const fs::path& path) {
  EngagementReport r;
  for (const auto& row : read_csv(path, 9)) {
    TopicEngagement e;
    e.topic = std::stoi(row[0]);
    e.posts = std::stoul(row[1]);
    e.likes = std::stoull(row[2]);
    e.retweets = std::stoull(row[3]);
    e.replies = std::stoull(row[4]);
    e.mean_likes = std::stod(row[5]);
    e.mean_retweets = std::stod(row[6]);
    e.mean_replies = std::stod(row[7]);
    e.empty = row[8] == "1";
    r.topics.push_back(e);
  }
  return r;
}

inline void stage_plot(const Context& ctx) {
  const Paths p{ctx.work};
  const auto src = source_of(ctx);
  StageSpec spec;
  spec.name = "plot-" + src;
  spec.inputs = {{p.projection(src), "project"}, {p.pr_csv(src), "eval"}, {p.engagement_csv(src), "engagement"}};
  const bool annotate = ctx.cfg.boolean("plot", "annotate");
  if (annotate && src == "lda") spec.inputs.push_back({p.lda_topics(), "lda"});
  spec.config = ctx.cfg.snapshot({"plot"});
  spec.outputs = {p.map_svg(src), p.pr_svg(src), p.totals_svg(src), p.means_svg(src)};
  run_stage(ctx, spec, [&] {
    viz::ScatterInput in;
    for (const auto& row : read_csv(p.projection(src), 5)) {
      in.points.push_back({std::stod(row[1]), std::stod(row[2])});
      in.labels.push_back(std::stoi(row[3]));
      in.representative.push_back(row[4] == "1");
    }
    if (annotate) {
      if (src == "lda") {
        std::map<int, std::vector<std::string>> words;
        for (const auto& row : read_csv(p.lda_topics(), 4)) {
          auto& w = words[std::stoi(row[0])];
          if (w.size() < 3) w.push_back(row[2]);
        }
        for (const auto& [t, ws] : words) {
          std::string label;
          for (const auto& w : ws) label += (label.empty() ? "" : " ") + w;
          in.annotations[t] = label;
        }
      } else {
        for (int l : in.labels) in.annotations[l] = "Cluster " + std::to_string(l);
      }
    }
    const std::string model_name = src == "lda" ? "LDA" : "embeddings + k-means";
    viz::write_text(p.map_svg(src).string(), viz::scatter(in, plot_spec(ctx, "Topic map (" + model_name + ")")));
    auto pr_spec = plot_spec(ctx, "Reply classification (" + model_name + " labels)");
    viz::write_text(p.pr_svg(src).string(), viz::pr_curves(read_pr_csv(p.pr_csv(src)), pr_spec));
    const auto eng = read_engagement_csv(p.engagement_csv(src));
    viz::write_text(p.totals_svg(src).string(),
                    viz::grouped_bars(eng, viz::BarMode::Totals, plot_spec(ctx, "Engagement per topic")));
    viz::write_text(p.means_svg(src).string(),
                    viz::grouped_bars(eng, viz::BarMode::Means, plot_spec(ctx, "Mean engagement per post")));
  });
}

inline void stage_all(Context ctx, const std::string& pipeline) {
  if (pipeline != "lda" && pipeline != "embed") {
    throw ConfigError("pipeline must be lda or embed, got `" + pipeline + "`");
  }
  ctx.cfg.override_value("eval", "source_model", pipeline, "--pipeline");
  stage_ingest(ctx);
  if (pipeline == "lda") {
    stage_sweep(ctx);
    stage_lda(ctx);
  } else {
    stage_embed(ctx);
    stage_cluster(ctx);
  }
  stage_project(ctx);
  stage_label(ctx);
  stage_train_clf(ctx);
  stage_eval(ctx);
  stage_engagement(ctx);
  stage_plot(ctx);
}

}  // namespace topicflow::cli
