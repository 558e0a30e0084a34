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

// topicflow command line. Exit codes: 0 ok, 1 usage or config error,
// 2 missing upstream artifact, 3 runtime failure.

#include <CLI11.hpp>

#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "config.hpp"
#include "pipeline.hpp"

namespace {

using namespace topicflow;
using namespace topicflow::cli;

struct Override {
  std::string flag;
  std::string section;
  std::string key;
  std::string value;
  CLI::Option* option = nullptr;
};

class Flags {
 public:
  void add(CLI::App* app, const std::string& flag, const std::string& section, const std::string& key,
           const std::string& help) {
    auto o = std::make_unique<Override>(Override{flag, section, key, {}, nullptr});
    o->option = app->add_option(flag, o->value, help);
    items_.push_back(std::move(o));
  }

  void apply(Config& cfg) const {
    for (const auto& o : items_) {
      if (o->option->count() > 0) cfg.override_value(o->section, o->key, o->value, o->flag);
    }
  }

 private:
  std::vector<std::unique_ptr<Override>> items_;
};

void lda_flags(Flags& f, CLI::App* app, bool with_k) {
  if (with_k) {
    f.add(app, "--k", "lda", "k", "Number of topics, or `auto` to take it from the sweep");
    f.add(app, "--seed", "lda", "seed", "Random seed");
    f.add(app, "--threshold", "lda", "threshold", "Representative probability threshold");
  }
  f.add(app, "--alpha", "lda", "alpha", "Document-topic prior (`auto` = 1/K)");
  f.add(app, "--eta", "lda", "eta", "Topic-word prior (`auto` = 1/K)");
  f.add(app, "--tau0", "lda", "tau0", "Learning offset");
  f.add(app, "--kappa", "lda", "kappa", "Learning-rate decay in (0.5, 1]");
  f.add(app, "--batch-size", "lda", "batch_size", "Documents per mini-batch");
  f.add(app, "--passes", "lda", "passes", "Passes over the corpus");
}

void source_flag(Flags& f, CLI::App* app) {
  f.add(app, "--source-model", "eval", "source_model", "Topic source: lda or embed");
}

void split_flags(Flags& f, CLI::App* app) {
  f.add(app, "--test-fraction", "eval", "test_fraction", "Held-out fraction per label");
  f.add(app, "--split-seed", "eval", "seed", "Seed of the train/test split");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"topicflow: topic discovery, reply classification and engagement reports for short posts"};
  app.require_subcommand(1);
  std::string config_path;
  std::string work_dir;
  std::string threads;
  std::vector<std::string> sets;
  bool force = false;
  app.add_option("-c,--config", config_path, "Pipeline config file (TOML subset)");
  app.add_option("-w,--work-dir", work_dir, "Artifact directory (overrides paths.work_dir)");
  app.add_option("--threads", threads, "Worker threads (1 = deterministic)");
  app.add_option("--set", sets, "Override any key: section.key=value")->take_all();
  app.add_flag("-f,--force", force, "Rerun stages even when their manifest is up to date");

  Flags flags;
  auto* ingest = app.add_subcommand("ingest", "Load the JSON Lines export and build the news corpus");
  flags.add(ingest, "--corpus", "paths", "corpus", "JSON Lines export");
  flags.add(ingest, "--lemmas", "paths", "lemmas", "Lemma table (TSV)");
  flags.add(ingest, "--min-df", "preprocess", "min_df", "Minimum document frequency");
  flags.add(ingest, "--min-token-len", "preprocess", "min_token_len", "Minimum token length in code points");

  auto* sweep_cmd = app.add_subcommand("sweep", "Select the number of topics by C_V coherence");
  flags.add(sweep_cmd, "--k-min", "sweep", "k_min", "Smallest K");
  flags.add(sweep_cmd, "--k-max", "sweep", "k_max", "Largest K");
  flags.add(sweep_cmd, "--k-step", "sweep", "k_step", "K increment");
  flags.add(sweep_cmd, "--runs", "sweep", "runs", "Training runs per K");
  flags.add(sweep_cmd, "--top-n", "sweep", "top_n", "Top words per topic");
  flags.add(sweep_cmd, "--window", "sweep", "window", "Sliding window size");
  flags.add(sweep_cmd, "--seed", "sweep", "seed", "Base seed (run r uses seed + r)");
  lda_flags(flags, sweep_cmd, false);

  auto* lda_cmd = app.add_subcommand("lda", "Train the LDA topic model");
  lda_flags(flags, lda_cmd, true);

  auto* embed_cmd = app.add_subcommand("embed", "Train subword embeddings and document vectors");
  flags.add(embed_cmd, "--dim", "embed", "dim", "Vector dimension");
  flags.add(embed_cmd, "--window", "embed", "window", "Context window");
  flags.add(embed_cmd, "--neg", "embed", "neg", "Negative samples");
  flags.add(embed_cmd, "--min-n", "embed", "min_n", "Shortest character n-gram");
  flags.add(embed_cmd, "--max-n", "embed", "max_n", "Longest character n-gram");
  flags.add(embed_cmd, "--buckets", "embed", "buckets", "Hash buckets for n-grams");
  flags.add(embed_cmd, "--lr", "embed", "lr", "Initial learning rate");
  flags.add(embed_cmd, "--epochs", "embed", "epochs", "Training epochs");
  flags.add(embed_cmd, "--min-count", "embed", "min_count", "Minimum word count");
  flags.add(embed_cmd, "--seed", "embed", "seed", "Random seed");

  auto* cluster_cmd = app.add_subcommand("cluster", "Cluster document vectors with k-means");
  flags.add(cluster_cmd, "--k", "kmeans", "k", "Number of clusters");
  flags.add(cluster_cmd, "--restarts", "kmeans", "restarts", "Independent k-means++ restarts");
  flags.add(cluster_cmd, "--max-iter", "kmeans", "max_iter", "Lloyd iterations per restart");
  flags.add(cluster_cmd, "--tol", "kmeans", "tol", "Relative inertia tolerance");
  flags.add(cluster_cmd, "--seed", "kmeans", "seed", "Random seed");
  flags.add(cluster_cmd, "--rep-percentile", "kmeans", "rep_percentile", "Representative distance quantile");

  auto* project_cmd = app.add_subcommand("project", "Project documents to 2-D");
  flags.add(project_cmd, "--neighbors", "projection", "neighbors", "Neighbourhood size");
  flags.add(project_cmd, "--min-dist", "projection", "min_dist", "Minimum distance in the layout");
  flags.add(project_cmd, "--epochs", "projection", "epochs", "Optimisation epochs");
  flags.add(project_cmd, "--neg-rate", "projection", "neg_rate", "Repulsive samples per edge visit");
  flags.add(project_cmd, "--seed", "projection", "seed", "Random seed");
  source_flag(flags, project_cmd);

  auto* label_cmd = app.add_subcommand("label", "Label replies with their parent's topic");
  source_flag(flags, label_cmd);

  auto* clf_cmd = app.add_subcommand("train-clf", "Train the reply topic classifier");
  flags.add(clf_cmd, "--dim", "classifier", "dim", "Vector dimension");
  flags.add(clf_cmd, "--lr", "classifier", "lr", "Initial learning rate");
  flags.add(clf_cmd, "--epochs", "classifier", "epochs", "Training epochs");
  flags.add(clf_cmd, "--min-n", "classifier", "min_n", "Shortest character n-gram");
  flags.add(clf_cmd, "--max-n", "classifier", "max_n", "Longest character n-gram");
  flags.add(clf_cmd, "--buckets", "classifier", "buckets", "Hash buckets for n-grams");
  flags.add(clf_cmd, "--seed", "classifier", "seed", "Random seed");
  split_flags(flags, clf_cmd);
  source_flag(flags, clf_cmd);

  auto* eval_cmd = app.add_subcommand("eval", "Precision and recall at k on held-out replies");
  flags.add(eval_cmd, "--k-max", "eval", "k_max", "Largest k");
  flags.add(eval_cmd, "--test-fraction", "eval", "test_fraction", "Held-out fraction per label");
  flags.add(eval_cmd, "--seed", "eval", "seed", "Seed of the train/test split");
  source_flag(flags, eval_cmd);

  auto* engagement_cmd = app.add_subcommand("engagement", "Likes, replies and retweets per topic");
  source_flag(flags, engagement_cmd);

  auto* plot_cmd = app.add_subcommand("plot", "Render the topic map and report charts as SVG");
  flags.add(plot_cmd, "--width", "plot", "width", "Width in px");
  flags.add(plot_cmd, "--height", "plot", "height", "Height in px");
  source_flag(flags, plot_cmd);

  auto* all_cmd = app.add_subcommand("all", "Run every stage of one pipeline");
  flags.add(all_cmd, "--pipeline", "run", "pipeline", "lda or embed");

  auto* synth_cmd = app.add_subcommand("synth", "Write a planted-topic corpus with ground truth");
  std::string synth_out;
  std::string synth_truth;
  synth_cmd->add_option("-o,--out", synth_out, "Output JSON Lines file")->required();
  synth_cmd->add_option("--truth", synth_truth, "Ground-truth CSV (doc_id,topic)");
  flags.add(synth_cmd, "--topics", "synth", "topics", "Number of planted topics");
  flags.add(synth_cmd, "--docs-per-topic", "synth", "docs_per_topic", "News posts per topic");
  flags.add(synth_cmd, "--replies-per-news", "synth", "replies_per_news", "Replies per news post");
  flags.add(synth_cmd, "--reply-correlation", "synth", "reply_correlation", "Chance a reply word is on topic");
  flags.add(synth_cmd, "--noise-fraction", "synth", "noise_fraction", "Chance a news word is noise");
  flags.add(synth_cmd, "--high-topic", "synth", "high_topic", "Topic with boosted engagement (-1: none)");
  flags.add(synth_cmd, "--seed", "synth", "seed", "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  std::string stage = app.get_subcommands().front()->get_name();
  try {
    Context ctx;
    ctx.cfg = config_path.empty() ? Config() : Config::from_file(config_path);
    for (const auto& s : sets) {
      const auto dot = s.find('.');
      const auto eq = s.find('=');
      if (dot == std::string::npos || eq == std::string::npos || eq < dot) {
        throw ConfigError("--set expects section.key=value, got `" + s + "`");
      }
      ctx.cfg.override_value(s.substr(0, dot), s.substr(dot + 1, eq - dot - 1), s.substr(eq + 1), "--set");
    }
    flags.apply(ctx.cfg);
    if (!work_dir.empty()) ctx.cfg.override_value("paths", "work_dir", work_dir, "--work-dir");
    if (!threads.empty()) ctx.cfg.override_value("run", "threads", threads, "--threads");
    const auto n_threads = ctx.cfg.integer("run", "threads");
    if (n_threads < 1) throw ConfigError("threads must be >= 1");
    ctx.threads = static_cast<unsigned>(n_threads);
    ctx.work = ctx.cfg.str("paths", "work_dir");
    ctx.force = force;
    validate_all(ctx);

    if (stage == "synth") {
      const auto corpus = generate(planted_spec(ctx.cfg));
      write_jsonl(synth_out, corpus.records);
      if (!synth_truth.empty()) write_truth_csv(corpus, synth_truth);
      log("synth", std::to_string(corpus.records.size()) + " records written to " + synth_out);
    } else if (stage == "ingest") {
      stage_ingest(ctx);
    } else if (stage == "sweep") {
      stage_sweep(ctx);
    } else if (stage == "lda") {
      stage_lda(ctx);
    } else if (stage == "embed") {
      stage_embed(ctx);
    } else if (stage == "cluster") {
      stage_cluster(ctx);
    } else if (stage == "project") {
      stage_project(ctx);
    } else if (stage == "label") {
      stage_label(ctx);
    } else if (stage == "train-clf") {
      stage_train_clf(ctx);
    } else if (stage == "eval") {
      stage_eval(ctx);
    } else if (stage == "engagement") {
      stage_engagement(ctx);
    } else if (stage == "plot") {
      stage_plot(ctx);
    } else if (stage == "all") {
      stage_all(ctx, ctx.cfg.str("run", "pipeline"));
    }
    return 0;
  } catch (const ConfigError& e) {
    log(stage, e.what());
    return 1;
  } catch (const MissingArtifact& e) {
    log(stage, e.what());
    return 2;
  } catch (const std::exception& e) {
    log(stage, std::string("error: ") + e.what());
    return 3;
  }
}
