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

// Post ingestion, text normalization and vocabulary construction.

#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "topicflow/common.hpp"
#include "topicflow/text.hpp"

namespace topicflow {

enum class PostKind { News, Reply };

inline const char* to_string(PostKind k) { return k == PostKind::News ? "news" : "reply"; }

struct PostRecord {
  std::string id;
  PostKind kind = PostKind::News;
  std::string text;
  std::string created_at;  // ISO-8601 UTC as found in the export; may be empty
  std::uint64_t likes = 0;
  std::uint64_t retweets = 0;
  std::uint64_t reply_count = 0;
  std::optional<std::string> parent_id;
  bool orphan = false;  // reply whose parent is not a news post in the corpus
};

// Maps the export's field names (and kind values) onto PostRecord.
struct FieldSchema {
  std::string id = "id";
  std::string kind = "kind";
  std::string text = "text";
  std::string created_at = "created_at";
  std::string likes = "likes";
  std::string retweets = "retweets";
  std::string reply_count = "reply_count";
  std::string parent_id = "parent_id";
  std::string news_value = "news";
  std::string reply_value = "reply";
};

struct LineError {
  std::size_t line = 0;  // 1-based
  std::string message;
};

struct LoadResult {
  std::vector<PostRecord> records;
  std::vector<LineError> errors;
  std::vector<std::string> orphan_ids;
};

namespace detail {

inline std::optional<std::string> json_string(const nlohmann::json& obj, const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer() || it->is_number_unsigned()) return it->dump();
  throw DataError("field '" + key + "' must be a string");
}

inline std::uint64_t json_count(const nlohmann::json& obj, const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return 0;
  if (it->is_number_unsigned()) return it->get<std::uint64_t>();
  if (it->is_number_integer()) {
    const auto v = it->get<std::int64_t>();
    if (v < 0) throw DataError("field '" + key + "' is negative");
    return static_cast<std::uint64_t>(v);
  }
  if (it->is_number_float()) {
    const double v = it->get<double>();
    if (!(v >= 0) || v != std::floor(v)) throw DataError("field '" + key + "' is not a count");
    return static_cast<std::uint64_t>(v);
  }
  throw DataError("field '" + key + "' must be a non-negative integer");
}

inline PostRecord parse_record(const std::string& line, const FieldSchema& schema) {
  const auto obj = nlohmann::json::parse(line);
  if (!obj.is_object()) throw DataError("line is not a JSON object");
  PostRecord rec;
  auto id = json_string(obj, schema.id);
  auto kind = json_string(obj, schema.kind);
  auto text = json_string(obj, schema.text);
  if (!id) throw DataError("missing mandatory field '" + schema.id + "'");
  if (!kind) throw DataError("missing mandatory field '" + schema.kind + "'");
  if (!text) throw DataError("missing mandatory field '" + schema.text + "'");
  rec.id = *id;
  rec.text = *text;
  if (*kind == schema.news_value) {
    rec.kind = PostKind::News;
  } else if (*kind == schema.reply_value) {
    rec.kind = PostKind::Reply;
  } else {
    throw DataError("unknown kind '" + *kind + "'");
  }
  rec.created_at = json_string(obj, schema.created_at).value_or("");
  rec.likes = json_count(obj, schema.likes);
  rec.retweets = json_count(obj, schema.retweets);
  rec.reply_count = json_count(obj, schema.reply_count);
  rec.parent_id = json_string(obj, schema.parent_id);
  if (rec.kind == PostKind::Reply && !rec.parent_id) {
    throw DataError("reply without '" + schema.parent_id + "'");
  }
  if (rec.kind == PostKind::News && rec.parent_id) {
    throw DataError("news post carries '" + schema.parent_id + "'");
  }
  return rec;
}

}  // namespace detail

// Reads one JSON object per line. Bad lines are reported and skipped; the
// load fails outright when more than half of the non-blank lines are bad.
inline LoadResult load_corpus(const std::string& path, const FieldSchema& schema = {}) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus: " + path);
  LoadResult result;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  std::size_t non_blank = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++non_blank;
    try {
      auto rec = detail::parse_record(line, schema);
      if (!seen.insert(rec.id).second) throw DataError("duplicate id '" + rec.id + "'");
      result.records.push_back(std::move(rec));
    } catch (const nlohmann::json::exception& e) {
      result.errors.push_back({line_no, std::string("invalid JSON: ") + e.what()});
    } catch (const DataError& e) {
      result.errors.push_back({line_no, e.what()});
    }
  }
  if (non_blank > 0 && result.errors.size() * 2 > non_blank) {
    throw DataError(path + ": " + std::to_string(result.errors.size()) + " of " +
                    std::to_string(non_blank) + " lines malformed (first at line " +
                    std::to_string(result.errors.front().line) + ": " +
                    result.errors.front().message + ")");
  }
  std::unordered_set<std::string> news_ids;
  for (const auto& r : result.records) {
    if (r.kind == PostKind::News) news_ids.insert(r.id);
  }
  for (auto& r : result.records) {
    if (r.kind == PostKind::Reply && !news_ids.contains(*r.parent_id)) {
      r.orphan = true;
      result.orphan_ids.push_back(r.id);
    }
  }
  return result;
}

inline nlohmann::json to_json(const PostRecord& r) {
  nlohmann::json j;
  j["id"] = r.id;
  j["kind"] = to_string(r.kind);
  j["text"] = r.text;
  if (!r.created_at.empty()) j["created_at"] = r.created_at;
  j["likes"] = r.likes;
  j["retweets"] = r.retweets;
  j["reply_count"] = r.reply_count;
  if (r.parent_id) j["parent_id"] = *r.parent_id;
  return j;
}

inline void write_jsonl(const std::string& path, const std::vector<PostRecord>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write: " + path);
  for (const auto& r : records) out << to_json(r).dump() << '\n';
  if (!out) throw IoError("write failed: " + path);
}

// ---------------------------------------------------------------------------
// Preprocessing
// ---------------------------------------------------------------------------

struct PreprocessConfig {
  std::map<std::string, std::string> lemma_table;  // empty: identity
  int min_token_len = 2;
  bool keep_emoji = false;
};

// Two-column TSV (surface form, lemma). Both columns must be lowercase.
inline std::map<std::string, std::string> load_lemma_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open lemma table: " + path);
  std::map<std::string, std::string> table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw DataError(path + ":" + std::to_string(line_no) + ": expected two tab-separated columns");
    }
    std::string surface = line.substr(0, tab);
    std::string lemma = line.substr(tab + 1);
    if (text::has_uppercase(surface) || text::has_uppercase(lemma)) {
      throw DataError(path + ":" + std::to_string(line_no) + ": lemma table entries must be lowercase");
    }
    table[std::move(surface)] = std::move(lemma);
  }
  return table;
}

namespace detail {

inline bool starts_with_ci(std::u32string_view s, std::size_t pos, std::u32string_view prefix) {
  if (pos + prefix.size() > s.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (text::to_lower(s[pos + i]) != prefix[i]) return false;
  }
  return true;
}

// Removes every http://, https:// or www. run up to the next whitespace.
inline std::u32string strip_urls(std::u32string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (starts_with_ci(s, i, U"http://") || starts_with_ci(s, i, U"https://") ||
        starts_with_ci(s, i, U"www.")) {
      while (i < s.size() && !text::is_space(s[i])) ++i;
      out.push_back(U' ');
      continue;
    }
    out.push_back(s[i++]);
  }
  return out;
}

inline std::vector<std::u32string> split(std::u32string_view s) {
  std::vector<std::u32string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && text::is_space(s[i])) ++i;
    const std::size_t start = i;
    while (i < s.size() && !text::is_space(s[i])) ++i;
    if (i > start) out.emplace_back(s.substr(start, i - start));
  }
  return out;
}

}  // namespace detail

// Steps, in order: strip URLs; drop whole tokens starting with '#' or '@';
// lowercase; delete punctuation (and emoji unless kept); split on
// whitespace; lemmatize; drop tokens shorter than min_token_len code points.
inline std::vector<std::string> preprocess(std::string_view raw, const PreprocessConfig& cfg = {}) {
  const std::u32string no_urls = detail::strip_urls(text::decode_utf8(raw));

  std::u32string cleaned;
  cleaned.reserve(no_urls.size());
  for (const auto& tok : detail::split(no_urls)) {
    if (tok.front() == U'#' || tok.front() == U'@') continue;
    for (char32_t cp : tok) {
      cp = text::to_lower(cp);
      if (text::is_punctuation(cp)) continue;
      if (!cfg.keep_emoji && text::is_emoji(cp)) continue;
      cleaned.push_back(cp);
    }
    cleaned.push_back(U' ');
  }

  std::vector<std::string> tokens;
  for (const auto& tok : detail::split(cleaned)) {
    std::string word = text::encode_utf8(tok);
    if (!cfg.lemma_table.empty()) {
      if (auto it = cfg.lemma_table.find(word); it != cfg.lemma_table.end()) word = it->second;
    }
    if (static_cast<int>(text::codepoint_length(word)) < cfg.min_token_len) continue;
    tokens.push_back(std::move(word));
  }
  return tokens;
}

// ---------------------------------------------------------------------------
// Vocabulary and tokenized corpus
// ---------------------------------------------------------------------------

using WordId = std::uint32_t;

class Vocabulary {
 public:
  Vocabulary() = default;

  // Adds a word with its frequencies; ids are assigned in insertion order.
  WordId add(const std::string& word, std::uint64_t doc_freq, std::uint64_t coll_freq) {
    require(doc_freq >= 1 && coll_freq >= 1, "vocabulary frequencies must be >= 1");
    auto [it, inserted] = index_.emplace(word, static_cast<WordId>(words_.size()));
    require(inserted, "duplicate vocabulary word: " + word);
    words_.push_back(word);
    doc_freq_.push_back(doc_freq);
    coll_freq_.push_back(coll_freq);
    return it->second;
  }

  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }

  const std::string& word(WordId id) const { return words_.at(id); }
  std::optional<WordId> id_of(std::string_view word) const {
    auto it = index_.find(std::string(word));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::uint64_t doc_freq(WordId id) const { return doc_freq_.at(id); }
  std::uint64_t coll_freq(WordId id) const { return coll_freq_.at(id); }
  const std::vector<std::string>& words() const { return words_; }

  // Fingerprint stored in model files to detect a vocabulary mismatch.
  std::uint64_t hash() const {
    std::uint64_t h = fnv1a64("");
    for (const auto& w : words_) {
      h = fnv1a64(w, h);
      h = fnv1a64(std::string_view("\0", 1), h);
    }
    return h;
  }

 private:
  std::vector<std::string> words_;
  std::vector<std::uint64_t> doc_freq_;
  std::vector<std::uint64_t> coll_freq_;
  std::unordered_map<std::string, WordId> index_;
};

struct Document {
  std::string id;
  std::vector<WordId> tokens;
};

struct TokenizedCorpus {
  std::vector<Document> docs;
  Vocabulary vocabulary;

  std::size_t size() const { return docs.size(); }
  bool empty() const { return docs.empty(); }

  std::size_t token_count() const {
    std::size_t n = 0;
    for (const auto& d : docs) n += d.tokens.size();
    return n;
  }

  std::vector<std::string> words_of(const Document& doc) const {
    std::vector<std::string> out;
    out.reserve(doc.tokens.size());
    for (WordId id : doc.tokens) out.push_back(vocabulary.word(id));
    return out;
  }
};

struct CorpusBuild {
  TokenizedCorpus corpus;
  std::vector<std::string> dropped_ids;  // documents left empty by preprocessing or min_df
};

// Tokenizes the records matching `kind` (all records when nullopt). Words
// with document frequency below min_df are removed; the vocabulary is sorted
// bytewise so ids do not depend on record order.
inline CorpusBuild build_corpus(const std::vector<PostRecord>& records,
                                std::optional<PostKind> kind, const PreprocessConfig& cfg,
                                std::size_t min_df = 1, unsigned threads = 1) {
  require(min_df >= 1, "min_df must be >= 1");
  std::vector<const PostRecord*> selected;
  for (const auto& r : records) {
    if (!kind || r.kind == *kind) selected.push_back(&r);
  }

  std::vector<std::vector<std::string>> tokenized(selected.size());
  parallel_for(selected.size(), threads, [&](std::size_t begin, std::size_t end, unsigned) {
    for (std::size_t i = begin; i < end; ++i) tokenized[i] = preprocess(selected[i]->text, cfg);
  });

  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> freq;  // df, cf
  for (const auto& toks : tokenized) {
    std::unordered_set<std::string_view> in_doc;
    for (const auto& t : toks) {
      auto& f = freq[t];
      f.second += 1;
      if (in_doc.insert(t).second) f.first += 1;
    }
  }

  CorpusBuild out;
  auto& vocab = out.corpus.vocabulary;
  for (const auto& [word, f] : freq) {
    if (f.first >= min_df) vocab.add(word, f.first, f.second);
  }
  for (std::size_t i = 0; i < selected.size(); ++i) {
    Document doc{selected[i]->id, {}};
    for (const auto& t : tokenized[i]) {
      if (auto id = vocab.id_of(t)) doc.tokens.push_back(*id);
    }
    if (doc.tokens.empty()) {
      out.dropped_ids.push_back(doc.id);
    } else {
      out.corpus.docs.push_back(std::move(doc));
    }
  }
  if (out.corpus.docs.empty()) {
    throw DataError("all " + std::to_string(selected.size()) +
                    " documents are empty after preprocessing (min_df=" + std::to_string(min_df) +
                    ")");
  }
  return out;
}

inline constexpr std::string_view kCorpusMagic = "TFCORP1";

inline void save_corpus(const TokenizedCorpus& corpus, const std::string& path) {
  BinaryWriter w(path);
  w.magic(kCorpusMagic);
  w.put<std::uint64_t>(corpus.vocabulary.size());
  for (WordId i = 0; i < corpus.vocabulary.size(); ++i) {
    w.put_string(corpus.vocabulary.word(i));
    w.put<std::uint64_t>(corpus.vocabulary.doc_freq(i));
    w.put<std::uint64_t>(corpus.vocabulary.coll_freq(i));
  }
  w.put<std::uint64_t>(corpus.docs.size());
  for (const auto& d : corpus.docs) {
    w.put_string(d.id);
    w.put_array<WordId>(d.tokens);
  }
  w.close();
}

inline TokenizedCorpus load_tokenized_corpus(const std::string& path) {
  BinaryReader r(path);
  r.expect_magic(kCorpusMagic);
  TokenizedCorpus corpus;
  const auto v = r.get<std::uint64_t>();
  for (std::uint64_t i = 0; i < v; ++i) {
    auto word = r.get_string();
    const auto df = r.get<std::uint64_t>();
    const auto cf = r.get<std::uint64_t>();
    corpus.vocabulary.add(word, df, cf);
  }
  const auto d = r.get<std::uint64_t>();
  corpus.docs.reserve(d);
  for (std::uint64_t i = 0; i < d; ++i) {
    Document doc;
    doc.id = r.get_string();
    doc.tokens = r.get_array<WordId>();
    for (WordId t : doc.tokens) {
      if (t >= v) throw DataError(path + ": token id out of range in document " + doc.id);
    }
    corpus.docs.push_back(std::move(doc));
  }
  return corpus;
}

}  // namespace topicflow
