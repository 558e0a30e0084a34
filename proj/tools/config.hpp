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

// Pipeline configuration: a small TOML subset (sections, `key = value`,
// strings, integers, floats, booleans, `#` comments). Every key has a
// default; unknown sections and keys are rejected.

#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace topicflow::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Value {
  enum class Kind { String, Bare, Bool };
  Kind kind = Kind::Bare;
  std::string text;
  std::string origin;  // "line 12", "flag --k", "default"
};

// section -> key -> default literal (as it would appear in a config file)
inline const std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>>&
config_schema() {
  static const std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> kSchema = {
      {"paths", {{"corpus", "\"\""}, {"work_dir", "\"work\""}, {"lemmas", "\"\""}}},
      {"schema",
       {{"id", "\"id\""}, {"kind", "\"kind\""}, {"text", "\"text\""}, {"created_at", "\"created_at\""},
        {"likes", "\"likes\""}, {"retweets", "\"retweets\""}, {"reply_count", "\"reply_count\""},
        {"parent_id", "\"parent_id\""}, {"news_value", "\"news\""}, {"reply_value", "\"reply\""}}},
      {"preprocess",
       {{"min_token_len", "2"}, {"keep_emoji", "false"}, {"min_df", "5"}}},
      {"sweep",
       {{"k_min", "2"}, {"k_max", "20"}, {"k_step", "1"}, {"runs", "20"}, {"top_n", "10"}, {"window", "110"},
        {"seed", "42"}}},
      {"lda",
       {{"k", "12"}, {"alpha", "\"auto\""}, {"eta", "\"auto\""}, {"tau0", "1.0"}, {"kappa", "0.7"},
        {"batch_size", "256"}, {"passes", "10"}, {"seed", "42"}, {"threshold", "0.8"}, {"top_words", "10"}}},
      {"embed",
       {{"dim", "100"}, {"window", "5"}, {"neg", "5"}, {"min_n", "3"}, {"max_n", "6"}, {"buckets", "2000000"},
        {"lr", "0.05"}, {"epochs", "5"}, {"min_count", "1"}, {"seed", "42"}}},
      {"kmeans",
       {{"k", "12"}, {"restarts", "10"}, {"max_iter", "300"}, {"tol", "1e-6"}, {"rep_percentile", "0.2"},
        {"seed", "42"}}},
      {"projection",
       {{"neighbors", "15"}, {"min_dist", "0.1"}, {"epochs", "200"}, {"neg_rate", "5"}, {"seed", "42"}}},
      {"classifier",
       {{"dim", "100"}, {"min_n", "3"}, {"max_n", "6"}, {"buckets", "2000000"}, {"lr", "0.1"}, {"epochs", "5"},
        {"seed", "42"}}},
      {"eval", {{"test_fraction", "0.2"}, {"k_max", "10"}, {"seed", "42"}, {"source_model", "\"embed\""},
               {"same_preprocessing", "true"}}},
      {"plot", {{"width", "800"}, {"height", "600"}, {"annotate", "true"}}},
      {"run", {{"threads", "1"}, {"pipeline", "\"embed\""}}},
      {"synth",
       {{"topics", "5"}, {"vocab_per_topic", "50"}, {"noise_vocab", "500"}, {"noise_fraction", "0.1"},
        {"docs_per_topic", "400"}, {"min_length", "15"}, {"max_length", "30"}, {"replies_per_news", "2"},
        {"reply_correlation", "0.8"}, {"likes", "20"}, {"retweets", "5"}, {"replies", "3"},
        {"high_topic", "-1"}, {"high_factor", "5"}, {"seed", "42"}}},
  };
  return kSchema;
}

class Config {
 public:
  Config() {
    for (const auto& [section, keys] : config_schema()) {
      for (const auto& [key, literal] : keys) values_[section][key] = parse_literal(literal, "default");
    }
  }

  static Config from_string(const std::string& content) {
    Config cfg;
    std::istringstream in(content);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::string where = "line " + std::to_string(lineno);
      std::string s = trim(strip_comment(line));
      if (s.empty()) continue;
      if (s.front() == '[') {
        if (s.back() != ']') throw ConfigError("config " + where + ": unterminated section header");
        section = trim(s.substr(1, s.size() - 2));
        if (!cfg.values_.count(section)) throw ConfigError("config " + where + ": unknown section [" + section + "]");
        continue;
      }
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("config " + where + ": expected `key = value`");
      if (section.empty()) throw ConfigError("config " + where + ": key outside of a section");
      const std::string key = trim(s.substr(0, eq));
      cfg.set(section, key, trim(s.substr(eq + 1)), where);
    }
    return cfg;
  }

  static Config from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
  }

  // `literal` uses config-file syntax; bare words are accepted as strings.
  void set(const std::string& section, const std::string& key, const std::string& literal,
           const std::string& origin) {
    auto sec = values_.find(section);
    if (sec == values_.end()) throw ConfigError("config " + origin + ": unknown section [" + section + "]");
    auto it = sec->second.find(key);
    if (it == sec->second.end()) throw ConfigError("config " + origin + ": unknown key " + section + "." + key);
    it->second = parse_literal(literal, origin);
  }

  // Flag overrides take a raw value (no quoting needed).
  void override_value(const std::string& section, const std::string& key, const std::string& raw,
                      const std::string& flag) {
    auto sec = values_.find(section);
    if (sec == values_.end() || !sec->second.count(key)) {
      throw ConfigError("flag " + flag + ": unknown key " + section + "." + key);
    }
    Value v;
    v.kind = raw == "true" || raw == "false" ? Value::Kind::Bool : Value::Kind::Bare;
    v.text = raw;
    v.origin = "flag " + flag;
    sec->second[key] = v;
  }

  const Value& raw(const std::string& section, const std::string& key) const {
    return values_.at(section).at(key);
  }

  std::string str(const std::string& section, const std::string& key) const {
    const auto& v = raw(section, key);
    if (v.kind == Value::Kind::Bool) fail(section, key, v, "a string");
    return v.text;
  }

  std::int64_t integer(const std::string& section, const std::string& key) const {
    const auto& v = raw(section, key);
    std::int64_t out = 0;
    if (v.kind != Value::Kind::Bare || !parse_full(v.text, out)) fail(section, key, v, "an integer");
    return out;
  }

  std::uint64_t count(const std::string& section, const std::string& key) const {
    const auto n = integer(section, key);
    if (n < 0) fail(section, key, raw(section, key), "a non-negative integer");
    return static_cast<std::uint64_t>(n);
  }

  double real(const std::string& section, const std::string& key) const {
    const auto& v = raw(section, key);
    double out = 0.0;
    if (v.kind != Value::Kind::Bare || !parse_full(v.text, out)) fail(section, key, v, "a number");
    return out;
  }

  bool boolean(const std::string& section, const std::string& key) const {
    const auto& v = raw(section, key);
    if (v.kind != Value::Kind::Bool) fail(section, key, v, "true or false");
    return v.text == "true";
  }

  bool is_auto(const std::string& section, const std::string& key) const {
    return raw(section, key).text == "auto";
  }

  // Resolved values of the given sections, for manifests.
  nlohmann::json snapshot(const std::vector<std::string>& sections) const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& s : sections) {
      nlohmann::json sec = nlohmann::json::object();
      for (const auto& [k, v] : values_.at(s)) sec[k] = v.text;
      j[s] = sec;
    }
    return j;
  }

 private:
  [[noreturn]] static void fail(const std::string& section, const std::string& key, const Value& v,
                                const std::string& expected) {
    throw ConfigError("config " + v.origin + ": " + section + "." + key + " must be " + expected + ", got `" +
                      v.text + "`");
  }

  template <typename T>
  static bool parse_full(const std::string& s, T& out) {
    if (s.empty()) return false;
    const char* first = s.data();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
  }

  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  static std::string strip_comment(const std::string& s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '\\' && quoted) {
        ++i;
      } else if (s[i] == '"') {
        quoted = !quoted;
      } else if (s[i] == '#' && !quoted) {
        return s.substr(0, i);
      }
    }
    return s;
  }

  static Value parse_literal(const std::string& literal, const std::string& origin) {
    Value v;
    v.origin = origin;
    if (literal.empty()) throw ConfigError("config " + origin + ": missing value");
    if (literal.front() == '"') {
      if (literal.size() < 2 || literal.back() != '"') throw ConfigError("config " + origin + ": unterminated string");
      v.kind = Value::Kind::String;
      for (std::size_t i = 1; i + 1 < literal.size(); ++i) {
        char c = literal[i];
        if (c == '\\' && i + 2 < literal.size()) {
          c = literal[++i];
          if (c == 'n') c = '\n';
          else if (c == 't') c = '\t';
        }
        v.text += c;
      }
      return v;
    }
    if (literal == "true" || literal == "false") {
      v.kind = Value::Kind::Bool;
      v.text = literal;
      return v;
    }
    for (char c : literal) {
      if (c == ' ' || c == '\t' || c == '"' || c == '=') {
        throw ConfigError("config " + origin + ": cannot parse value `" + literal + "`");
      }
    }
    v.kind = Value::Kind::Bare;
    v.text = literal;
    return v;
  }

  std::map<std::string, std::map<std::string, Value>> values_;
};

}  // namespace topicflow::cli
