/*
 * Copyright 2026 The Leakbench Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "leakbench/config.h"

#include <cstdlib>
#include <fstream>
#include <set>

#include "leakbench/common.h"

namespace leakbench {
namespace {

using nlohmann::json;

// Reads the fields of one JSON object and rejects keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_or_root() + ": expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  template <typename T>
  void optional(const std::string& key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    out = convert<T>(j_.at(key), field(key));
  }

  template <typename T>
  void required(const std::string& key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) throw ConfigError(field(key) + ": required field is missing");
    out = convert<T>(j_.at(key), field(key));
  }

  const json& child(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.contains(key)) throw ConfigError(field(key) + ": unknown key");
    }
  }

 private:
  std::string path_or_root() const { return path_.empty() ? "config" : path_; }

  template <typename T>
  static T convert(const json& v, const std::string& name) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(name + ": expected a boolean");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(name + ": expected a string");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError(name + ": expected a number");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw ConfigError(name + ": expected a non-negative integer");
      }
    } else {
      if (!v.is_array()) throw ConfigError(name + ": expected an array");
      using Elem = typename T::value_type;
      T out;
      for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(convert<Elem>(v[i], name + "[" + std::to_string(i) + "]"));
      }
      return out;
    }
    return v.get<T>();
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

SynthConfig parse_synthetic(const json& j) {
  ObjectReader r(j, "dataset.synthetic");
  SynthConfig s;
  r.optional("n_samples", s.n_samples);
  r.optional("positive_rate", s.positive_rate);
  r.optional("n_features", s.n_features);
  r.optional("class_separation", s.class_separation);
  r.optional("seed", s.seed);
  r.optional("fraud_burst", s.fraud_burst);
  r.finish();
  return s;
}

DatasetSource parse_dataset(const json& j) {
  ObjectReader r(j, "dataset");
  DatasetSource d;
  std::string csv;
  if (r.has("csv")) {
    r.optional("csv", csv);
    d.csv_path = csv;
  }
  if (r.has("synthetic")) d.synthetic = parse_synthetic(r.child("synthetic"));
  r.optional("expect_schema", d.expect_schema);
  r.optional("columns", d.columns);
  r.optional("feature_degree", d.feature_degree);
  r.finish();
  if (d.csv_path && d.synthetic) {
    throw ConfigError("dataset: 'csv' and 'synthetic' are mutually exclusive");
  }
  return d;
}

}  // namespace

GridConfig config_from_json(const json& j, const std::optional<std::string>& data_env) {
  GridConfig cfg;
  ObjectReader root(j, "");
  if (root.has("dataset")) cfg.dataset = parse_dataset(root.child("dataset"));
  if (!cfg.dataset.csv_path && !cfg.dataset.synthetic) {
    if (!data_env || data_env->empty()) {
      throw ConfigError(
          "dataset: no 'csv' or 'synthetic' source and LEAKBENCH_DATA is not set");
    }
    cfg.dataset.csv_path = *data_env;
  }

  root.required("n_values", cfg.n_values);
  std::vector<std::string> protocols;
  root.optional("protocols", protocols);
  if (root.has("protocols")) {
    cfg.protocols.clear();
    for (const auto& p : protocols) cfg.protocols.push_back(ordering_from_string(p));
  }
  root.optional("seeds", cfg.seeds);
  root.optional("master_seed", cfg.master_seed);

  if (root.has("resampler")) {
    ObjectReader r(root.child("resampler"), "resampler");
    std::string method(to_string(cfg.resampler.method));
    r.optional("method", method);
    cfg.resampler.method = resample_method_from_string(method);
    r.optional("k_neighbors", cfg.resampler.k_neighbors);
    r.optional("m_neighbors", cfg.resampler.m_neighbors);
    r.optional("target_ratio", cfg.resampler.target_ratio);
    r.optional("allow_quadratic", cfg.resampler.allow_quadratic);
    r.finish();
  }
  if (root.has("split")) {
    ObjectReader r(root.child("split"), "split");
    std::string strategy(to_string(cfg.split.strategy));
    r.optional("strategy", strategy);
    cfg.split.strategy = split_strategy_from_string(strategy);
    r.optional("test_fraction", cfg.split.test_fraction);
    r.finish();
  }
  if (root.has("scaler")) {
    ObjectReader r(root.child("scaler"), "scaler");
    std::string method(to_string(cfg.scaler));
    r.optional("method", method);
    cfg.scaler = scaler_method_from_string(method);
    r.optional("columns", cfg.scale_columns);
    r.finish();
  }
  if (root.has("model")) {
    ObjectReader r(root.child("model"), "model");
    r.optional("epochs", cfg.model.epochs);
    r.optional("batch_size", cfg.model.batch_size);
    r.optional("learning_rate", cfg.model.learning_rate);
    r.optional("adam_beta1", cfg.model.adam_beta1);
    r.optional("adam_beta2", cfg.model.adam_beta2);
    r.optional("adam_epsilon", cfg.model.adam_epsilon);
    r.optional("threshold", cfg.model.threshold);
    r.finish();
  }
  root.optional("output_dir", cfg.output_dir);
  root.optional("formats", cfg.formats);
  root.optional("threads", cfg.threads);
  root.finish();
  for (const auto& f : cfg.formats) {
    if (f != "json" && f != "csv" && f != "markdown" && f != "svg") {
      throw ConfigError("formats: unknown format '" + f + "'");
    }
  }
  cfg.validate();
  return cfg;
}

GridConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  std::optional<std::string> env;
  if (const char* v = std::getenv("LEAKBENCH_DATA")) env = v;
  return config_from_json(j, env);
}

json config_to_json(const GridConfig& cfg) {
  json j;
  json ds;
  if (cfg.dataset.csv_path) ds["csv"] = *cfg.dataset.csv_path;
  if (cfg.dataset.synthetic) {
    const SynthConfig& s = *cfg.dataset.synthetic;
    ds["synthetic"] = {{"n_samples", s.n_samples},
                       {"positive_rate", s.positive_rate},
                       {"n_features", s.n_features},
                       {"class_separation", s.class_separation},
                       {"seed", s.seed},
                       {"fraud_burst", s.fraud_burst}};
  }
  ds["expect_schema"] = cfg.dataset.expect_schema;
  ds["columns"] = cfg.dataset.columns;
  ds["feature_degree"] = cfg.dataset.feature_degree;
  j["dataset"] = ds;
  j["n_values"] = cfg.n_values;
  json protocols = json::array();
  for (const Ordering o : cfg.protocols) protocols.push_back(std::string(to_string(o)));
  j["protocols"] = protocols;
  j["seeds"] = cfg.seeds;
  j["master_seed"] = cfg.master_seed;
  j["resampler"] = {{"method", std::string(to_string(cfg.resampler.method))},
                    {"k_neighbors", cfg.resampler.k_neighbors},
                    {"m_neighbors", cfg.resampler.m_neighbors},
                    {"target_ratio", cfg.resampler.target_ratio},
                    {"allow_quadratic", cfg.resampler.allow_quadratic}};
  j["split"] = {{"strategy", std::string(to_string(cfg.split.strategy))},
                {"test_fraction", cfg.split.test_fraction}};
  j["scaler"] = {{"method", std::string(to_string(cfg.scaler))},
                 {"columns", cfg.scale_columns}};
  j["model"] = {{"epochs", cfg.model.epochs},
                {"batch_size", cfg.model.batch_size},
                {"learning_rate", cfg.model.learning_rate},
                {"adam_beta1", cfg.model.adam_beta1},
                {"adam_beta2", cfg.model.adam_beta2},
                {"adam_epsilon", cfg.model.adam_epsilon},
                {"threshold", cfg.model.threshold}};
  return j;
}

}  // namespace leakbench
