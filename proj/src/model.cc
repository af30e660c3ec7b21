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

#include "leakbench/model.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "leakbench/common.h"
#include "leakbench/kernels.h"
#include "leakbench/rng.h"

namespace leakbench {
namespace {

constexpr double kProbClamp = 1e-12;
constexpr std::uint64_t kStreamInit = 0x696E6974ULL;
constexpr std::uint64_t kStreamShuffle = 0x73687566ULL;

// Saturated logits would round to exactly 0 or 1; keep scores strictly inside.
constexpr double kScoreLow = std::numeric_limits<double>::denorm_min();
constexpr double kScoreHigh = 1.0 - std::numeric_limits<double>::epsilon() / 2;

double sigmoid(double z) {
  if (z >= 0.0) return std::min(1.0 / (1.0 + std::exp(-z)), kScoreHigh);
  const double e = std::exp(z);
  return std::max(e / (1.0 + e), kScoreLow);
}

double bce(double p, int y) {
  const double pc = std::clamp(p, kProbClamp, 1.0 - kProbClamp);
  return y == 1 ? -std::log(pc) : -std::log(1.0 - pc);
}

// Per-row activations reused across a pass.
struct Workspace {
  std::vector<double> pre;     // W1 x + b1
  std::vector<double> hidden;  // relu(pre)
};

double score_row(const MlpModel& m, std::span<const double> x, Workspace& ws) {
  if (m.hidden() == 0) return sigmoid(kernels::dot(m.w2(), x) + m.b2());
  const auto b1 = m.b1();
  for (std::size_t j = 0; j < m.hidden(); ++j) {
    ws.pre[j] = kernels::dot(m.w1_row(j), x) + b1[j];
    ws.hidden[j] = ws.pre[j] > 0.0 ? ws.pre[j] : 0.0;
  }
  return sigmoid(kernels::dot(m.w2(), ws.hidden) + m.b2());
}

void check_width(const MlpModel& m, const Matrix& x) {
  if (x.cols() != m.n_features()) {
    throw Error("mlp: input has " + std::to_string(x.cols()) +
                " columns, model expects " + std::to_string(m.n_features()));
  }
}

}  // namespace

void MlpConfig::validate() const {
  if (n_features == 0) throw Error("MlpConfig: n_features must be positive");
  if (epochs == 0) throw Error("MlpConfig: epochs must be positive");
  if (batch_size == 0) throw Error("MlpConfig: batch_size must be positive");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw Error("MlpConfig: learning_rate must be non-negative");
  }
  if (!(adam_beta1 > 0.0 && adam_beta1 < 1.0) || !(adam_beta2 > 0.0 && adam_beta2 < 1.0)) {
    throw Error("MlpConfig: Adam betas must be in (0, 1)");
  }
  if (!(adam_epsilon > 0.0)) throw Error("MlpConfig: adam_epsilon must be positive");
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error("MlpConfig: threshold must be in (0, 1)");
  }
}

MlpModel::MlpModel(std::size_t n_features, std::size_t hidden)
    : n_features_(n_features), hidden_(hidden) {
  const std::size_t count = hidden == 0 ? n_features + 1
                                        : hidden * n_features + hidden + hidden + 1;
  params_.assign(count, 0.0);
  adam_m_.assign(count, 0.0);
  adam_v_.assign(count, 0.0);
}

MlpModel init_mlp(const MlpConfig& cfg) {
  MlpModel m(cfg.n_features, cfg.hidden);
  Rng rng(mix_seed({cfg.seed, kStreamInit}));
  auto p = m.params();
  const double he = std::sqrt(6.0 / static_cast<double>(cfg.n_features));
  for (std::size_t i = 0; i < cfg.hidden * cfg.n_features; ++i) {
    p[i] = rng.uniform(-he, he);
  }
  const double fan_in = static_cast<double>(m.output_fan_in());
  const double glorot = std::sqrt(6.0 / (fan_in + 1.0));
  for (std::size_t i = 0; i < m.output_fan_in(); ++i) {
    p[m.w2_offset() + i] = rng.uniform(-glorot, glorot);
  }
  return m;
}

std::vector<double> forward(const MlpModel& model, const Matrix& x) {
  check_width(model, x);
  Workspace ws{std::vector<double>(model.hidden()), std::vector<double>(model.hidden())};
  std::vector<double> scores(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) scores[i] = score_row(model, x.row(i), ws);
  return scores;
}

LossAndGrad loss_and_grad(const MlpModel& model, const Matrix& x,
                          std::span<const int> y, std::span<const std::size_t> rows) {
  check_width(model, x);
  std::vector<std::size_t> all;
  if (rows.empty()) {
    all.resize(x.rows());
    std::iota(all.begin(), all.end(), 0);
    rows = all;
  }
  LossAndGrad out;
  out.grad.assign(model.parameter_count(), 0.0);
  if (rows.empty()) return out;

  const std::size_t h = model.hidden();
  const std::size_t d = model.n_features();
  std::span<double> grad(out.grad);
  std::span<double> g_w2 = grad.subspan(model.w2_offset(), model.output_fan_in());
  const auto w2 = model.w2();
  const double inv_batch = 1.0 / static_cast<double>(rows.size());
  Workspace ws{std::vector<double>(h), std::vector<double>(h)};

  double total = 0.0;
  for (const std::size_t r : rows) {
    const auto xr = x.row(r);
    const double p = score_row(model, xr, ws);
    total += bce(p, y[r]);
    const double dz = (p - static_cast<double>(y[r])) * inv_batch;
    grad.back() += dz;
    if (h == 0) {
      kernels::axpy(dz, xr, g_w2);
      continue;
    }
    kernels::axpy(dz, ws.hidden, g_w2);
    for (std::size_t j = 0; j < h; ++j) {
      if (ws.pre[j] <= 0.0) continue;
      const double dh = dz * w2[j];
      kernels::axpy(dh, xr, grad.subspan(j * d, d));
      grad[h * d + j] += dh;
    }
  }
  out.loss = total * inv_batch;
  return out;
}

double loss(const MlpModel& model, const Matrix& x, std::span<const int> y) {
  check_width(model, x);
  Workspace ws{std::vector<double>(model.hidden()), std::vector<double>(model.hidden())};
  double total = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) total += bce(score_row(model, x.row(i), ws), y[i]);
  return x.rows() == 0 ? 0.0 : total / static_cast<double>(x.rows());
}

EpochSchedule shuffled_schedule(std::size_t n, std::uint64_t seed) {
  return [n, seed](std::size_t epoch) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(mix_seed({seed, kStreamShuffle, epoch}));
    rng.shuffle(std::span<std::size_t>(order));
    return order;
  };
}

TrainResult train(MlpModel model, const Matrix& x, std::span<const int> y,
                  const MlpConfig& cfg) {
  return train_with_schedule(std::move(model), x, y, cfg,
                             shuffled_schedule(x.rows(), cfg.seed));
}

TrainResult train_with_schedule(MlpModel model, const Matrix& x,
                                std::span<const int> y, const MlpConfig& cfg,
                                const EpochSchedule& schedule) {
  cfg.validate();
  check_width(model, x);
  if (y.size() != x.rows()) throw Error("train: label count != row count");
  const auto positives = std::count(y.begin(), y.end(), 1);
  if (positives == 0 || positives == static_cast<std::ptrdiff_t>(y.size())) {
    throw Error("train: training set must contain both classes");
  }

  TrainResult result;
  auto params = model.params();
  auto& m = model.adam_m();
  auto& v = model.adam_v();
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const std::vector<std::size_t> order = schedule(epoch);
    std::size_t batch = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size, ++batch) {
      const std::size_t len = std::min(cfg.batch_size, order.size() - start);
      const LossAndGrad lg = loss_and_grad(
          model, x, y, std::span<const std::size_t>(order).subspan(start, len));
      const bool finite = std::isfinite(lg.loss) &&
                          std::all_of(lg.grad.begin(), lg.grad.end(),
                                      [](double g) { return std::isfinite(g); });
      if (!finite) {
        throw Error("train: non-finite loss at epoch " + std::to_string(epoch + 1) +
                    ", batch " + std::to_string(batch + 1));
      }
      model.set_step(model.step() + 1);
      const double t = static_cast<double>(model.step());
      const double bc1 = 1.0 - std::pow(cfg.adam_beta1, t);
      const double bc2 = 1.0 - std::pow(cfg.adam_beta2, t);
      for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = lg.grad[i];
        m[i] = cfg.adam_beta1 * m[i] + (1.0 - cfg.adam_beta1) * g;
        v[i] = cfg.adam_beta2 * v[i] + (1.0 - cfg.adam_beta2) * (g * g);
        const double m_hat = m[i] / bc1;
        const double v_hat = v[i] / bc2;
        params[i] -= cfg.learning_rate * (m_hat / (std::sqrt(v_hat) + cfg.adam_epsilon));
      }
    }
    const double epoch_loss = loss(model, x, y);
    if (!std::isfinite(epoch_loss)) {
      throw Error("train: non-finite loss after epoch " + std::to_string(epoch + 1));
    }
    result.history.push_back(epoch_loss);
  }
  result.model = std::move(model);
  return result;
}

std::vector<int> predict(const MlpModel& model, const Matrix& x, double threshold) {
  const std::vector<double> scores = forward(model, x);
  std::vector<int> labels(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) labels[i] = scores[i] >= threshold ? 1 : 0;
  return labels;
}

nlohmann::json model_to_json(const MlpModel& model) {
  const std::size_t h = model.hidden();
  const std::size_t d = model.n_features();
  const auto p = model.params();
  nlohmann::json j;
  j["format"] = "leakbench-mlp/1";
  j["n_features"] = d;
  j["hidden"] = h;
  j["shapes"] = {{"w1", {h, d}}, {"b1", {h}}, {"w2", {model.output_fan_in()}}, {"b2", {1}}};
  j["w1"] = std::vector<double>(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(h * d));
  const auto b1 = model.b1();
  const auto w2 = model.w2();
  j["b1"] = std::vector<double>(b1.begin(), b1.end());
  j["w2"] = std::vector<double>(w2.begin(), w2.end());
  j["b2"] = model.b2();
  j["adam"] = {{"step", model.step()}, {"m", model.adam_m()}, {"v", model.adam_v()}};
  return j;
}

MlpModel model_from_json(const nlohmann::json& j) {
  try {
    const auto d = j.at("n_features").get<std::size_t>();
    const auto h = j.at("hidden").get<std::size_t>();
    MlpModel m(d, h);
    auto p = m.params();
    const auto w1 = j.at("w1").get<std::vector<double>>();
    const auto b1 = j.at("b1").get<std::vector<double>>();
    const auto w2 = j.at("w2").get<std::vector<double>>();
    if (w1.size() != h * d || b1.size() != h || w2.size() != m.output_fan_in()) {
      throw Error("model_from_json: parameter arrays do not match the shape header");
    }
    std::copy(w1.begin(), w1.end(), p.begin());
    std::copy(b1.begin(), b1.end(), p.begin() + static_cast<std::ptrdiff_t>(h * d));
    std::copy(w2.begin(), w2.end(), p.begin() + static_cast<std::ptrdiff_t>(m.w2_offset()));
    p.back() = j.at("b2").get<double>();
    if (j.contains("adam")) {
      const auto& a = j.at("adam");
      m.set_step(a.at("step").get<std::uint64_t>());
      m.adam_m() = a.at("m").get<std::vector<double>>();
      m.adam_v() = a.at("v").get<std::vector<double>>();
      if (m.adam_m().size() != m.parameter_count() ||
          m.adam_v().size() != m.parameter_count()) {
        throw Error("model_from_json: Adam moment size mismatch");
      }
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("model_from_json: ") + e.what());
  }
}

}  // namespace leakbench
