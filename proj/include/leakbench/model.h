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

#ifndef LEAKBENCH_MODEL_H_
#define LEAKBENCH_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "json.hpp"

#include "leakbench/matrix.h"

namespace leakbench {

struct MlpConfig {
  std::size_t n_features = 0;
  // Hidden ReLU units; 0 means the input feeds the sigmoid output directly.
  std::size_t hidden = 0;
  std::size_t epochs = 20;
  std::size_t batch_size = 256;
  double learning_rate = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::uint64_t seed = 0;
  // Scores >= threshold classify positive.
  double threshold = 0.5;

  void validate() const;
};

// Single-hidden-layer perceptron with a sigmoid output.
//
// Parameters live in one flat vector, laid out as W1 (hidden x n_features,
// row-major), b1 (hidden), w2 (hidden, or n_features when hidden == 0), b2.
// Adam moments share that layout.
class MlpModel {
 public:
  MlpModel() = default;
  MlpModel(std::size_t n_features, std::size_t hidden);

  std::size_t n_features() const { return n_features_; }
  std::size_t hidden() const { return hidden_; }
  std::size_t parameter_count() const { return params_.size(); }

  std::span<const double> params() const { return params_; }
  std::span<double> params() { return params_; }

  std::span<const double> w1_row(std::size_t j) const {
    return {params_.data() + j * n_features_, n_features_};
  }
  std::span<const double> b1() const {
    return {params_.data() + hidden_ * n_features_, hidden_};
  }
  std::span<const double> w2() const {
    return {params_.data() + w2_offset(), output_fan_in()};
  }
  double b2() const { return params_.back(); }

  std::size_t w2_offset() const { return hidden_ * n_features_ + hidden_; }
  std::size_t output_fan_in() const { return hidden_ == 0 ? n_features_ : hidden_; }

  std::vector<double>& adam_m() { return adam_m_; }
  std::vector<double>& adam_v() { return adam_v_; }
  const std::vector<double>& adam_m() const { return adam_m_; }
  const std::vector<double>& adam_v() const { return adam_v_; }
  std::uint64_t step() const { return step_; }
  void set_step(std::uint64_t s) { step_ = s; }

  bool operator==(const MlpModel&) const = default;

 private:
  std::size_t n_features_ = 0;
  std::size_t hidden_ = 0;
  std::vector<double> params_;
  std::vector<double> adam_m_;
  std::vector<double> adam_v_;
  std::uint64_t step_ = 0;
};

// He-uniform W1 (bound sqrt(6 / n_features)), Glorot-uniform w2, zero biases.
MlpModel init_mlp(const MlpConfig& cfg);

// sigmoid(w2 . relu(W1 x + b1) + b2) for every row of X.
std::vector<double> forward(const MlpModel& model, const Matrix& x);

struct LossAndGrad {
  double loss = 0.0;
  std::vector<double> grad;  // flat parameter layout
};

// Mean binary cross-entropy with p clamped to [1e-12, 1 - 1e-12], and its
// gradient by backpropagation, over the listed rows (all rows when empty).
LossAndGrad loss_and_grad(const MlpModel& model, const Matrix& x,
                          std::span<const int> y,
                          std::span<const std::size_t> rows = {});

// Loss only.
double loss(const MlpModel& model, const Matrix& x, std::span<const int> y);

// Row visiting order for a given epoch.
using EpochSchedule = std::function<std::vector<std::size_t>(std::size_t epoch)>;

// Fresh seeded permutation of [0, n) per epoch.
EpochSchedule shuffled_schedule(std::size_t n, std::uint64_t seed);

struct TrainResult {
  MlpModel model;
  // Full training-set loss after each epoch.
  std::vector<double> history;
};

// Mini-batch Adam. Throws leakbench::Error naming the epoch and batch when
// the loss stops being finite.
TrainResult train(MlpModel model, const Matrix& x, std::span<const int> y,
                  const MlpConfig& cfg);
TrainResult train_with_schedule(MlpModel model, const Matrix& x,
                                std::span<const int> y, const MlpConfig& cfg,
                                const EpochSchedule& schedule);

// 1 iff score >= threshold.
std::vector<int> predict(const MlpModel& model, const Matrix& x, double threshold);

nlohmann::json model_to_json(const MlpModel& model);
MlpModel model_from_json(const nlohmann::json& j);

}  // namespace leakbench

#endif  // LEAKBENCH_MODEL_H_
