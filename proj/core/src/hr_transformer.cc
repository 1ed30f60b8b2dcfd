// Copyright 2026 The hrdiff Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hrdiff/hr_transformer.h"

#include <algorithm>
#include <stdexcept>

#include "hrdiff/checkpoint.h"
#include "json.hpp"

namespace hrdiff {
namespace {

constexpr std::size_t kConvKernel = 3;
// Rows of the calendar tables: month 1-12, day 1-31, weekday, hour, minute.
constexpr std::array<std::size_t, 5> kTemporalRows = {13, 32, 7, 24, 60};

}  // namespace

void ModelConfig::Validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("model config: " + what); };
  if (d_model == 0) fail("d_model must be positive");
  if (heads == 0 || d_model % heads != 0) fail("d_model must be divisible by heads");
  if (window == 0) fail("window must be >= 1");
  if (feature_channels != 5) fail("feature_channels must be 5");
  if (decoders == 0) fail("decoders must be >= 1");
  if (dropout < 0.0 || dropout >= 1.0) fail("dropout must lie in [0, 1)");
  if (activity_routing && specialized_encoders != kNumActivities) {
    fail("specialized_encoders must equal the number of activities (" +
         std::to_string(kNumActivities) + ") when routing is on");
  }
}

std::string ModelConfig::ToJson() const {
  nlohmann::ordered_json j = {
      {"d_model", d_model},
      {"generic_encoders", generic_encoders},
      {"specialized_encoders", specialized_encoders},
      {"decoders", decoders},
      {"transformer_blocks", transformer_blocks},
      {"heads", heads},
      {"dropout", dropout},
      {"window", window},
      {"feature_channels", feature_channels},
      {"ff_dim", ff_dim},
      {"activity_routing", activity_routing},
      {"activity_embeddings", activity_embeddings},
      {"skip_connections", skip_connections}};
  return j.dump();
}

ModelConfig ModelConfig::FromJson(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  ModelConfig c;
  c.d_model = j.at("d_model").get<std::size_t>();
  c.generic_encoders = j.at("generic_encoders").get<std::size_t>();
  c.specialized_encoders = j.at("specialized_encoders").get<std::size_t>();
  c.decoders = j.at("decoders").get<std::size_t>();
  c.transformer_blocks = j.at("transformer_blocks").get<std::size_t>();
  c.heads = j.at("heads").get<std::size_t>();
  c.dropout = j.at("dropout").get<double>();
  c.window = j.at("window").get<std::size_t>();
  c.feature_channels = j.at("feature_channels").get<std::size_t>();
  c.ff_dim = j.at("ff_dim").get<std::size_t>();
  c.activity_routing = j.at("activity_routing").get<bool>();
  c.activity_embeddings = j.at("activity_embeddings").get<bool>();
  c.skip_connections = j.at("skip_connections").get<bool>();
  return c;
}

HrTransformer::HrTransformer(const ModelConfig& config, std::uint64_t seed)
    : config_(config), store_(seed) {
  config_.Validate();
  const std::size_t d = config_.d_model;
  const std::size_t ff = config_.feed_forward_dim();
  positional_ = SinusoidalTable(2 * config_.window, d);
  for (std::size_t k = 0; k < temporal_.size(); ++k) {
    temporal_[k] = SinusoidalTable(kTemporalRows[k], d);
  }
  step_in_ = LinearLayer(store_, "step.in", d, d);
  step_out_ = LinearLayer(store_, "step.out", d, d);
  source_conv_ = store_.Add("source.conv", {kConvKernel, d}, Init::XavierUniform());
  target_conv_ = store_.Add("target.conv", {kConvKernel, d}, Init::XavierUniform());
  if (config_.activity_embeddings) {
    activity_ = ScaledEmbedding(store_, "embed.activity", kActivityVocab, d);
  }
  intensity_ = ScaledEmbedding(store_, "embed.intensity", kNumIntensityCategories, d);
  for (std::size_t i = 0; i < config_.generic_encoders; ++i) {
    generic_.emplace_back(store_, "encoder.generic" + std::to_string(i), d,
                          config_.heads, ff);
  }
  if (config_.activity_routing) {
    for (std::size_t a = 0; a < kNumActivities; ++a) {
      specialized_.emplace_back(
          store_,
          "encoder." + std::string(ActivityName(static_cast<ActivityLabel>(a))), d,
          config_.heads, ff);
    }
  } else {
    specialized_.emplace_back(store_, "encoder.shared", d, config_.heads, ff);
  }
  encoder_norm_ = LayerNormLayer(store_, "encoder.norm", d);
  for (std::size_t i = 0; i < config_.decoders; ++i) {
    decoder_.emplace_back(store_, "decoder" + std::to_string(i), d, config_.heads, ff);
  }
  if (config_.skip_connections) {
    const std::size_t n = std::min(config_.transformer_blocks, config_.decoders + 1);
    for (std::size_t i = 0; i < n; ++i) {
      skip_weights_.push_back(store_.Add("skip" + std::to_string(i) + ".weight",
                                         {kConvKernel * d, d}, Init::XavierUniform()));
      skip_biases_.push_back(
          store_.Add("skip" + std::to_string(i) + ".bias", {1, d}, Init::Zeros()));
    }
  }
  head_ = LinearLayer(store_, "head", d, 1);
}

void HrTransformer::CheckInput(const ModelInput& input) const {
  const std::size_t l = config_.window;
  for (const auto& c : input.channels) {
    if (c.size() != l) {
      throw std::invalid_argument("model input channel has length " +
                                  std::to_string(c.size()) + ", expected " +
                                  std::to_string(l));
    }
  }
  if (input.source_activity.size() != l || input.source_intensity.size() != l ||
      input.source_temporal.size() != l || input.target_activity.size() != l) {
    throw std::invalid_argument("model input side channels must have length " +
                                std::to_string(l));
  }
  for (std::size_t id : input.source_activity) {
    if (id >= kActivityVocab) throw std::out_of_range("activity id out of vocabulary");
  }
  for (std::size_t id : input.target_activity) {
    if (id >= kActivityVocab) throw std::out_of_range("activity id out of vocabulary");
  }
  for (std::size_t id : input.source_intensity) {
    if (id >= kNumIntensityCategories) {
      throw std::out_of_range("intensity id out of vocabulary");
    }
  }
}

Tensor HrTransformer::StepEmbedding(std::size_t step) const {
  const Tensor s = SinusoidalRow(static_cast<double>(step), config_.d_model);
  return step_out_(Gelu(step_in_(s)));
}

Tensor HrTransformer::EmbedSource(const ModelInput& input, const Tensor& step_embedding,
                                  const ForwardContext& ctx) const {
  CheckInput(input);
  const std::size_t l = config_.window;
  const std::size_t groups = config_.feature_channels;
  std::vector<double> stacked;
  stacked.reserve(groups * l);
  for (const auto& c : input.channels) stacked.insert(stacked.end(), c.begin(), c.end());
  const Tensor x = Tensor::FromData({groups * l, 1}, std::move(stacked));
  Tensor emb = Conv1d(x, source_conv_, Tensor(), kConvKernel, l, ConvPadding::kCircular);

  std::vector<std::size_t> pos_ids, act_ids, int_ids;
  std::array<std::vector<std::size_t>, 5> cal_ids;
  for (std::size_t g = 0; g < groups; ++g) {
    for (std::size_t t = 0; t < l; ++t) {
      pos_ids.push_back(t);
      act_ids.push_back(input.source_activity[t]);
      int_ids.push_back(input.source_intensity[t]);
      const auto& tf = input.source_temporal[t];
      cal_ids[0].push_back(static_cast<std::size_t>(tf.month));
      cal_ids[1].push_back(static_cast<std::size_t>(tf.day_of_month));
      cal_ids[2].push_back(static_cast<std::size_t>(tf.day_of_week));
      cal_ids[3].push_back(static_cast<std::size_t>(tf.hour));
      cal_ids[4].push_back(static_cast<std::size_t>(tf.minute));
    }
  }
  emb = Add(emb, Embedding(positional_, pos_ids));
  if (config_.activity_embeddings) emb = Add(emb, activity_(act_ids));
  emb = Add(emb, intensity_(int_ids));
  for (std::size_t k = 0; k < temporal_.size(); ++k) {
    emb = Add(emb, Embedding(temporal_[k], cal_ids[k]));
  }
  emb = AddRow(emb, step_embedding);
  return ctx.Drop(emb);
}

Tensor HrTransformer::EmbedTarget(const Tensor& noisy_target, const ModelInput& input,
                                  const Tensor& step_embedding,
                                  const ForwardContext& ctx) const {
  const std::size_t l = config_.window;
  if (noisy_target.shape() != Shape{l, 1}) {
    throw std::invalid_argument("noisy target has shape " +
                                ShapeString(noisy_target.shape()) + ", expected " +
                                ShapeString({l, 1}));
  }
  if (input.target_activity.size() != l) {
    throw std::invalid_argument("target activity must have length " + std::to_string(l));
  }
  Tensor emb =
      Conv1d(noisy_target, target_conv_, Tensor(), kConvKernel, l, ConvPadding::kCausal);
  std::vector<std::size_t> pos_ids(l);
  for (std::size_t t = 0; t < l; ++t) pos_ids[t] = l + t;
  emb = Add(emb, Embedding(positional_, pos_ids));
  if (config_.activity_embeddings) emb = Add(emb, activity_(input.target_activity));
  emb = AddRow(emb, step_embedding);
  return ctx.Drop(emb);
}

std::vector<Tensor> HrTransformer::RouteAndEncode(std::span<const Tensor> embeddings,
                                                  std::span<const ActivityLabel> labels,
                                                  const ForwardContext& ctx) const {
  if (embeddings.size() != labels.size()) {
    throw std::invalid_argument("routing needs one label per sequence");
  }
  std::vector<Tensor> out;
  out.reserve(embeddings.size());
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    Tensor x = embeddings[i];
    for (const auto& layer : generic_) x = layer(x, ctx);
    std::size_t expert = 0;
    if (config_.activity_routing) {
      if (labels[i] == ActivityLabel::kNone) {
        throw std::invalid_argument("label 'none' has no specialised encoder");
      }
      expert = ActivityIndex(labels[i]);
    }
    x = specialized_[expert](x, ctx);
    out.push_back(encoder_norm_(x));
  }
  return out;
}

Tensor HrTransformer::Encode(const ModelInput& input, std::size_t step,
                             const ForwardContext& ctx) const {
  const Tensor emb = EmbedSource(input, StepEmbedding(step), ctx);
  const std::array<ActivityLabel, 1> label = {input.anchor};
  return RouteAndEncode(std::span<const Tensor>(&emb, 1), label, ctx)[0];
}

Tensor HrTransformer::Decode(const Tensor& target_embedding, const Tensor& context,
                             const ForwardContext& ctx) const {
  std::vector<Tensor> blocks = {target_embedding};
  Tensor x = target_embedding;
  for (const auto& layer : decoder_) {
    x = layer(x, context, ctx);
    blocks.push_back(x);
  }
  if (!skip_weights_.empty()) {
    const std::size_t n = skip_weights_.size();
    const std::size_t first = blocks.size() - n;
    for (std::size_t i = 0; i < n; ++i) {
      x = Add(x, Conv1d(blocks[first + i], skip_weights_[i], skip_biases_[i], kConvKernel,
                        config_.window, ConvPadding::kCausal));
    }
  }
  return head_(x);
}

Tensor HrTransformer::Forward(const ModelInput& input, const Tensor& noisy_target,
                              std::size_t step, const ForwardContext& ctx) const {
  const Tensor step_emb = StepEmbedding(step);
  const Tensor src = EmbedSource(input, step_emb, ctx);
  const std::array<ActivityLabel, 1> label = {input.anchor};
  const Tensor context = RouteAndEncode(std::span<const Tensor>(&src, 1), label, ctx)[0];
  return Decode(EmbedTarget(noisy_target, input, step_emb, ctx), context, ctx);
}

void HrTransformer::Save(const std::string& path) const {
  SaveCheckpoint(path, {config_.ToJson(), store_.Export()});
}

void HrTransformer::Load(const std::string& path) {
  const Checkpoint ckpt = LoadCheckpoint(path);
  ModelConfig stored;
  try {
    stored = ModelConfig::FromJson(ckpt.config);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": unreadable model config (" + e.what() + ")");
  }
  if (!(stored == config_)) {
    throw std::runtime_error(path + ": checkpoint config " + ckpt.config +
                             " does not match model config " + config_.ToJson());
  }
  store_.Import(ckpt.arrays);
}

}  // namespace hrdiff
