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

// Activity-conditioned encoder-decoder transformer that predicts the noise
// in a corrupted HR target sequence.
//
// Tensors are token-major. The source has 5L tokens: the five numeric
// channels (HR, gradient, rolling std, EMA, trend) laid out as consecutive
// segments of length L. Each source token embedding is the sum of
//   - a kernel-3 circular convolution of its channel segment (1 -> d_model),
//   - a sinusoidal positional row (ids 0..L-1 repeated per segment),
//   - scaled activity and intensity embeddings of its timestep,
//   - five fixed sinusoidal calendar rows (month, day, weekday, hour, minute),
//   - the diffusion-step embedding.
// The target has L tokens built from the noisy HR (causal kernel-3
// convolution), positions L..2L-1, the activity embedding and the step
// embedding.
//
// Encoding: generic encoder layers, then the specialised layer selected by
// the window's anchor activity, then a final layer norm. Decoding: causal
// self-attention, cross-attention and feed-forward per layer, an optional sum
// of causal convolutions over intermediate block outputs, and a linear head.

#ifndef HRDIFF_HR_TRANSFORMER_H_
#define HRDIFF_HR_TRANSFORMER_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hrdiff/layers.h"
#include "hrdiff/series.h"
#include "hrdiff/tensor.h"

namespace hrdiff {

struct ModelConfig {
  std::size_t d_model = 128;
  std::size_t generic_encoders = 1;
  std::size_t specialized_encoders = kNumActivities;
  std::size_t decoders = 2;
  // Number of block outputs aggregated by the skip path.
  std::size_t transformer_blocks = 3;
  std::size_t heads = 8;
  double dropout = 0.1;
  std::size_t window = 10;  // L
  std::size_t feature_channels = 5;
  std::size_t ff_dim = 0;  // 0 means 4 * d_model
  // Off for the vanilla baseline: one shared final encoder.
  bool activity_routing = true;
  // Off for the vanilla baseline: no activity embeddings.
  bool activity_embeddings = true;
  bool skip_connections = true;

  std::size_t feed_forward_dim() const { return ff_dim == 0 ? 4 * d_model : ff_dim; }
  // Throws std::invalid_argument on an inconsistent configuration.
  void Validate() const;
  std::string ToJson() const;
  static ModelConfig FromJson(const std::string& text);
  bool operator==(const ModelConfig&) const = default;
};

// One model input; numeric channels are already normalised.
struct ModelInput {
  // channels[c][t] for c in {HR, gradient, rolling std, EMA, trend}.
  std::array<std::vector<double>, 5> channels;
  std::vector<std::size_t> source_activity;   // ActivityIndex per timestep
  std::vector<std::size_t> source_intensity;  // dominant category per timestep
  std::vector<TemporalFeatures> source_temporal;
  std::vector<std::size_t> target_activity;
  ActivityLabel anchor = ActivityLabel::kNone;  // routing label
};

class HrTransformer {
 public:
  HrTransformer(const ModelConfig& config, std::uint64_t seed);

  const ModelConfig& config() const { return config_; }
  ParameterStore& parameters() { return store_; }
  const ParameterStore& parameters() const { return store_; }

  // Diffusion-step embedding, 1 x d_model.
  Tensor StepEmbedding(std::size_t step) const;
  // [5L x d_model]
  Tensor EmbedSource(const ModelInput& input, const Tensor& step_embedding,
                     const ForwardContext& ctx) const;
  // noisy_target is L x 1. Result [L x d_model].
  Tensor EmbedTarget(const Tensor& noisy_target, const ModelInput& input,
                     const Tensor& step_embedding, const ForwardContext& ctx) const;
  // Each sequence runs through the generic layers and then the specialised
  // layer of its label; outputs keep the input order.
  std::vector<Tensor> RouteAndEncode(std::span<const Tensor> embeddings,
                                     std::span<const ActivityLabel> labels,
                                     const ForwardContext& ctx) const;
  // Encoder context for one input at diffusion step `step`.
  Tensor Encode(const ModelInput& input, std::size_t step,
                const ForwardContext& ctx) const;
  // Noise prediction [L x 1].
  Tensor Decode(const Tensor& target_embedding, const Tensor& context,
                const ForwardContext& ctx) const;
  Tensor Forward(const ModelInput& input, const Tensor& noisy_target,
                 std::size_t step, const ForwardContext& ctx) const;

  // Fixed sinusoidal tables; exposed so tests can zero them.
  const Tensor& positional_table() const { return positional_; }
  const std::array<Tensor, 5>& temporal_tables() const { return temporal_; }

  void Save(const std::string& path) const;
  // Refuses checkpoints whose stored configuration differs from config().
  void Load(const std::string& path);

 private:
  void CheckInput(const ModelInput& input) const;

  ModelConfig config_;
  ParameterStore store_;
  Tensor positional_;
  std::array<Tensor, 5> temporal_;
  LinearLayer step_in_, step_out_;
  Tensor source_conv_;  // [3 x d_model]
  Tensor target_conv_;  // [3 x d_model]
  ScaledEmbedding activity_;
  ScaledEmbedding intensity_;
  std::vector<EncoderLayer> generic_;
  std::vector<EncoderLayer> specialized_;
  LayerNormLayer encoder_norm_;
  std::vector<DecoderLayer> decoder_;
  std::vector<Tensor> skip_weights_;  // [3 d_model x d_model] each
  std::vector<Tensor> skip_biases_;
  LinearLayer head_;
};

}  // namespace hrdiff

#endif  // HRDIFF_HR_TRANSFORMER_H_
