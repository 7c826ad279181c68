// SPDX-License-Identifier: Apache-2.0
//
// A small from-scratch autoregressive categorical policy with exact analytic
// log-probability gradients.
//
// Architecture: mean-pooled-prefix linear softmax. At generation step j,
//
//   h_j = input_projection * x + prefix_mean(y_<j) + position_bias[j]
//   logits_j = output_weights * h_j
//
// where prefix_mean is the arithmetic mean of the embeddings of the tokens
// generated so far (zero for the empty prefix). Everything is linear up to
// the softmax, so d log pi / d theta has a closed form.

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace lemjudge::policy {

struct PolicyDims {
    int vocab = 0;     // V
    int hidden = 0;    // E
    int features = 0;  // F
    int max_len = 0;

    bool operator==(const PolicyDims&) const = default;
};

/// Learnable weights. The same struct doubles as a parameter gradient
/// (element-for-element). All matrices are row-major.
struct PolicyParameters {
    PolicyDims dims;
    std::vector<double> token_embedding;   // V x E
    std::vector<double> input_projection;  // E x F
    std::vector<double> position_bias;     // max_len x E
    std::vector<double> output_weights;    // V x E

    bool all_finite() const;
    std::size_t parameter_count() const;
};

using ParameterGradient = PolicyParameters;

/// Uniform init in [-0.1, 0.1]; zero init would freeze the symmetry of the
/// prefix-summary path.
PolicyParameters init_policy(const PolicyDims& dims, std::uint64_t seed);

/// Zero-filled gradient buffer with the same shapes as `like`.
ParameterGradient zeros_like(const PolicyParameters& like);

/// grad += scale * delta (shapes must match).
void axpy(ParameterGradient& grad, const ParameterGradient& delta, double scale);

/// Running mean of the embeddings of the generated prefix.
struct PrefixState {
    std::vector<double> summary;  // E, zero for the empty prefix
    std::size_t length = 0;

    explicit PrefixState(int hidden) : summary(static_cast<std::size_t>(hidden), 0.0) {}
};

/// Folds one generated token into the running mean.
void push_token(const PolicyParameters& params, PrefixState& state, int token);

/// Logits for the next token. Deterministic; position must be < max_len.
std::vector<double> next_token_logits(const PolicyParameters& params,
                                      std::span<const double> input_features,
                                      const PrefixState& state, int position);

struct SampledSequence {
    std::vector<int> tokens;
    std::vector<double> logprobs;  // under the tempered distribution sampled from
};

/// Autoregressive sampling from softmax(logits / temperature). Generation
/// stops after the terminal token (always the last vocabulary id) or at
/// max_len. The terminal token, when emitted, is part of the sequence.
SampledSequence sample_sequence(const PolicyParameters& params,
                                std::span<const double> input_features, double temperature,
                                int max_len, std::mt19937_64& rng);

/// Sum over j of weights[j] * log pi(tokens[j] | x, tokens[<j]) at
/// temperature 1. The finite-difference scalar the gradient is checked
/// against.
double weighted_sequence_logprob(const PolicyParameters& params,
                                 std::span<const double> input_features,
                                 std::span<const int> tokens, std::span<const double> weights);

/// Analytic gradient of weighted_sequence_logprob with respect to every
/// parameter. Zero-weight tokens are skipped outright, so masking a token
/// removes its term from the sum exactly.
ParameterGradient accumulate_logprob_gradient(const PolicyParameters& params,
                                              std::span<const double> input_features,
                                              std::span<const int> tokens,
                                              std::span<const double> weights);

/// Checkpoint I/O. Text format with a shape header and hex-float payloads,
/// so round trips are bit-stable. `metadata` carries arbitrary key/value
/// context (training mode, environment settings).
void save_checkpoint(const PolicyParameters& params,
                     const std::map<std::string, std::string>& metadata, const std::string& path);

struct Checkpoint {
    PolicyParameters params;
    std::map<std::string, std::string> metadata;
};

Checkpoint load_checkpoint(const std::string& path);

}  // namespace lemjudge::policy
