// SPDX-License-Identifier: Apache-2.0
//
// Group-relative advantage estimation, the section-aware loss mask, and
// assembly of the masked policy gradient
//
//   grad L = -(1/|G|) sum_i (1/|y_i|) sum_j m_ij * A_i * grad log pi(y_ij | x, y_i<j)
//
// The returned object is the gradient of the loss; the trainer descends it.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lemjudge/policy.hpp"
#include "lemjudge/reward.hpp"
#include "lemjudge/schema.hpp"

namespace lemjudge::grpo {

inline constexpr double kDefaultAdvantageEpsilon = 1e-8;

/// Per-token {0,1} loss mask.
struct LossMask {
    std::vector<std::uint8_t> bits;

    bool all_ones() const {
        for (const auto b : bits) {
            if (b == 0) return false;
        }
        return true;
    }
};

/// One sampled output sequence with everything the update needs.
struct Rollout {
    std::int64_t input_id = 0;
    std::vector<int> tokens;
    schema::ParseResult parsed;
    reward::RewardOutcome reward;
    LossMask mask;
    double advantage = 0.0;
};

/// |G| rollouts sharing one input.
struct RolloutGroup {
    std::int64_t input_id = 0;
    std::vector<double> input_features;
    std::vector<Rollout> members;
};

/// Group-standardized advantages: (r - mean) / (population std + epsilon).
/// A zero-variance group maps to all zeros, skipping the update.
std::vector<double> group_advantages(std::span<const double> rewards, double epsilon);

/// Section-aware mask. The one triggering case: the rollout parsed, the
/// precondition check was right, and the final label was still wrong —
/// then only the conclusion section keeps loss. Everything else gets all
/// ones (full-sequence credit or penalty).
LossMask build_section_mask(const reward::RewardOutcome& outcome,
                            const schema::ParseResult& parsed, std::size_t token_count);

/// The masked policy-gradient sum above, evaluated analytically. Tokens with
/// a zero mask bit contribute exactly zero. Advantages and masks must be
/// populated; a group of all-zero advantages yields a zero vector.
policy::ParameterGradient masked_pg_gradient(const RolloutGroup& group,
                                             const policy::PolicyParameters& params);

/// Plain gradient-descent step: theta <- theta - lr * grad.
/// Throws std::invalid_argument on a non-finite gradient.
void apply_update(policy::PolicyParameters& params, const policy::ParameterGradient& grad,
                  double learning_rate);

/// Fraction of rollouts in the batch whose mask is not all ones; the
/// stopping signal of the masked training mode. Throws on an empty batch.
double mask_activation_rate(std::span<const RolloutGroup> batch);

}  // namespace lemjudge::grpo
