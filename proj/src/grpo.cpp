// SPDX-License-Identifier: Apache-2.0

#include "lemjudge/grpo.hpp"

#include <cmath>
#include <stdexcept>

namespace lemjudge::grpo {

std::vector<double> group_advantages(std::span<const double> rewards, double epsilon) {
    if (rewards.empty()) {
        throw std::invalid_argument("grpo: empty reward list");
    }
    const double n = static_cast<double>(rewards.size());
    double mean = 0.0;
    for (const double r : rewards) {
        mean += r;
    }
    mean /= n;
    double var = 0.0;
    for (const double r : rewards) {
        var += (r - mean) * (r - mean);
    }
    const double std_pop = std::sqrt(var / n);

    std::vector<double> adv(rewards.size(), 0.0);
    if (std_pop == 0.0) {
        return adv;  // zero-variance guard: the whole group is a no-op
    }
    for (std::size_t i = 0; i < rewards.size(); ++i) {
        adv[i] = (rewards[i] - mean) / (std_pop + epsilon);
    }
    return adv;
}

LossMask build_section_mask(const reward::RewardOutcome& outcome,
                            const schema::ParseResult& parsed, std::size_t token_count) {
    LossMask mask;
    mask.bits.assign(token_count, 1);
    if (!outcome.parse_ok) {
        return mask;  // no sections exist; the full sequence carries the penalty
    }
    const bool pre_right = outcome.pre_correct.has_value() && *outcome.pre_correct;
    const bool final_wrong = outcome.final_correct.has_value() && !*outcome.final_correct;
    if (!(pre_right && final_wrong)) {
        return mask;
    }
    const auto* sections = std::get_if<schema::SectionedOutput>(&parsed);
    if (sections == nullptr) {
        return mask;
    }
    for (std::size_t t = sections->pre_token_span.begin;
         t < sections->pre_token_span.end && t < token_count; ++t) {
        mask.bits[t] = 0;
    }
    return mask;
}

policy::ParameterGradient masked_pg_gradient(const RolloutGroup& group,
                                             const policy::PolicyParameters& params) {
    if (group.members.size() < 2) {
        throw std::invalid_argument("grpo: group size must be >= 2");
    }
    policy::ParameterGradient grad = policy::zeros_like(params);
    const double group_norm = static_cast<double>(group.members.size());

    std::vector<double> weights;
    for (const Rollout& rollout : group.members) {
        if (rollout.tokens.empty()) {
            continue;
        }
        if (rollout.mask.bits.size() != rollout.tokens.size()) {
            throw std::invalid_argument("grpo: mask length != token count");
        }
        if (!std::isfinite(rollout.advantage)) {
            throw std::invalid_argument("grpo: non-finite advantage");
        }
        if (rollout.advantage == 0.0) {
            continue;
        }
        const double scale =
            -rollout.advantage / (group_norm * static_cast<double>(rollout.tokens.size()));
        weights.assign(rollout.tokens.size(), 0.0);
        for (std::size_t j = 0; j < rollout.tokens.size(); ++j) {
            weights[j] = rollout.mask.bits[j] ? scale : 0.0;
        }
        const auto term = policy::accumulate_logprob_gradient(params, group.input_features,
                                                              rollout.tokens, weights);
        policy::axpy(grad, term, 1.0);
    }
    return grad;
}

void apply_update(policy::PolicyParameters& params, const policy::ParameterGradient& grad,
                  double learning_rate) {
    if (!grad.all_finite()) {
        throw std::invalid_argument("grpo: non-finite gradient rejected");
    }
    policy::axpy(params, grad, -learning_rate);
}

double mask_activation_rate(std::span<const RolloutGroup> batch) {
    std::size_t total = 0;
    std::size_t triggered = 0;
    for (const RolloutGroup& group : batch) {
        for (const Rollout& rollout : group.members) {
            total += 1;
            if (!rollout.mask.all_ones()) {
                triggered += 1;
            }
        }
    }
    if (total == 0) {
        throw std::invalid_argument("grpo: empty batch");
    }
    return static_cast<double>(triggered) / static_cast<double>(total);
}

}  // namespace lemjudge::grpo
