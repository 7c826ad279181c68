// SPDX-License-Identifier: Apache-2.0

#include "lemjudge/reward.hpp"

namespace lemjudge::reward {

RewardOutcome score_rollout(const schema::ParseResult& parsed, const GoldLabels& gold) {
    RewardOutcome outcome;
    const auto* sections = std::get_if<schema::SectionedOutput>(&parsed);
    if (sections == nullptr) {
        outcome.value = kFormatPenalty;
        outcome.parse_ok = false;
        return outcome;
    }
    outcome.parse_ok = true;
    const bool predicted_use = schema::aggregate_usefulness(sections->pre_label, sections->con_label);
    outcome.final_correct = (predicted_use == gold.use);
    outcome.value = *outcome.final_correct ? kCorrectReward : kIncorrectReward;
    if (gold.pre.has_value()) {
        outcome.pre_correct = (sections->pre_label == *gold.pre);
    }
    return outcome;
}

RewardOutcome score_final_label(std::optional<bool> extracted_use, const GoldLabels& gold) {
    RewardOutcome outcome;
    if (!extracted_use.has_value()) {
        outcome.value = kFormatPenalty;
        outcome.parse_ok = false;
        return outcome;
    }
    outcome.parse_ok = true;
    outcome.final_correct = (*extracted_use == gold.use);
    outcome.value = *outcome.final_correct ? kCorrectReward : kIncorrectReward;
    return outcome;
}

}  // namespace lemjudge::reward
