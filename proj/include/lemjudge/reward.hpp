// SPDX-License-Identifier: Apache-2.0
//
// Rule-based binary reward with format penalty, plus the per-section
// correctness bookkeeping the loss-masking rule keys on.

#pragma once

#include <optional>

#include "lemjudge/schema.hpp"

namespace lemjudge::reward {

inline constexpr double kCorrectReward = 1.0;
inline constexpr double kIncorrectReward = -1.0;
inline constexpr double kFormatPenalty = -2.0;

/// Gold labels for one instance. `use` is always known; `pre`/`con` are
/// present only where the data provides section-level supervision.
/// When both sections are present, use = pre && con.
struct GoldLabels {
    bool use = false;
    std::optional<bool> pre;
    std::optional<bool> con;

    bool consistent() const {
        if (pre.has_value() && con.has_value()) {
            return use == (*pre && *con);
        }
        return true;
    }
};

/// Outcome of scoring one rollout. value is one of {+1, -1, -2};
/// value == -2 exactly when parse_ok is false. pre_correct is filled only
/// when the gold precondition label exists and the rollout parsed.
struct RewardOutcome {
    double value = 0.0;
    bool parse_ok = false;
    std::optional<bool> final_correct;
    std::optional<bool> pre_correct;
};

/// Scores a parsed two-section rollout: format penalty on parse failure,
/// otherwise +1/-1 on the aggregated usefulness decision against gold.use.
RewardOutcome score_rollout(const schema::ParseResult& parsed, const GoldLabels& gold);

/// Scores a rollout whose extraction yields a single final label (the
/// vanilla single-label regime, or the one-shot pair regime after
/// aggregation). Absent label means the output violated its format.
RewardOutcome score_final_label(std::optional<bool> extracted_use, const GoldLabels& gold);

}  // namespace lemjudge::reward
