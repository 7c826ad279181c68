// SPDX-License-Identifier: Apache-2.0
//
// Two-section output format: parsing decoded rollouts into labeled sections
// with token spans, label aggregation, and prompt template rendering.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace lemjudge::schema {

// Section titles the output format is keyed on. Matching is exact-case;
// the document is split at the first occurrence of the conclusion sentinel.
inline constexpr std::string_view kStep1Sentinel = "**Step 1: Precondition Check**";
inline constexpr std::string_view kStep2Sentinel = "**Step 2: Conclusion Check**";

/// Half-open range of token indices.
struct TokenSpan {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const { return end - begin; }
    bool operator==(const TokenSpan&) const = default;
};

/// Half-open character range of one token in the decoded text.
struct CharRange {
    std::size_t begin = 0;
    std::size_t end = 0;
};

/// A successfully parsed two-section rollout. The two token spans are
/// disjoint, ordered, and together cover every generated token: the
/// precondition span ends at the token containing its boxed label
/// (inclusive), the conclusion span is everything after.
struct SectionedOutput {
    std::string pre_rationale;
    bool pre_label = false;
    std::string con_rationale;
    bool con_label = false;
    TokenSpan pre_token_span;
    TokenSpan con_token_span;
};

enum class ParseErrorKind {
    MissingSectionSentinel,
    MissingBoxedLabel,
    MalformedLabel,
    SectionsOutOfOrder,
};

std::string_view to_string(ParseErrorKind kind);

/// Why a rollout failed to parse. Any kind incurs the format penalty.
struct ParseFailure {
    ParseErrorKind kind;
    std::optional<std::size_t> position;  // character offset where detected
};

using ParseResult = std::variant<SectionedOutput, ParseFailure>;

inline bool parse_ok(const ParseResult& r) { return std::holds_alternative<SectionedOutput>(r); }

/// Value of the last well-formed boxed{True}/boxed{False} marker in the
/// segment, accepting an optional leading backslash; absent if none exists.
std::optional<bool> extract_boxed_label(std::string_view segment);

/// Splits `text` at the first conclusion sentinel, extracts both labels, and
/// computes token spans against `token_boundaries` (ascending, non-overlapping
/// character ranges, one per generated token; may be empty for untokenized
/// text). Never throws on arbitrary input; failures report the earliest
/// triggered kind.
ParseResult parse_two_section(std::string_view text, std::span<const CharRange> token_boundaries);

/// Final usefulness decision: conjunction of the two section labels.
inline bool aggregate_usefulness(bool pre_label, bool con_label) { return pre_label && con_label; }

/// Minimal schema-conforming document whose parse recovers both labels.
std::string render_two_section(bool pre_label, bool con_label,
                               const std::pair<std::string, std::string>& rationales);

/// Labels of the last well-formed trailing pair marker "boxed{X, Y}" in the
/// one-shot output format; absent when no such marker exists.
std::optional<std::pair<bool, bool>> parse_onetime(std::string_view text);

enum class TemplateId {
    TwoSection,
    Vanilla,
    TwoSectionOnetime,
    PerturbationGen,
    PerturbationValidate,
};

inline constexpr TemplateId kAllTemplates[] = {
    TemplateId::TwoSection,        TemplateId::Vanilla,
    TemplateId::TwoSectionOnetime, TemplateId::PerturbationGen,
    TemplateId::PerturbationValidate,
};

std::string_view to_string(TemplateId id);
std::optional<TemplateId> template_from_string(std::string_view name);

/// Raw template body, with {lemma}/{statement} (and, for the perturbation
/// templates, further) placeholders left intact.
std::string_view template_body(TemplateId id);

/// Substitutes {lemma} and {statement}; all other placeholders are left for
/// the caller. Throws std::invalid_argument on an unknown template name.
std::string render_prompt(TemplateId id, std::string_view lemma, std::string_view statement);

}  // namespace lemjudge::schema
