// SPDX-License-Identifier: Apache-2.0

#include "lemjudge/schema.hpp"

#include <array>
#include <stdexcept>

namespace lemjudge::schema {

namespace {

struct BoxedScan {
    std::optional<bool> value;            // last well-formed marker, if any
    std::optional<std::size_t> value_pos; // offset of its "boxed{"
    bool saw_any_marker = false;          // any "boxed{" at all
    std::optional<std::size_t> last_marker_pos;
};

// Scans a segment for boxed{...} markers. A marker is well-formed when the
// payload up to the next '}' is exactly True or False. A leading backslash
// is tolerated but not required.
BoxedScan scan_boxed(std::string_view segment) {
    BoxedScan scan;
    static constexpr std::string_view kMarker = "boxed{";
    std::size_t from = 0;
    while (true) {
        const std::size_t pos = segment.find(kMarker, from);
        if (pos == std::string_view::npos) {
            break;
        }
        scan.saw_any_marker = true;
        scan.last_marker_pos = pos;
        const std::size_t payload = pos + kMarker.size();
        const std::size_t close = segment.find('}', payload);
        if (close != std::string_view::npos) {
            const std::string_view body = segment.substr(payload, close - payload);
            if (body == "True") {
                scan.value = true;
                scan.value_pos = pos;
            } else if (body == "False") {
                scan.value = false;
                scan.value_pos = pos;
            }
        }
        from = pos + kMarker.size();
    }
    return scan;
}

std::string_view trim(std::string_view s) {
    const char* ws = " \t\n\r";
    const std::size_t a = s.find_first_not_of(ws);
    if (a == std::string_view::npos) return {};
    const std::size_t b = s.find_last_not_of(ws);
    return s.substr(a, b - a + 1);
}

// Index of the token whose character range contains `pos`; falls back to the
// last token starting at or before `pos`.
std::size_t token_at(std::span<const CharRange> boundaries, std::size_t pos) {
    std::size_t best = 0;
    for (std::size_t i = 0; i < boundaries.size(); ++i) {
        if (boundaries[i].begin <= pos && pos < boundaries[i].end) {
            return i;
        }
        if (boundaries[i].begin <= pos) {
            best = i;
        }
    }
    return best;
}

}  // namespace

std::string_view to_string(ParseErrorKind kind) {
    switch (kind) {
        case ParseErrorKind::MissingSectionSentinel: return "missing-section-sentinel";
        case ParseErrorKind::MissingBoxedLabel: return "missing-boxed-label";
        case ParseErrorKind::MalformedLabel: return "malformed-label";
        case ParseErrorKind::SectionsOutOfOrder: return "sections-out-of-order";
    }
    return "unknown";
}

std::optional<bool> extract_boxed_label(std::string_view segment) {
    return scan_boxed(segment).value;
}

ParseResult parse_two_section(std::string_view text, std::span<const CharRange> token_boundaries) {
    const std::size_t step2 = text.find(kStep2Sentinel);
    if (step2 == std::string_view::npos) {
        return ParseFailure{ParseErrorKind::MissingSectionSentinel, std::nullopt};
    }
    // Preamble before Step 1 is tolerated, but Step 1 appearing only after
    // Step 2 means the sections were emitted in reverse.
    const std::size_t step1 = text.find(kStep1Sentinel);
    if (step1 != std::string_view::npos && step1 > step2) {
        return ParseFailure{ParseErrorKind::SectionsOutOfOrder, step1};
    }

    const std::string_view pre_text = text.substr(0, step2);
    const std::string_view con_text = text.substr(step2 + kStep2Sentinel.size());
    const std::size_t con_offset = step2 + kStep2Sentinel.size();

    const BoxedScan pre = scan_boxed(pre_text);
    if (!pre.value.has_value()) {
        if (pre.saw_any_marker) {
            return ParseFailure{ParseErrorKind::MalformedLabel, pre.last_marker_pos};
        }
        return ParseFailure{ParseErrorKind::MissingBoxedLabel, 0};
    }
    const BoxedScan con = scan_boxed(con_text);
    if (!con.value.has_value()) {
        if (con.saw_any_marker) {
            return ParseFailure{ParseErrorKind::MalformedLabel, con_offset + *con.last_marker_pos};
        }
        return ParseFailure{ParseErrorKind::MissingBoxedLabel, con_offset};
    }

    SectionedOutput out;
    out.pre_label = *pre.value;
    out.con_label = *con.value;

    const std::size_t pre_rationale_begin =
        (step1 != std::string_view::npos) ? step1 + kStep1Sentinel.size() : 0;
    out.pre_rationale = std::string(
        trim(text.substr(pre_rationale_begin,
                         *pre.value_pos > pre_rationale_begin ? *pre.value_pos - pre_rationale_begin : 0)));
    out.con_rationale = std::string(trim(con_text.substr(0, *con.value_pos)));

    const std::size_t n = token_boundaries.size();
    if (n == 0) {
        out.pre_token_span = {0, 0};
        out.con_token_span = {0, 0};
        return out;
    }
    const std::size_t pre_box_token = token_at(token_boundaries, *pre.value_pos);
    out.pre_token_span = {0, pre_box_token + 1};
    out.con_token_span = {pre_box_token + 1, n};
    return out;
}

std::string render_two_section(bool pre_label, bool con_label,
                               const std::pair<std::string, std::string>& rationales) {
    std::string doc;
    auto append_piece = [&doc](std::string_view piece) {
        if (piece.empty()) return;
        if (!doc.empty()) doc += ' ';
        doc += piece;
    };
    append_piece(kStep1Sentinel);
    append_piece(rationales.first);
    append_piece(pre_label ? "boxed{True}" : "boxed{False}");
    append_piece(kStep2Sentinel);
    append_piece(rationales.second);
    append_piece(con_label ? "boxed{True}" : "boxed{False}");
    return doc;
}

std::optional<std::pair<bool, bool>> parse_onetime(std::string_view text) {
    static constexpr std::string_view kMarker = "boxed{";
    std::optional<std::pair<bool, bool>> result;
    std::size_t from = 0;
    while (true) {
        const std::size_t pos = text.find(kMarker, from);
        if (pos == std::string_view::npos) break;
        const std::size_t payload = pos + kMarker.size();
        const std::size_t close = text.find('}', payload);
        if (close != std::string_view::npos) {
            const std::string_view body = text.substr(payload, close - payload);
            auto word = [](std::string_view w) -> std::optional<bool> {
                if (w == "True") return true;
                if (w == "False") return false;
                return std::nullopt;
            };
            const std::size_t comma = body.find(", ");
            if (comma != std::string_view::npos) {
                const auto first = word(body.substr(0, comma));
                const auto second = word(body.substr(comma + 2));
                if (first && second) {
                    result = std::make_pair(*first, *second);
                }
            }
        }
        from = pos + kMarker.size();
    }
    return result;
}

std::string_view to_string(TemplateId id) {
    switch (id) {
        case TemplateId::TwoSection: return "two-section";
        case TemplateId::Vanilla: return "vanilla";
        case TemplateId::TwoSectionOnetime: return "two-section-onetime";
        case TemplateId::PerturbationGen: return "perturbation-gen";
        case TemplateId::PerturbationValidate: return "perturbation-validate";
    }
    return "unknown";
}

std::optional<TemplateId> template_from_string(std::string_view name) {
    for (const TemplateId id : kAllTemplates) {
        if (to_string(id) == name) return id;
    }
    return std::nullopt;
}

std::string render_prompt(TemplateId id, std::string_view lemma, std::string_view statement) {
    std::string body(template_body(id));
    auto replace_all = [](std::string& text, std::string_view key, std::string_view value) {
        std::size_t pos = 0;
        while ((pos = text.find(key, pos)) != std::string::npos) {
            text.replace(pos, key.size(), value);
            pos += value.size();
        }
    };
    replace_all(body, "{lemma}", lemma);
    replace_all(body, "{statement}", statement);
    return body;
}

}  // namespace lemjudge::schema
