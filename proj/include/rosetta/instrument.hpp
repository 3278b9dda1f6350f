#pragma once

// Ingested instrument questionnaires: one InstrumentVersion per age/form
// variant, each question carrying its ordered answer scale and leaf category.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rosetta/ontology.hpp"

namespace rosetta {

enum class ScaleKind { frequency, quality, binary };
enum class Reporter { clinician, parent, teacher, self };

std::string_view to_string(ScaleKind k);
std::string_view to_string(Reporter r);
std::optional<ScaleKind> scale_kind_from_string(std::string_view s);
std::optional<Reporter> reporter_from_string(std::string_view s);

struct AnswerChoice {
    int index = 1;  // 1-based; ascending index = ascending severity
    std::string label;

    friend bool operator==(const AnswerChoice&, const AnswerChoice&) = default;
};

struct AnswerScale {
    ScaleKind kind = ScaleKind::frequency;
    std::vector<AnswerChoice> choices;

    int size() const { return static_cast<int>(choices.size()); }
    // Builds choices 1..n from labels in severity order.
    static AnswerScale from_labels(ScaleKind kind, const std::vector<std::string>& labels);
    // Empty string if the scale is legal, else the reason.
    std::string check() const;

    friend bool operator==(const AnswerScale&, const AnswerScale&) = default;
};

struct SourceQuestion {
    std::string id;
    std::string body;
    AnswerScale scale;
    LeafCategory leaf;
    std::size_t line = 0;

    friend bool operator==(const SourceQuestion& a, const SourceQuestion& b) {
        return a.id == b.id && a.body == b.body && a.scale == b.scale && a.leaf == b.leaf;
    }
};

struct AgeRange {
    int min_months = 0;
    int max_months = 0;
    friend bool operator==(const AgeRange&, const AgeRange&) = default;
};

struct InstrumentVersion {
    std::string instrument;  // e.g. "BASC-3"
    std::string version;     // e.g. "Preschool"
    AgeRange ages;
    Reporter reporter = Reporter::parent;
    std::vector<SourceQuestion> questions;
    std::string file;        // origin label for diagnostics

    const SourceQuestion* find(std::string_view question_id) const;
    std::string key() const { return instrument + " / " + version; }

    friend bool operator==(const InstrumentVersion& a, const InstrumentVersion& b) {
        return a.instrument == b.instrument && a.version == b.version && a.ages == b.ages &&
               a.reporter == b.reporter && a.questions == b.questions;
    }
};

// Tab-separated instrument file: a key/value header block (name, version,
// age_min_months, age_max_months, reporter), a blank line, the column header
// line, then one row per question. Leaf paths must resolve in `ontology`.
InstrumentVersion parse_instrument(std::string_view source, const OntologyTree& ontology,
                                   const std::string& file = "instrument.tsv");
std::string serialize_instrument(const InstrumentVersion& version);

}  // namespace rosetta
