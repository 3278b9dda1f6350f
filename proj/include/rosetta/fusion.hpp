#pragma once

// Translation of raw instrument responses into Rosetta space, conflict
// resolution across instruments, and labeled cohort assembly.

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rosetta/registry.hpp"

namespace rosetta::fusion {

// How several contributions to one Rosetta question collapse to one code.
//   max    - highest severity code
//   first  - first contribution in input order
//   latest - contribution with the latest assessment date; undated entries
//            sort before dated ones, ties go to the later input position
enum class ConflictPolicy { max, first, latest };

std::string_view to_string(ConflictPolicy p);
std::optional<ConflictPolicy> policy_from_string(std::string_view s);

enum class Label { autism, adhd, neither };
inline constexpr std::array<Label, 3> kLabels{Label::autism, Label::adhd, Label::neither};

std::string_view to_string(Label l);
std::optional<Label> label_from_string(std::string_view s);

// One administration of one instrument version to one subject.
struct AssessmentRecord {
    std::string subject_id;
    std::string instrument;
    std::string version;
    std::vector<std::pair<std::string, int>> responses;  // question id -> choice index, input order
    std::optional<std::string> date;                     // ISO "YYYY-MM-DD"

    friend bool operator==(const AssessmentRecord&, const AssessmentRecord&) = default;
};

// A raw response that produced a Rosetta code.
struct Provenance {
    std::string instrument;
    std::string version;
    std::string question_id;
    int choice = 0;
    int code = 0;
    std::optional<std::string> date;

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

// Values and provenance are aligned with Registry::rosetta(); nullopt is MISSING.
struct RosettaVector {
    std::string subject_id;
    std::vector<std::optional<int>> values;
    std::vector<std::vector<Provenance>> provenance;

    std::size_t present_count() const;
    std::optional<int> value(const Registry& registry, std::string_view rosetta_id) const;

    friend bool operator==(const RosettaVector&, const RosettaVector&) = default;
};

// Index into `entries` of the contribution the policy keeps. `entries` must
// be nonempty.
std::size_t resolve(const std::vector<Provenance>& entries, ConflictPolicy policy);

// Throws DomainError for an unknown instrument version, an unknown question
// id or an out-of-range choice. Several mapped items of the same record that
// hit one Rosetta question are resolved with `policy`.
RosettaVector translate(const AssessmentRecord& record, const Registry& registry,
                        ConflictPolicy policy = ConflictPolicy::max);

// Per-question union of several vectors of one subject; provenance is
// concatenated in input order and re-resolved with `policy`.
// Throws std::invalid_argument on an empty list or mixed subject ids.
RosettaVector merge(const std::vector<RosettaVector>& vectors, ConflictPolicy policy = ConflictPolicy::max);

struct LabeledCohort {
    std::vector<RosettaVector> vectors;   // ordered by subject id
    std::map<std::string, Label> labels;  // exactly the subjects of `vectors`
    std::vector<double> missing_fraction; // per Rosetta question
    ConflictPolicy policy = ConflictPolicy::max;

    // Counts in kLabels order (autism, adhd, neither).
    std::array<std::size_t, 3> class_counts() const;
    Label label_of(const RosettaVector& v) const { return labels.at(v.subject_id); }
};

// Groups records per subject, translates and merges them. Throws
// DomainError for a subject without a label or a subject labeled twice
// with different labels. Labels for subjects without records are ignored.
LabeledCohort build_cohort(const std::vector<AssessmentRecord>& records,
                           const std::vector<std::pair<std::string, Label>>& labels,
                           const Registry& registry, ConflictPolicy policy = ConflictPolicy::max,
                           unsigned workers = 1);

// Records file: subject_id, instrument, version, question_id, choice_index,
// date (optional). Rows sharing (subject, instrument, version, date) form one
// record, in order of first appearance.
std::vector<AssessmentRecord> parse_records(std::string_view source, const std::string& file = "records.tsv");
std::string serialize_records(const std::vector<AssessmentRecord>& records);

// Labels file: subject_id, label.
std::vector<std::pair<std::string, Label>> parse_labels(std::string_view source,
                                                        const std::string& file = "labels.tsv");
std::string serialize_labels(const std::vector<std::pair<std::string, Label>>& labels);

// Wide table: subject_id,label,<rosetta ids...>; empty cell = MISSING.
std::string fused_csv(const LabeledCohort& cohort, const Registry& registry);
// Reads fused_csv output back (no provenance). Columns must match the registry.
LabeledCohort parse_fused_csv(std::string_view source, const Registry& registry,
                              const std::string& file = "cohort.csv");
// Per-subject provenance as JSON, including the conflict policy used.
std::string provenance_json(const LabeledCohort& cohort, const Registry& registry);
// rosetta_id,missing_fraction
std::string missingness_csv(const LabeledCohort& cohort, const Registry& registry);

}  // namespace rosetta::fusion
