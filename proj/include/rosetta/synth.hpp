#pragma once

// Labeled synthetic cohorts. Codes are sampled per class in Rosetta space and
// then inverted through the crosswalk into raw instrument responses.

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rosetta/fusion.hpp"
#include "rosetta/registry.hpp"

namespace rosetta::synth {

struct CoverageEntry {
    std::string instrument;
    std::string version;
    double weight = 1.0;

    friend bool operator==(const CoverageEntry&, const CoverageEntry&) = default;
};

// Per-class code probabilities for one Rosetta question, in fusion::kLabels order.
using ClassDistributions = std::array<std::vector<double>, 3>;

struct GeneratorSpec {
    std::uint64_t seed = 0;
    std::array<std::size_t, 3> class_counts{};  // autism, adhd, neither
    double effect_size = 1.0;
    double second_version_probability = 0.3;
    // Empty: uniform over the case-study instruments, split evenly across
    // each instrument's versions.
    std::vector<CoverageEntry> coverage;
    // Overrides of the generated distributions, keyed by Rosetta id.
    std::map<std::string, ClassDistributions> distributions;

    friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;
};

GeneratorSpec default_spec();

// Throws std::invalid_argument: unknown version or Rosetta id, negative or
// all-zero weights, bad probabilities, distributions not summing to 1.
void check_spec(const GeneratorSpec& spec, const Registry& registry);

// JSON document with keys seed, class_counts {autism, adhd, neither},
// effect_size, second_version_probability, coverage [...], distributions {...}.
GeneratorSpec parse_spec(std::string_view json, const std::string& file = "spec.json");
std::string serialize_spec(const GeneratorSpec& spec);

std::vector<CoverageEntry> effective_coverage(const GeneratorSpec& spec, const Registry& registry);

// Which label a question's leaf separates.
enum class QuestionGroup { autism, adhd, general };
QuestionGroup question_group(const LeafCategory& leaf);

// Class-conditional code distributions for every Rosetta question. With
// effect size 0 all classes share the uniform distribution.
std::vector<ClassDistributions> class_distributions(const GeneratorSpec& spec, const Registry& registry);

struct SyntheticSubject {
    std::string subject_id;
    fusion::Label label = fusion::Label::neither;
    std::vector<std::size_t> versions;        // registry version indexes
    std::vector<std::optional<int>> codes;    // sampled code per Rosetta question; nullopt if unanswered
};

struct SyntheticCohort {
    std::vector<fusion::AssessmentRecord> records;
    std::vector<std::pair<std::string, fusion::Label>> labels;
    std::vector<SyntheticSubject> subjects;
};

// Deterministic in the seed; each subject draws from its own substream, so
// the result does not depend on `workers`.
SyntheticCohort generate(const GeneratorSpec& spec, const Registry& registry, unsigned workers = 1);

// Probability that a subject has no assigned version linked to each Rosetta
// question, under the spec's coverage plan.
std::vector<double> expected_missingness(const GeneratorSpec& spec, const Registry& registry);

}  // namespace rosetta::synth
