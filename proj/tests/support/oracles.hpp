#pragma once

// Reference implementations used by the unit and acceptance tests. Each one
// recomputes a result from first principles (linear scans, exhaustive
// enumeration, explicit folds) without touching the indexes or shortcuts the
// library uses.

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rosetta/analytics.hpp"
#include "rosetta/fusion.hpp"
#include "rosetta/ml/dataset.hpp"
#include "rosetta/ml/gbdt.hpp"
#include "rosetta/random.hpp"
#include "rosetta/registry.hpp"

namespace rosetta::oracle {

// ---- AUC ------------------------------------------------------------------

// Fraction of (positive, negative) pairs ranked correctly, ties counting half.
double pair_count_auc(std::span<const double> scores, std::span<const int> labels);

// ---- GBDT -----------------------------------------------------------------

// Random integer-valued design matrix with both classes present.
ml::Dataset random_dataset(Rng& rng, std::size_t rows, std::size_t cols, int levels);

struct StumpSplit {
    int feature = -1;
    double threshold = 0.0;
};

struct StumpResult {
    double best_gain = 0.0;              // 0 when no split helps
    std::vector<StumpSplit> optimal;     // every split within 1e-9 of the best
};

// Exhaustive search over every feature and every midpoint between distinct
// values, scoring the first boosting round from the log-odds base score.
StumpResult stump_oracle(const ml::Dataset& data, double lambda, int min_samples_leaf);

// Margins after one round with the given root split (feature -1: no split),
// including the halving line search on the mean training loss.
std::vector<double> stump_margins(const ml::Dataset& data, StumpSplit split, const ml::GbdtParams& params);

// ---- Crosswalk rules ------------------------------------------------------

struct MappingCase {
    Registry registry;  // ontology, versions, Rosetta questions and the crosswalk under test
};

// Small random registry with a crosswalk that is valid or broken in random ways
// (dangling ids, leaf mismatches, partial, out-of-range or non-monotone answer
// maps, sources linked twice, too many Rosetta codes).
MappingCase random_mapping_case(Rng& rng);

struct RuleTally {
    std::set<std::pair<std::string, std::size_t>> link_rules;  // (rule, crosswalk line) of per-link rules
    std::size_t many_to_one = 0;                              // sources with several distinct targets
    std::size_t duplicate_link = 0;                           // repeated (source, target) rows
    std::size_t minimal_code = 0;                             // Rosetta questions with too many codes

    bool accepted() const { return link_rules.empty() && many_to_one + duplicate_link + minimal_code == 0; }
    friend bool operator==(const RuleTally&, const RuleTally&) = default;
};

RuleTally brute_force_rules(const Registry& registry, const Crosswalk& crosswalk);
RuleTally tally(const std::vector<Diagnostic>& diagnostics);

// ---- Fusion ---------------------------------------------------------------

// Random well-formed records over the registry's versions, spread over
// `subjects` subject ids, with dates drawn from a small pool (ties and
// undated records included).
std::vector<fusion::AssessmentRecord> random_records(Rng& rng, const Registry& registry, std::size_t count,
                                                     std::size_t subjects);

// Fused values of one subject by direct crosswalk row lookups and an explicit
// policy fold over all contributions in record/response/crosswalk order.
std::vector<std::optional<int>> brute_force_fuse(const std::vector<const fusion::AssessmentRecord*>& records,
                                                 const Registry& registry, fusion::ConflictPolicy policy);

// ---- Overlap --------------------------------------------------------------

// Random registry with up to `max_instruments` instruments and up to
// `max_rosetta` Rosetta questions, linked sparsely (some links dangle).
Registry random_overlap_registry(Rng& rng, std::size_t max_instruments, std::size_t max_rosetta);

// Overlap matrix by set enumeration over the crosswalk rows.
analytics::OverlapMatrix brute_force_overlap(const Registry& registry);

// ---- Fixtures -------------------------------------------------------------

// Cognitive/Behavioral/{Social,Sensory}, Cognitive/Executive Functioning/
// Attention, Motor/Fine, Somatic/Sleep.
OntologyTree small_ontology();

}  // namespace rosetta::oracle
