#pragma once

// Stratified fold assignment and feature selection.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rosetta/ml/gbdt.hpp"
#include "rosetta/ml/imputer.hpp"

namespace rosetta::ml {

// Fold id in [0, folds) per row. Each class is shuffled with `seed` and dealt
// round-robin, so class proportions per fold differ by at most one sample.
// Throws std::invalid_argument when folds < 2 or folds > rows.
std::vector<int> stratified_folds(std::span<const int> classes, int folds, std::uint64_t seed);

enum class SelectionMethod { greedy_forward, gain_filter };

std::string_view to_string(SelectionMethod m);
std::optional<SelectionMethod> selection_method_from_string(std::string_view s);

struct SelectionParams {
    int max_features = 30;
    int folds = 3;                 // inner CV folds scoring each candidate set
    std::uint64_t seed = 0;
    double min_improvement = 1e-3; // greedy stops when the best gain is smaller
    SelectionMethod method = SelectionMethod::greedy_forward;
    GbdtParams model{.rounds = 12, .max_depth = 2, .learning_rate = 0.3, .min_samples_leaf = 5};
    unsigned workers = 1;

    friend bool operator==(const SelectionParams&, const SelectionParams&) = default;
};

// Mean inner-CV AUC of a GBDT on the given columns.
double cv_auc(const BinnedDataset& data, std::span<const std::size_t> columns, std::span<const int> folds,
              int fold_count, const GbdtParams& params);

// Column indices into `data` in selection order.
//
// Greedy forward: repeatedly adds the column with the best mean inner-CV AUC;
// at least one column is chosen, then it stops once the gain drops below
// min_improvement or the budget is spent. Columns listed in `free_columns`
// do not consume budget, so |free_columns ∪ result| <= max_features.
// Gain filter: ranks columns by total split gain of one full GBDT fit.
//
// Throws std::invalid_argument when max_features < 1 or a class is absent.
std::vector<std::size_t> select_columns(const Dataset& data, const SelectionParams& params,
                                        std::span<const std::size_t> free_columns = {});

// Convenience over a whole cohort for one stage: imputes with a mode imputer
// fitted on all rows and returns Rosetta ids.
std::vector<std::string> select_features(const CohortTable& table, Stage stage, const SelectionParams& params);

}  // namespace rosetta::ml
