#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rosetta/ml/dataset.hpp"

namespace rosetta::ml {

enum class ImputeStrategy { mode, median };

std::string_view to_string(ImputeStrategy s);
std::optional<ImputeStrategy> impute_strategy_from_string(std::string_view s);

struct FeatureFill {
    int value = 1;
    ImputeStrategy strategy = ImputeStrategy::mode;
    bool fallback = false;  // no observed value in the fitting rows; mid-code used

    friend bool operator==(const FeatureFill&, const FeatureFill&) = default;
};

struct ImputationModel {
    std::vector<std::string> features;
    std::vector<FeatureFill> fills;
    bool fitted = false;

    // Fills MISSING cells; observed values are copied. Throws std::logic_error
    // when unfitted and std::invalid_argument on a length mismatch.
    std::vector<int> impute(std::span<const std::optional<int>> row) const;

    friend bool operator==(const ImputationModel&, const ImputationModel&) = default;
};

// Fits on the given rows only. Mode ties go to the lower code; median is the
// lower median. A column with no observed value falls back to the mid code
// (1 + m) / 2 and is flagged.
ImputationModel fit_imputer(const CohortTable& table, std::span<const std::size_t> rows,
                            ImputeStrategy strategy = ImputeStrategy::mode);
ImputationModel fit_imputer(const CohortTable& table, ImputeStrategy strategy = ImputeStrategy::mode);

// Imputed design matrix for one stage over the given rows (rows whose label
// has no target in that stage are dropped).
Dataset make_dataset(const CohortTable& table, std::span<const std::size_t> rows, const ImputationModel& imputer,
                     Stage stage);

}  // namespace rosetta::ml
