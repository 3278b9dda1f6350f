#pragma once

// Tabular views of a fused cohort for model fitting.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rosetta/fusion.hpp"
#include "rosetta/registry.hpp"

namespace rosetta::ml {

// Fused cohort as a dense table with explicit MISSING cells. Rows follow the
// cohort's subject order, columns the registry's Rosetta questions.
struct CohortTable {
    std::vector<std::string> subject_ids;
    std::vector<fusion::Label> labels;
    std::vector<std::string> feature_ids;
    std::vector<int> code_counts;              // per column
    std::vector<std::optional<int>> values;    // row-major

    std::size_t rows() const { return subject_ids.size(); }
    std::size_t cols() const { return feature_ids.size(); }
    std::optional<int> at(std::size_t r, std::size_t c) const { return values[r * cols() + c]; }
    std::span<const std::optional<int>> row(std::size_t r) const {
        return {values.data() + r * cols(), cols()};
    }
    std::optional<std::size_t> column_of(std::string_view feature_id) const;
};

CohortTable make_table(const fusion::LabeledCohort& cohort, const Registry& registry);

// Complete numeric design matrix with binary targets.
struct Dataset {
    std::vector<std::string> ids;            // sample ids, used for canonical ordering
    std::vector<std::string> feature_names;
    std::vector<double> x;                   // row-major
    std::vector<int> y;                      // 0/1

    std::size_t rows() const { return ids.size(); }
    std::size_t cols() const { return feature_names.size(); }
    double at(std::size_t r, std::size_t c) const { return x[r * cols() + c]; }
    std::span<const double> row(std::size_t r) const { return {x.data() + r * cols(), cols()}; }

    // Copy restricted to the given rows and columns, in the given order.
    Dataset subset(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const;
};

// The two binary tasks of the cascade.
enum class Stage { condition, subtype };

// stage condition: autism/adhd -> 1, neither -> 0 (all rows).
// stage subtype:   autism -> 1, adhd -> 0 (neither rows excluded).
std::optional<int> stage_target(Stage stage, fusion::Label label);

}  // namespace rosetta::ml
