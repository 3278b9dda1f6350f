#pragma once

// Two-stage cascade: condition vs neither, then autism vs ADHD for rows the
// first stage flags.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rosetta/ml/gbdt.hpp"
#include "rosetta/ml/imputer.hpp"
#include "rosetta/ml/selection.hpp"

namespace rosetta::ml {

struct CascadeParams {
    GbdtParams model;
    SelectionParams selection;
    double threshold = 0.5;  // stage-1 probability at or above which stage 2 runs
    ImputeStrategy impute = ImputeStrategy::mode;
    std::uint64_t seed = 0;
    unsigned workers = 1;

    friend bool operator==(const CascadeParams&, const CascadeParams&) = default;
};

struct CascadeModel {
    ImputationModel imputer;                 // over all Rosetta questions
    std::vector<std::string> selected;       // union of stage features, selection order
    GbdtModel stage1;                        // features: subset of `selected`
    GbdtModel stage2;
    double threshold = 0.5;
    CascadeParams params;

    bool fitted() const;
    friend bool operator==(const CascadeModel&, const CascadeModel&) = default;
};

struct CascadePrediction {
    fusion::Label label = fusion::Label::neither;
    double stage1_probability = 0.0;
    std::optional<double> stage2_probability;  // absent when stage 2 was skipped
};

struct CascadeStats {
    std::size_t stage1_calls = 0;
    std::size_t stage2_calls = 0;
};

// Fits imputer, per-stage feature selection and both stages on `rows`.
// Stage-1 selection runs first; stage-2 selection may reuse its features
// without spending budget, so at most max_features questions are used.
CascadeModel train_cascade(const CohortTable& table, std::span<const std::size_t> rows, const CascadeParams& params);
CascadeModel train_cascade(const CohortTable& table, const CascadeParams& params);

// `imputed` is a complete row aligned with model.imputer.features.
// "neither" iff p1 < threshold; otherwise autism iff p2 >= 0.5.
// Throws std::logic_error for an unfitted model.
CascadePrediction predict_cascade(std::span<const int> imputed, const CascadeModel& model,
                                  CascadeStats* stats = nullptr);

// Probability of one stage (1 or 2) without gating, for evaluation.
double stage_probability(std::span<const int> imputed, const CascadeModel& model, int stage);

// Imputes a raw row first.
CascadePrediction predict_raw(std::span<const std::optional<int>> row, const CascadeModel& model,
                              CascadeStats* stats = nullptr);

// Versioned plain-text artifact. Reals use shortest round-trip formatting, so
// a loaded model predicts bit-identically. load throws ParseError.
std::string save_cascade(const CascadeModel& model);
CascadeModel load_cascade(std::string_view text, const std::string& file = "model.txt");

}  // namespace rosetta::ml
