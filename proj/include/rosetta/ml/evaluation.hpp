#pragma once

// Cross-validated AUC of the cascade and scoring of a trained model.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rosetta/ml/cascade.hpp"

namespace rosetta::ml {

// Stage-2 AUC is computed over rows whose true label is autism or ADHD,
// whatever stage 1 predicted.
inline constexpr std::string_view kStage2Population = "true_positives";

struct FoldResult {
    int fold = 0;
    std::size_t train_size = 0;
    std::size_t test_size = 0;
    double auc_stage1 = 0.0;
    double auc_stage2 = 0.0;
    std::vector<std::string> features;  // selected on this fold's training rows
};

struct EvalReport {
    double auc_stage1 = 0.0;  // mean over folds
    double auc_stage2 = 0.0;
    int folds = 0;
    std::vector<FoldResult> per_fold;
    std::uint64_t seed = 0;
    double threshold = 0.5;
};

struct CvParams {
    int folds = 5;
    CascadeParams cascade;  // cascade.seed also drives the fold split
};

// Folds are stratified by the three-class label. Every fold is fitted from
// scratch: imputer, selection and both stages see training rows only.
// Throws std::invalid_argument when a test fold lacks a class of either stage.
EvalReport cross_validate(const CohortTable& table, const CvParams& params);

std::string eval_report_csv(const EvalReport& report);
std::string eval_report_json(const EvalReport& report);

struct Prediction {
    std::string subject_id;
    fusion::Label truth = fusion::Label::neither;
    CascadePrediction predicted;
};

struct ModelEvaluation {
    std::vector<Prediction> predictions;
    std::optional<double> auc_stage1;  // absent when a class is missing
    std::optional<double> auc_stage2;
    std::size_t stage2_calls = 0;
    // confusion[truth][predicted] in kLabels order
    std::array<std::array<std::size_t, 3>, 3> confusion{};
};

ModelEvaluation evaluate_model(const CascadeModel& model, const CohortTable& table);

std::string predictions_csv(const ModelEvaluation& evaluation);
std::string evaluation_json(const ModelEvaluation& evaluation);

}  // namespace rosetta::ml
