#include "rosetta/ml/evaluation.hpp"

#include <stdexcept>

#include "json.hpp"
#include "rosetta/ml/auc.hpp"
#include "rosetta/random.hpp"
#include "rosetta/text.hpp"

namespace rosetta::ml {

namespace {

std::size_t label_index(fusion::Label l) { return static_cast<std::size_t>(l); }

bool has_both(const std::vector<int>& y) {
    bool zero = false, one = false;
    for (int v : y) (v ? one : zero) = true;
    return zero && one;
}

}  // namespace

EvalReport cross_validate(const CohortTable& table, const CvParams& params) {
    std::vector<int> classes;
    for (auto l : table.labels) classes.push_back(static_cast<int>(l));
    const auto seed = params.cascade.seed;
    const auto assignment = stratified_folds(classes, params.folds, seed);

    EvalReport report;
    report.folds = params.folds;
    report.seed = seed;
    report.threshold = params.cascade.threshold;
    for (int k = 0; k < params.folds; ++k) {
        std::vector<std::size_t> train, test;
        for (std::size_t r = 0; r < table.rows(); ++r) (assignment[r] == k ? test : train).push_back(r);

        CascadeParams cp = params.cascade;
        cp.seed = substream_seed(seed, 100 + static_cast<std::uint64_t>(k));
        const CascadeModel model = train_cascade(table, train, cp);

        std::vector<double> s1, s2;
        std::vector<int> y1, y2;
        for (auto r : test) {
            const auto imputed = model.imputer.impute(table.row(r));
            s1.push_back(stage_probability(imputed, model, 1));
            y1.push_back(*stage_target(Stage::condition, table.labels[r]));
            if (auto t = stage_target(Stage::subtype, table.labels[r])) {
                s2.push_back(stage_probability(imputed, model, 2));
                y2.push_back(*t);
            }
        }
        const std::string where = "fold " + std::to_string(k + 1);
        if (!has_both(y1)) throw std::invalid_argument(where + " lacks a condition or a neither sample");
        if (!has_both(y2)) throw std::invalid_argument(where + " lacks an autism or an ADHD sample");

        FoldResult f;
        f.fold = k + 1;
        f.train_size = train.size();
        f.test_size = test.size();
        f.auc_stage1 = auc(s1, y1);
        f.auc_stage2 = auc(s2, y2);
        f.features = model.selected;
        report.auc_stage1 += f.auc_stage1;
        report.auc_stage2 += f.auc_stage2;
        report.per_fold.push_back(std::move(f));
    }
    report.auc_stage1 /= params.folds;
    report.auc_stage2 /= params.folds;
    return report;
}

std::string eval_report_csv(const EvalReport& r) {
    std::string out = "fold,train_size,test_size,auc_stage1,auc_stage2,feature_count\n";
    for (const auto& f : r.per_fold) {
        out += std::to_string(f.fold) + "," + std::to_string(f.train_size) + "," + std::to_string(f.test_size) + "," +
               text::format_double(f.auc_stage1) + "," + text::format_double(f.auc_stage2) + "," +
               std::to_string(f.features.size()) + "\n";
    }
    out += "mean,,," + text::format_double(r.auc_stage1) + "," + text::format_double(r.auc_stage2) + ",\n";
    return out;
}

std::string eval_report_json(const EvalReport& r) {
    nlohmann::ordered_json j;
    j["seed"] = r.seed;
    j["folds"] = r.folds;
    j["threshold"] = r.threshold;
    j["stage2_population"] = kStage2Population;
    j["auc_stage1"] = r.auc_stage1;
    j["auc_stage2"] = r.auc_stage2;
    auto& folds = j["per_fold"] = nlohmann::ordered_json::array();
    for (const auto& f : r.per_fold) {
        nlohmann::ordered_json e;
        e["fold"] = f.fold;
        e["train_size"] = f.train_size;
        e["test_size"] = f.test_size;
        e["auc_stage1"] = f.auc_stage1;
        e["auc_stage2"] = f.auc_stage2;
        e["features"] = f.features;
        folds.push_back(std::move(e));
    }
    return j.dump(2) + "\n";
}

ModelEvaluation evaluate_model(const CascadeModel& model, const CohortTable& table) {
    if (!model.fitted()) throw std::logic_error("cascade model is not fitted");
    if (model.imputer.features != table.feature_ids) throw std::invalid_argument("cohort columns do not match model");
    ModelEvaluation ev;
    CascadeStats stats;
    std::vector<double> s1, s2;
    std::vector<int> y1, y2;
    for (std::size_t r = 0; r < table.rows(); ++r) {
        const auto imputed = model.imputer.impute(table.row(r));
        Prediction p{table.subject_ids[r], table.labels[r], predict_cascade(imputed, model, &stats)};
        s1.push_back(p.predicted.stage1_probability);
        y1.push_back(*stage_target(Stage::condition, p.truth));
        if (auto t = stage_target(Stage::subtype, p.truth)) {
            s2.push_back(stage_probability(imputed, model, 2));
            y2.push_back(*t);
        }
        ev.confusion[label_index(p.truth)][label_index(p.predicted.label)]++;
        ev.predictions.push_back(std::move(p));
    }
    ev.stage2_calls = stats.stage2_calls;
    if (has_both(y1)) ev.auc_stage1 = auc(s1, y1);
    if (has_both(y2)) ev.auc_stage2 = auc(s2, y2);
    return ev;
}

std::string predictions_csv(const ModelEvaluation& ev) {
    std::string out = "subject_id,label,predicted,p_stage1,p_stage2\n";
    for (const auto& p : ev.predictions) {
        out += text::csv_field(p.subject_id) + "," + std::string(fusion::to_string(p.truth)) + "," +
               std::string(fusion::to_string(p.predicted.label)) + "," +
               text::format_double(p.predicted.stage1_probability) + "," +
               (p.predicted.stage2_probability ? text::format_double(*p.predicted.stage2_probability) : "") + "\n";
    }
    return out;
}

std::string evaluation_json(const ModelEvaluation& ev) {
    nlohmann::ordered_json j;
    j["samples"] = ev.predictions.size();
    j["stage2_population"] = kStage2Population;
    j["auc_stage1"] = ev.auc_stage1 ? nlohmann::ordered_json(*ev.auc_stage1) : nlohmann::ordered_json(nullptr);
    j["auc_stage2"] = ev.auc_stage2 ? nlohmann::ordered_json(*ev.auc_stage2) : nlohmann::ordered_json(nullptr);
    j["stage2_calls"] = ev.stage2_calls;
    auto& conf = j["confusion"] = nlohmann::ordered_json::object();
    for (auto t : fusion::kLabels) {
        auto& row = conf[std::string(fusion::to_string(t))] = nlohmann::ordered_json::object();
        for (auto p : fusion::kLabels) row[std::string(fusion::to_string(p))] = ev.confusion[label_index(t)][label_index(p)];
    }
    return j.dump(2) + "\n";
}

}  // namespace rosetta::ml
