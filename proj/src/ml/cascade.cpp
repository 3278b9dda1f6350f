#include "rosetta/ml/cascade.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "rosetta/random.hpp"

namespace rosetta::ml {

bool CascadeModel::fitted() const {
    return imputer.fitted && !selected.empty() && !stage1.features.empty() && !stage2.features.empty();
}

namespace {

std::vector<std::string> names_of(const Dataset& d, std::span<const std::size_t> cols) {
    std::vector<std::string> out;
    for (auto c : cols) out.push_back(d.feature_names[c]);
    return out;
}

std::vector<double> stage_row(std::span<const int> imputed, const ImputationModel& imp, const GbdtModel& stage) {
    std::vector<double> row;
    row.reserve(stage.features.size());
    for (const auto& f : stage.features) {
        std::size_t c = 0;
        while (c < imp.features.size() && imp.features[c] != f) ++c;
        if (c == imp.features.size()) throw std::logic_error("model feature " + f + " is not an imputer column");
        row.push_back(static_cast<double>(imputed[c]));
    }
    return row;
}

}  // namespace

CascadeModel train_cascade(const CohortTable& table, std::span<const std::size_t> rows, const CascadeParams& params) {
    if (!(params.threshold > 0.0 && params.threshold < 1.0)) throw std::invalid_argument("threshold must be in (0, 1)");
    CascadeModel m;
    m.params = params;
    m.threshold = params.threshold;
    m.imputer = fit_imputer(table, rows, params.impute);

    const Dataset d1 = make_dataset(table, rows, m.imputer, Stage::condition);
    const Dataset d2 = make_dataset(table, rows, m.imputer, Stage::subtype);

    SelectionParams sel = params.selection;
    sel.workers = params.workers;
    sel.seed = substream_seed(params.seed, 1);
    const auto cols1 = select_columns(d1, sel);
    sel.seed = substream_seed(params.seed, 2);
    const auto cols2 = select_columns(d2, sel, cols1);

    m.selected = names_of(d1, cols1);
    for (auto c : cols2) {
        const auto& name = d2.feature_names[c];
        if (std::find(m.selected.begin(), m.selected.end(), name) == m.selected.end()) m.selected.push_back(name);
    }

    std::vector<std::size_t> all1(d1.rows()), all2(d2.rows());
    std::iota(all1.begin(), all1.end(), 0);
    std::iota(all2.begin(), all2.end(), 0);
    GbdtParams gp = params.model;
    gp.seed = substream_seed(params.seed, 3);
    m.stage1 = train_gbdt(d1.subset(all1, cols1), gp);
    gp.seed = substream_seed(params.seed, 4);
    m.stage2 = train_gbdt(d2.subset(all2, cols2), gp);
    return m;
}

CascadeModel train_cascade(const CohortTable& table, const CascadeParams& params) {
    std::vector<std::size_t> rows(table.rows());
    std::iota(rows.begin(), rows.end(), 0);
    return train_cascade(table, rows, params);
}

CascadePrediction predict_cascade(std::span<const int> imputed, const CascadeModel& model, CascadeStats* stats) {
    if (!model.fitted()) throw std::logic_error("cascade model is not fitted");
    if (imputed.size() != model.imputer.features.size()) throw std::invalid_argument("row length does not match model");
    CascadePrediction out;
    out.stage1_probability = model.stage1.predict_proba(stage_row(imputed, model.imputer, model.stage1));
    if (stats) stats->stage1_calls++;
    if (out.stage1_probability < model.threshold) {
        out.label = fusion::Label::neither;
        return out;
    }
    const double p2 = model.stage2.predict_proba(stage_row(imputed, model.imputer, model.stage2));
    if (stats) stats->stage2_calls++;
    out.stage2_probability = p2;
    out.label = p2 >= 0.5 ? fusion::Label::autism : fusion::Label::adhd;
    return out;
}

double stage_probability(std::span<const int> imputed, const CascadeModel& model, int stage) {
    if (!model.fitted()) throw std::logic_error("cascade model is not fitted");
    if (stage != 1 && stage != 2) throw std::invalid_argument("stage must be 1 or 2");
    const auto& g = stage == 1 ? model.stage1 : model.stage2;
    return g.predict_proba(stage_row(imputed, model.imputer, g));
}

CascadePrediction predict_raw(std::span<const std::optional<int>> row, const CascadeModel& model, CascadeStats* stats) {
    if (!model.fitted()) throw std::logic_error("cascade model is not fitted");
    const auto imputed = model.imputer.impute(row);
    return predict_cascade(imputed, model, stats);
}

}  // namespace rosetta::ml
