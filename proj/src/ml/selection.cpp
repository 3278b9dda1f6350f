#include "rosetta/ml/selection.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "rosetta/ml/auc.hpp"
#include "rosetta/parallel.hpp"
#include "rosetta/random.hpp"

namespace rosetta::ml {

std::vector<int> stratified_folds(std::span<const int> classes, int folds, std::uint64_t seed) {
    if (folds < 2) throw std::invalid_argument("folds must be >= 2");
    if (static_cast<std::size_t>(folds) > classes.size()) throw std::invalid_argument("more folds than rows");
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < classes.size(); ++i) by_class[classes[i]].push_back(i);
    std::vector<int> out(classes.size(), 0);
    // Continue the deal across classes so small classes do not all start at fold 0.
    std::size_t next = 0;
    for (auto& [cls, rows] : by_class) {
        Rng rng(substream_seed(seed, static_cast<std::uint64_t>(cls) + 1000));
        rng.shuffle(rows);
        for (auto r : rows) out[r] = static_cast<int>(next++ % static_cast<std::size_t>(folds));
    }
    return out;
}

std::string_view to_string(SelectionMethod m) {
    return m == SelectionMethod::greedy_forward ? "greedy_forward" : "gain_filter";
}

std::optional<SelectionMethod> selection_method_from_string(std::string_view s) {
    if (s == "greedy_forward") return SelectionMethod::greedy_forward;
    if (s == "gain_filter") return SelectionMethod::gain_filter;
    return std::nullopt;
}

double cv_auc(const BinnedDataset& binned, std::span<const std::size_t> columns, std::span<const int> folds,
              int fold_count, const GbdtParams& params) {
    const Dataset& data = binned.data();
    double total = 0.0;
    std::vector<double> row(columns.size());
    for (int k = 0; k < fold_count; ++k) {
        std::vector<std::size_t> train, test;
        for (std::size_t r = 0; r < data.rows(); ++r) (folds[r] == k ? test : train).push_back(r);
        const GbdtModel m = train_gbdt(binned, train, columns, params);
        std::vector<double> scores;
        std::vector<int> labels;
        for (auto r : test) {
            for (std::size_t c = 0; c < columns.size(); ++c) row[c] = data.at(r, columns[c]);
            scores.push_back(m.predict_proba(row));
            labels.push_back(data.y[r]);
        }
        total += auc(scores, labels);
    }
    return total / fold_count;
}

namespace {

void check_selection_input(const Dataset& data, const SelectionParams& p) {
    if (p.max_features < 1) throw std::invalid_argument("max_features must be >= 1");
    if (data.cols() == 0) throw std::invalid_argument("selection: no candidate features");
    std::size_t pos = 0;
    for (int v : data.y) pos += v ? 1 : 0;
    const std::size_t neg = data.rows() - pos;
    if (pos == 0 || neg == 0) throw std::invalid_argument("selection: both classes must be present");
    if (p.method == SelectionMethod::greedy_forward &&
        (pos < static_cast<std::size_t>(p.folds) || neg < static_cast<std::size_t>(p.folds))) {
        throw std::invalid_argument("selection: each class needs at least one sample per inner fold");
    }
}

std::vector<std::size_t> greedy_forward(const Dataset& data, const SelectionParams& p,
                                        const std::set<std::size_t>& free) {
    const auto folds = stratified_folds(data.y, p.folds, p.seed);
    const BinnedDataset binned(data);
    std::vector<std::size_t> selected;
    std::set<std::size_t> chosen;
    std::set<std::size_t> budget_used(free.begin(), free.end());
    const std::size_t budget = static_cast<std::size_t>(p.max_features);
    double current = 0.0;
    while (true) {
        std::vector<std::size_t> candidates;
        for (std::size_t c = 0; c < data.cols(); ++c) {
            if (chosen.count(c)) continue;
            if (!free.count(c) && budget_used.size() >= budget) continue;
            candidates.push_back(c);
        }
        if (candidates.empty() || selected.size() >= budget) break;
        std::vector<double> scores(candidates.size());
        parallel_for(candidates.size(), p.workers, [&](std::size_t i) {
            std::vector<std::size_t> cols = selected;
            cols.push_back(candidates[i]);
            scores[i] = cv_auc(binned, cols, folds, p.folds, p.model);
        });
        std::size_t best = 0;
        for (std::size_t i = 1; i < scores.size(); ++i) {
            if (scores[i] > scores[best]) best = i;
        }
        if (!selected.empty() && scores[best] - current < p.min_improvement) break;
        selected.push_back(candidates[best]);
        chosen.insert(candidates[best]);
        budget_used.insert(candidates[best]);
        current = scores[best];
    }
    return selected;
}

std::vector<std::size_t> gain_filter(const Dataset& data, const SelectionParams& p, const std::set<std::size_t>& free) {
    const GbdtModel m = train_gbdt(data, p.model);
    std::vector<std::size_t> order(data.cols());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](auto a, auto b) { return m.feature_gain[a] > m.feature_gain[b]; });
    std::vector<std::size_t> selected;
    std::set<std::size_t> budget_used(free.begin(), free.end());
    const std::size_t budget = static_cast<std::size_t>(p.max_features);
    for (auto c : order) {
        if (selected.size() >= budget) break;
        if (!selected.empty() && m.feature_gain[c] <= 0.0) break;
        if (!free.count(c) && budget_used.size() >= budget) continue;
        selected.push_back(c);
        budget_used.insert(c);
    }
    return selected;
}

}  // namespace

std::vector<std::size_t> select_columns(const Dataset& data, const SelectionParams& params,
                                        std::span<const std::size_t> free_columns) {
    check_selection_input(data, params);
    const std::set<std::size_t> free(free_columns.begin(), free_columns.end());
    return params.method == SelectionMethod::greedy_forward ? greedy_forward(data, params, free)
                                                            : gain_filter(data, params, free);
}

std::vector<std::string> select_features(const CohortTable& table, Stage stage, const SelectionParams& params) {
    const auto imputer = fit_imputer(table);
    std::vector<std::size_t> rows(table.rows());
    std::iota(rows.begin(), rows.end(), 0);
    const Dataset data = make_dataset(table, rows, imputer, stage);
    std::vector<std::string> out;
    for (auto c : select_columns(data, params)) out.push_back(data.feature_names[c]);
    return out;
}

}  // namespace rosetta::ml
