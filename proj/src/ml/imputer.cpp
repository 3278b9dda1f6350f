#include "rosetta/ml/imputer.hpp"

#include <numeric>
#include <stdexcept>

namespace rosetta::ml {

std::string_view to_string(ImputeStrategy s) {
    return s == ImputeStrategy::mode ? "mode" : "median";
}

std::optional<ImputeStrategy> impute_strategy_from_string(std::string_view s) {
    if (s == "mode") return ImputeStrategy::mode;
    if (s == "median") return ImputeStrategy::median;
    return std::nullopt;
}

std::vector<int> ImputationModel::impute(std::span<const std::optional<int>> row) const {
    if (!fitted) throw std::logic_error("imputer is not fitted");
    if (row.size() != fills.size()) throw std::invalid_argument("impute: row length does not match imputer");
    std::vector<int> out(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) out[i] = row[i] ? *row[i] : fills[i].value;
    return out;
}

ImputationModel fit_imputer(const CohortTable& table, std::span<const std::size_t> rows, ImputeStrategy strategy) {
    ImputationModel m;
    m.features = table.feature_ids;
    m.fills.resize(table.cols());
    for (std::size_t c = 0; c < table.cols(); ++c) {
        const int codes = table.code_counts[c];
        std::vector<std::size_t> counts(static_cast<std::size_t>(codes) + 1, 0);
        std::size_t observed = 0;
        for (auto r : rows) {
            if (auto v = table.at(r, c); v && *v >= 1 && *v <= codes) {
                counts[static_cast<std::size_t>(*v)]++;
                ++observed;
            }
        }
        FeatureFill& f = m.fills[c];
        f.strategy = strategy;
        if (observed == 0) {
            f.value = (1 + codes) / 2;
            f.fallback = true;
            continue;
        }
        if (strategy == ImputeStrategy::mode) {
            int best = 1;
            for (int k = 2; k <= codes; ++k) {
                if (counts[static_cast<std::size_t>(k)] > counts[static_cast<std::size_t>(best)]) best = k;
            }
            f.value = best;
        } else {
            // Lower median: the ceil(n/2)-th smallest observation.
            const std::size_t target = (observed + 1) / 2;
            std::size_t seen = 0;
            for (int k = 1; k <= codes; ++k) {
                seen += counts[static_cast<std::size_t>(k)];
                if (seen >= target) {
                    f.value = k;
                    break;
                }
            }
        }
    }
    m.fitted = true;
    return m;
}

ImputationModel fit_imputer(const CohortTable& table, ImputeStrategy strategy) {
    std::vector<std::size_t> rows(table.rows());
    std::iota(rows.begin(), rows.end(), 0);
    return fit_imputer(table, rows, strategy);
}

Dataset make_dataset(const CohortTable& table, std::span<const std::size_t> rows, const ImputationModel& imputer,
                     Stage stage) {
    if (imputer.features != table.feature_ids) throw std::invalid_argument("imputer columns do not match cohort");
    Dataset d;
    d.feature_names = table.feature_ids;
    for (auto r : rows) {
        auto target = stage_target(stage, table.labels[r]);
        if (!target) continue;
        d.ids.push_back(table.subject_ids[r]);
        d.y.push_back(*target);
        for (int v : imputer.impute(table.row(r))) d.x.push_back(static_cast<double>(v));
    }
    return d;
}

}  // namespace rosetta::ml
