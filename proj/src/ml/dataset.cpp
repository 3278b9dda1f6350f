#include "rosetta/ml/dataset.hpp"

namespace rosetta::ml {

std::optional<std::size_t> CohortTable::column_of(std::string_view feature_id) const {
    for (std::size_t c = 0; c < feature_ids.size(); ++c) {
        if (feature_ids[c] == feature_id) return c;
    }
    return std::nullopt;
}

CohortTable make_table(const fusion::LabeledCohort& cohort, const Registry& registry) {
    CohortTable t;
    for (const auto& q : registry.rosetta()) {
        t.feature_ids.push_back(q.id);
        t.code_counts.push_back(static_cast<int>(q.codes.size()));
    }
    t.values.reserve(cohort.vectors.size() * t.cols());
    for (const auto& v : cohort.vectors) {
        t.subject_ids.push_back(v.subject_id);
        t.labels.push_back(cohort.label_of(v));
        t.values.insert(t.values.end(), v.values.begin(), v.values.end());
    }
    return t;
}

Dataset Dataset::subset(std::span<const std::size_t> rs, std::span<const std::size_t> cs) const {
    Dataset d;
    d.ids.reserve(rs.size());
    d.y.reserve(rs.size());
    for (auto c : cs) d.feature_names.push_back(feature_names[c]);
    d.x.reserve(rs.size() * cs.size());
    for (auto r : rs) {
        d.ids.push_back(ids[r]);
        d.y.push_back(y[r]);
        for (auto c : cs) d.x.push_back(at(r, c));
    }
    return d;
}

std::optional<int> stage_target(Stage stage, fusion::Label label) {
    using fusion::Label;
    if (stage == Stage::condition) return label == Label::neither ? 0 : 1;
    switch (label) {
        case Label::autism: return 1;
        case Label::adhd: return 0;
        case Label::neither: return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace rosetta::ml
