#include "rosetta/fusion.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

#include "json.hpp"
#include "rosetta/error.hpp"
#include "rosetta/parallel.hpp"
#include "rosetta/text.hpp"

namespace rosetta::fusion {

std::string_view to_string(ConflictPolicy p) {
    switch (p) {
        case ConflictPolicy::max: return "max";
        case ConflictPolicy::first: return "first";
        case ConflictPolicy::latest: return "latest";
    }
    return "max";
}

std::optional<ConflictPolicy> policy_from_string(std::string_view s) {
    if (s == "max") return ConflictPolicy::max;
    if (s == "first") return ConflictPolicy::first;
    if (s == "latest") return ConflictPolicy::latest;
    return std::nullopt;
}

std::string_view to_string(Label l) {
    switch (l) {
        case Label::autism: return "autism";
        case Label::adhd: return "adhd";
        case Label::neither: return "neither";
    }
    return "neither";
}

std::optional<Label> label_from_string(std::string_view s) {
    if (s == "autism") return Label::autism;
    if (s == "adhd") return Label::adhd;
    if (s == "neither") return Label::neither;
    return std::nullopt;
}

std::size_t RosettaVector::present_count() const {
    return static_cast<std::size_t>(std::count_if(values.begin(), values.end(), [](const auto& v) { return v.has_value(); }));
}

std::optional<int> RosettaVector::value(const Registry& registry, std::string_view rosetta_id) const {
    auto r = registry.rosetta_index(rosetta_id);
    if (!r || *r >= values.size()) return std::nullopt;
    return values[*r];
}

std::size_t resolve(const std::vector<Provenance>& entries, ConflictPolicy policy) {
    if (entries.empty()) throw std::invalid_argument("resolve: no contributions");
    std::size_t best = 0;
    switch (policy) {
        case ConflictPolicy::first:
            return 0;
        case ConflictPolicy::max:
            for (std::size_t i = 1; i < entries.size(); ++i) {
                if (entries[i].code > entries[best].code) best = i;
            }
            return best;
        case ConflictPolicy::latest:
            for (std::size_t i = 1; i < entries.size(); ++i) {
                // nullopt < any date; >= lets later positions win ties
                if (entries[i].date >= entries[best].date) best = i;
            }
            return best;
    }
    return best;
}

namespace {

void resolve_all(RosettaVector& v, ConflictPolicy policy) {
    for (std::size_t r = 0; r < v.provenance.size(); ++r) {
        if (v.provenance[r].empty()) {
            v.values[r] = std::nullopt;
        } else {
            v.values[r] = v.provenance[r][resolve(v.provenance[r], policy)].code;
        }
    }
}

bool valid_iso_date(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    int y = 0, m = 0, d = 0;
    if (!text::parse_int(s.substr(0, 4), y) || !text::parse_int(s.substr(5, 2), m) ||
        !text::parse_int(s.substr(8, 2), d))
        return false;
    return m >= 1 && m <= 12 && d >= 1 && d <= 31;
}

}  // namespace

RosettaVector translate(const AssessmentRecord& record, const Registry& registry, ConflictPolicy policy) {
    const auto v = registry.version_index(record.instrument, record.version);
    if (!v) {
        throw DomainError("subject " + record.subject_id + ": unknown instrument version '" + record.instrument +
                          " / " + record.version + "'");
    }
    const auto& version = registry.versions()[*v];
    RosettaVector out;
    out.subject_id = record.subject_id;
    out.values.assign(registry.rosetta().size(), std::nullopt);
    out.provenance.assign(registry.rosetta().size(), {});

    for (const auto& [qid, choice] : record.responses) {
        const auto q = registry.question_index(*v, qid);
        if (!q) {
            throw DomainError("subject " + record.subject_id + ": question '" + qid + "' is not part of " +
                              version.key());
        }
        const int choices = version.questions[*q].scale.size();
        if (choice < 1 || choice > choices) {
            throw DomainError("subject " + record.subject_id + ": choice " + std::to_string(choice) +
                              " out of range 1.." + std::to_string(choices) + " for " + version.key() + " #" + qid);
        }
        for (auto li : registry.links_for(*v, *q)) {
            const auto& link = registry.resolved_links()[li];
            out.provenance[link.rosetta].push_back(
                Provenance{record.instrument, record.version, qid, choice, link.code_for(choice), record.date});
        }
    }
    resolve_all(out, policy);
    return out;
}

RosettaVector merge(const std::vector<RosettaVector>& vectors, ConflictPolicy policy) {
    if (vectors.empty()) throw std::invalid_argument("merge: empty vector list");
    if (vectors.size() == 1) return vectors.front();
    RosettaVector out;
    out.subject_id = vectors.front().subject_id;
    const auto width = vectors.front().values.size();
    out.values.assign(width, std::nullopt);
    out.provenance.assign(width, {});
    for (const auto& v : vectors) {
        if (v.subject_id != out.subject_id) {
            throw std::invalid_argument("merge: mixed subjects " + out.subject_id + " and " + v.subject_id);
        }
        if (v.values.size() != width || v.provenance.size() != width) {
            throw std::invalid_argument("merge: vectors built from different registries");
        }
        for (std::size_t r = 0; r < width; ++r) {
            out.provenance[r].insert(out.provenance[r].end(), v.provenance[r].begin(), v.provenance[r].end());
        }
    }
    resolve_all(out, policy);
    return out;
}

std::array<std::size_t, 3> LabeledCohort::class_counts() const {
    std::array<std::size_t, 3> counts{};
    for (const auto& v : vectors) counts[static_cast<std::size_t>(labels.at(v.subject_id))]++;
    return counts;
}

LabeledCohort build_cohort(const std::vector<AssessmentRecord>& records,
                           const std::vector<std::pair<std::string, Label>>& labels, const Registry& registry,
                           ConflictPolicy policy, unsigned workers) {
    std::map<std::string, Label> label_of;
    for (const auto& [subject, label] : labels) {
        auto [it, fresh] = label_of.emplace(subject, label);
        if (!fresh && it->second != label) {
            throw DomainError("subject " + subject + " has conflicting labels " + std::string(to_string(it->second)) +
                              " and " + std::string(to_string(label)));
        }
    }
    std::map<std::string, std::vector<const AssessmentRecord*>> by_subject;
    for (const auto& r : records) by_subject[r.subject_id].push_back(&r);
    for (const auto& [subject, recs] : by_subject) {
        if (!label_of.count(subject)) throw DomainError("subject " + subject + " has no label");
    }

    LabeledCohort cohort;
    cohort.policy = policy;
    std::vector<const std::vector<const AssessmentRecord*>*> groups;
    for (const auto& [subject, recs] : by_subject) {
        groups.push_back(&recs);
        cohort.labels[subject] = label_of[subject];
    }
    cohort.vectors.resize(groups.size());
    parallel_for(groups.size(), workers, [&](std::size_t i) {
        std::vector<RosettaVector> parts;
        for (const auto* rec : *groups[i]) parts.push_back(translate(*rec, registry, policy));
        cohort.vectors[i] = merge(parts, policy);
    });

    const auto width = registry.rosetta().size();
    cohort.missing_fraction.assign(width, 1.0);
    if (!cohort.vectors.empty()) {
        for (std::size_t r = 0; r < width; ++r) {
            std::size_t missing = 0;
            for (const auto& v : cohort.vectors) missing += v.values[r].has_value() ? 0 : 1;
            cohort.missing_fraction[r] = static_cast<double>(missing) / static_cast<double>(cohort.vectors.size());
        }
    }
    return cohort;
}

std::vector<AssessmentRecord> parse_records(std::string_view source, const std::string& file) {
    std::vector<AssessmentRecord> out;
    std::map<std::tuple<std::string, std::string, std::string, std::string>, std::size_t> index;
    const auto all = text::lines(source);
    for (std::size_t i = 0; i < all.size(); ++i) {
        const std::size_t lineno = i + 1;
        const std::string_view line = all[i];
        if (text::trim(line).empty() || text::trim(line).starts_with('#')) continue;
        if (line.starts_with("subject_id\t")) continue;
        const auto cols = text::split(line, '\t');
        if (cols.size() != 5 && cols.size() != 6) {
            throw ParseError(file, lineno, "expected 5 or 6 tab-separated columns, found " + std::to_string(cols.size()));
        }
        int choice = 0;
        if (!text::parse_int(cols[4], choice)) throw ParseError(file, lineno, "choice index must be an integer");
        std::optional<std::string> date;
        if (cols.size() == 6 && !text::trim(cols[5]).empty()) {
            date = std::string(text::trim(cols[5]));
            if (!valid_iso_date(*date)) throw ParseError(file, lineno, "date must be YYYY-MM-DD, got '" + *date + "'");
        }
        const std::string subject(text::trim(cols[0]));
        if (subject.empty()) throw ParseError(file, lineno, "empty subject id");
        auto key = std::make_tuple(subject, cols[1], cols[2], date.value_or(""));
        auto [it, fresh] = index.try_emplace(key, out.size());
        if (fresh) out.push_back(AssessmentRecord{subject, cols[1], cols[2], {}, date});
        out[it->second].responses.emplace_back(std::string(text::trim(cols[3])), choice);
    }
    return out;
}

std::string serialize_records(const std::vector<AssessmentRecord>& records) {
    std::string out = "subject_id\tinstrument\tversion\tquestion_id\tchoice_index\tdate\n";
    for (const auto& r : records) {
        for (const auto& [qid, choice] : r.responses) {
            out += r.subject_id + "\t" + r.instrument + "\t" + r.version + "\t" + qid + "\t" + std::to_string(choice) +
                   "\t" + r.date.value_or("") + "\n";
        }
    }
    return out;
}

std::vector<std::pair<std::string, Label>> parse_labels(std::string_view source, const std::string& file) {
    std::vector<std::pair<std::string, Label>> out;
    const auto all = text::lines(source);
    for (std::size_t i = 0; i < all.size(); ++i) {
        const std::string_view line = all[i];
        if (text::trim(line).empty() || text::trim(line).starts_with('#')) continue;
        if (line.starts_with("subject_id\t")) continue;
        const auto cols = text::split(line, '\t');
        if (cols.size() != 2) throw ParseError(file, i + 1, "expected 'subject_id<TAB>label'");
        auto label = label_from_string(text::trim(cols[1]));
        if (!label) throw ParseError(file, i + 1, "unknown label '" + cols[1] + "' (autism, adhd, neither)");
        out.emplace_back(std::string(text::trim(cols[0])), *label);
    }
    return out;
}

std::string serialize_labels(const std::vector<std::pair<std::string, Label>>& labels) {
    std::string out = "subject_id\tlabel\n";
    for (const auto& [s, l] : labels) out += s + "\t" + std::string(to_string(l)) + "\n";
    return out;
}

std::string fused_csv(const LabeledCohort& cohort, const Registry& registry) {
    std::string out = "subject_id,label";
    for (const auto& r : registry.rosetta()) out += "," + text::csv_field(r.id);
    out += '\n';
    for (const auto& v : cohort.vectors) {
        out += text::csv_field(v.subject_id) + "," + std::string(to_string(cohort.label_of(v)));
        for (const auto& val : v.values) {
            out += ',';
            if (val) out += std::to_string(*val);
        }
        out += '\n';
    }
    return out;
}

LabeledCohort parse_fused_csv(std::string_view source, const Registry& registry, const std::string& file) {
    const auto all = text::lines(source);
    if (all.empty()) throw ParseError(file, 0, "empty cohort file");
    const auto header = text::split_csv_line(all[0]);
    const auto width = registry.rosetta().size();
    if (header.size() != width + 2 || header[0] != "subject_id" || header[1] != "label") {
        throw ParseError(file, 1, "header must be subject_id,label followed by every Rosetta id of the registry");
    }
    for (std::size_t r = 0; r < width; ++r) {
        if (header[r + 2] != registry.rosetta()[r].id) {
            throw ParseError(file, 1, "column " + std::to_string(r + 3) + " is '" + header[r + 2] + "', expected '" +
                                          registry.rosetta()[r].id + "'");
        }
    }
    LabeledCohort cohort;
    for (std::size_t i = 1; i < all.size(); ++i) {
        if (text::trim(all[i]).empty()) continue;
        const auto cells = text::split_csv_line(all[i]);
        if (cells.size() != width + 2) throw ParseError(file, i + 1, "wrong number of cells");
        auto label = label_from_string(cells[1]);
        if (!label) throw ParseError(file, i + 1, "unknown label '" + cells[1] + "'");
        RosettaVector v;
        v.subject_id = cells[0];
        v.values.assign(width, std::nullopt);
        v.provenance.assign(width, {});
        for (std::size_t r = 0; r < width; ++r) {
            if (cells[r + 2].empty()) continue;
            int code = 0;
            if (!text::parse_int(cells[r + 2], code) || code < 1 || code > registry.rosetta()[r].code_count()) {
                throw ParseError(file, i + 1, "invalid code '" + cells[r + 2] + "' for " + registry.rosetta()[r].id);
            }
            v.values[r] = code;
        }
        if (!cohort.labels.emplace(v.subject_id, *label).second) {
            throw ParseError(file, i + 1, "duplicate subject '" + v.subject_id + "'");
        }
        cohort.vectors.push_back(std::move(v));
    }
    std::sort(cohort.vectors.begin(), cohort.vectors.end(),
              [](const auto& a, const auto& b) { return a.subject_id < b.subject_id; });
    cohort.missing_fraction.assign(width, 1.0);
    if (!cohort.vectors.empty()) {
        for (std::size_t r = 0; r < width; ++r) {
            std::size_t missing = 0;
            for (const auto& v : cohort.vectors) missing += v.values[r] ? 0 : 1;
            cohort.missing_fraction[r] = static_cast<double>(missing) / static_cast<double>(cohort.vectors.size());
        }
    }
    return cohort;
}

std::string provenance_json(const LabeledCohort& cohort, const Registry& registry) {
    using json = nlohmann::ordered_json;
    json doc;
    doc["policy"] = std::string(to_string(cohort.policy));
    doc["policy_note"] = "several contributions to one Rosetta question are resolved by this policy";
    json subjects = json::array();
    for (const auto& v : cohort.vectors) {
        json values = json::object();
        for (std::size_t r = 0; r < v.values.size(); ++r) {
            if (!v.values[r]) continue;
            json sources = json::array();
            for (const auto& p : v.provenance[r]) {
                json s = {{"instrument", p.instrument}, {"version", p.version}, {"question_id", p.question_id},
                          {"choice", p.choice}, {"code", p.code}};
                if (p.date) s["date"] = *p.date;
                sources.push_back(std::move(s));
            }
            values[registry.rosetta()[r].id] = {{"code", *v.values[r]}, {"sources", std::move(sources)}};
        }
        subjects.push_back({{"subject_id", v.subject_id},
                            {"label", std::string(to_string(cohort.label_of(v)))},
                            {"values", std::move(values)}});
    }
    doc["subjects"] = std::move(subjects);
    return doc.dump(1) + "\n";
}

std::string missingness_csv(const LabeledCohort& cohort, const Registry& registry) {
    std::string out = "rosetta_id,missing_fraction\n";
    for (std::size_t r = 0; r < registry.rosetta().size(); ++r) {
        out += registry.rosetta()[r].id + "," + text::format_double(cohort.missing_fraction.at(r)) + "\n";
    }
    return out;
}

}  // namespace rosetta::fusion
