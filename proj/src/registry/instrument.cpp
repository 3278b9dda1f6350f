#include "rosetta/instrument.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

#include "rosetta/error.hpp"
#include "rosetta/text.hpp"

namespace rosetta {

namespace {

constexpr std::array<std::string_view, 5> kHeaderKeys = {"name", "version", "age_min_months",
                                                         "age_max_months", "reporter"};
constexpr std::string_view kColumnHeader = "question_id\tleaf_path\tbody\tscale_kind\tchoices";

bool is_comment(std::string_view line) { return text::trim(line).starts_with('#'); }

}  // namespace

std::string_view to_string(ScaleKind k) {
    switch (k) {
        case ScaleKind::frequency: return "frequency";
        case ScaleKind::quality: return "quality";
        case ScaleKind::binary: return "binary";
    }
    return "frequency";
}

std::string_view to_string(Reporter r) {
    switch (r) {
        case Reporter::clinician: return "clinician";
        case Reporter::parent: return "parent";
        case Reporter::teacher: return "teacher";
        case Reporter::self: return "self";
    }
    return "parent";
}

std::optional<ScaleKind> scale_kind_from_string(std::string_view s) {
    if (s == "frequency") return ScaleKind::frequency;
    if (s == "quality") return ScaleKind::quality;
    if (s == "binary") return ScaleKind::binary;
    return std::nullopt;
}

std::optional<Reporter> reporter_from_string(std::string_view s) {
    if (s == "clinician") return Reporter::clinician;
    if (s == "parent") return Reporter::parent;
    if (s == "teacher") return Reporter::teacher;
    if (s == "self") return Reporter::self;
    return std::nullopt;
}

AnswerScale AnswerScale::from_labels(ScaleKind kind, const std::vector<std::string>& labels) {
    AnswerScale s{kind, {}};
    for (std::size_t i = 0; i < labels.size(); ++i) {
        s.choices.push_back(AnswerChoice{static_cast<int>(i + 1), labels[i]});
    }
    return s;
}

std::string AnswerScale::check() const {
    if (choices.size() < 2) return "answer scale needs at least 2 choices";
    if (kind == ScaleKind::binary && choices.size() != 2) return "binary scale must have exactly 2 choices";
    std::set<std::string> seen;
    for (std::size_t i = 0; i < choices.size(); ++i) {
        if (choices[i].index != static_cast<int>(i + 1)) {
            return "choice indices must be contiguous from 1 (found " +
                   std::to_string(choices[i].index) + " at position " + std::to_string(i + 1) + ")";
        }
        if (text::trim(choices[i].label).empty()) return "empty choice label";
        if (!seen.insert(choices[i].label).second) {
            return "duplicate choice label '" + choices[i].label + "'";
        }
    }
    return {};
}

const SourceQuestion* InstrumentVersion::find(std::string_view question_id) const {
    for (const auto& q : questions) {
        if (q.id == question_id) return &q;
    }
    return nullptr;
}

namespace {

// Choices are "|"-separated labels, optionally "n=label" to state indices
// explicitly (which lets a file declare a gap and be rejected for it).
AnswerScale parse_choices(ScaleKind kind, std::string_view field, const std::string& file,
                          std::size_t lineno) {
    AnswerScale scale{kind, {}};
    int next = 1;
    for (auto& raw : text::split(field, '|')) {
        std::string label(text::trim(raw));
        int index = next;
        if (auto eq = label.find('='); eq != std::string::npos) {
            int explicit_index = 0;
            if (text::parse_int(std::string_view(label).substr(0, eq), explicit_index)) {
                index = explicit_index;
                label = std::string(text::trim(std::string_view(label).substr(eq + 1)));
            }
        }
        scale.choices.push_back(AnswerChoice{index, label});
        next = index + 1;
    }
    if (auto why = scale.check(); !why.empty()) throw ParseError(file, lineno, why);
    return scale;
}

}  // namespace

InstrumentVersion parse_instrument(std::string_view source, const OntologyTree& ontology,
                                   const std::string& file) {
    InstrumentVersion out;
    out.file = file;
    const auto all = text::lines(source);
    std::size_t i = 0;

    std::map<std::string, std::pair<std::string, std::size_t>> header;
    for (; i < all.size(); ++i) {
        const std::string_view line = all[i];
        if (is_comment(line)) continue;
        if (text::trim(line).empty()) {
            if (header.empty()) continue;
            break;
        }
        const auto tab = line.find('\t');
        if (tab == std::string_view::npos) {
            throw ParseError(file, i + 1, "header line must be 'key<TAB>value'");
        }
        std::string key(text::trim(line.substr(0, tab)));
        if (std::find(kHeaderKeys.begin(), kHeaderKeys.end(), key) == kHeaderKeys.end()) {
            throw ParseError(file, i + 1, "unknown header key '" + key + "'");
        }
        if (header.count(key)) throw ParseError(file, i + 1, "duplicate header key '" + key + "'");
        header[key] = {std::string(text::trim(line.substr(tab + 1))), i + 1};
    }
    if (all.empty() || header.empty()) throw ParseError(file, 0, "instrument file is empty");
    for (auto key : kHeaderKeys) {
        if (!header.count(std::string(key))) {
            throw ParseError(file, 0, "missing header key '" + std::string(key) + "'");
        }
    }
    out.instrument = header["name"].first;
    out.version = header["version"].first;
    if (out.instrument.empty() || out.version.empty()) {
        throw ParseError(file, header["name"].second, "instrument name and version must be nonempty");
    }
    if (!text::parse_int(header["age_min_months"].first, out.ages.min_months) ||
        !text::parse_int(header["age_max_months"].first, out.ages.max_months) ||
        out.ages.min_months < 0 || out.ages.min_months > out.ages.max_months) {
        throw ParseError(file, header["age_min_months"].second, "invalid age range in months");
    }
    auto reporter = reporter_from_string(header["reporter"].first);
    if (!reporter) {
        throw ParseError(file, header["reporter"].second,
                         "unknown reporter '" + header["reporter"].first + "'");
    }
    out.reporter = *reporter;

    bool saw_columns = false;
    std::set<std::string> ids;
    for (; i < all.size(); ++i) {
        const std::size_t lineno = i + 1;
        const std::string_view line = all[i];
        if (is_comment(line) || text::trim(line).empty()) continue;
        if (!saw_columns) {
            if (line != kColumnHeader) {
                throw ParseError(file, lineno, "expected column header line '" +
                                                   std::string(kColumnHeader) + "'");
            }
            saw_columns = true;
            continue;
        }
        const auto cols = text::split(line, '\t');
        if (cols.size() != 5) {
            throw ParseError(file, lineno, "expected 5 tab-separated columns, found " +
                                               std::to_string(cols.size()));
        }
        SourceQuestion q;
        q.line = lineno;
        q.id = std::string(text::trim(cols[0]));
        if (q.id.empty()) throw ParseError(file, lineno, "empty question id");
        if (!ids.insert(q.id).second) throw ParseError(file, lineno, "duplicate question id '" + q.id + "'");
        q.leaf = LeafCategory::from_string(cols[1]);
        if (!ontology.find_leaf(q.leaf)) {
            throw ParseError(file, lineno, "unknown leaf path '" + std::string(cols[1]) + "'");
        }
        q.body = cols[2];
        auto kind = scale_kind_from_string(text::trim(cols[3]));
        if (!kind) throw ParseError(file, lineno, "unknown scale kind '" + cols[3] + "'");
        q.scale = parse_choices(*kind, cols[4], file, lineno);
        out.questions.push_back(std::move(q));
    }
    if (out.questions.empty()) throw ParseError(file, 0, "instrument has no questions");
    return out;
}

std::string serialize_instrument(const InstrumentVersion& v) {
    std::string out;
    out += "name\t" + v.instrument + "\n";
    out += "version\t" + v.version + "\n";
    out += "age_min_months\t" + std::to_string(v.ages.min_months) + "\n";
    out += "age_max_months\t" + std::to_string(v.ages.max_months) + "\n";
    out += "reporter\t" + std::string(to_string(v.reporter)) + "\n\n";
    out += std::string(kColumnHeader) + "\n";
    for (const auto& q : v.questions) {
        std::vector<std::string> labels;
        for (const auto& c : q.scale.choices) labels.push_back(c.label);
        out += q.id + "\t" + q.leaf.to_string() + "\t" + q.body + "\t" +
               std::string(to_string(q.scale.kind)) + "\t" + text::join(labels, "|") + "\n";
    }
    return out;
}

}  // namespace rosetta
