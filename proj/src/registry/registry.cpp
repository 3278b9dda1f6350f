#include "rosetta/registry.hpp"

#include <algorithm>
#include <set>

#include "rosetta/error.hpp"
#include "rosetta/text.hpp"

namespace rosetta {

namespace fs = std::filesystem;

Registry::Registry(OntologyTree ontology, std::vector<InstrumentVersion> versions,
                   std::vector<RosettaQuestion> rosetta, Crosswalk crosswalk)
    : ontology_(std::move(ontology)),
      versions_(std::move(versions)),
      rosetta_(std::move(rosetta)),
      crosswalk_(std::move(crosswalk)) {
    build_indexes();
}

Registry Registry::with_crosswalk(Crosswalk crosswalk) const {
    return Registry(ontology_, versions_, rosetta_, std::move(crosswalk));
}

void Registry::build_indexes() {
    std::set<std::string> names;
    question_by_id_.resize(versions_.size());
    links_by_question_.resize(versions_.size());
    for (std::size_t v = 0; v < versions_.size(); ++v) {
        const auto& ver = versions_[v];
        version_by_key_.try_emplace({ver.instrument, ver.version}, v);
        if (names.insert(ver.instrument).second) instrument_names_.push_back(ver.instrument);
        links_by_question_[v].resize(ver.questions.size());
        for (std::size_t q = 0; q < ver.questions.size(); ++q) {
            question_by_id_[v].try_emplace(ver.questions[q].id, q);
        }
    }
    into_.resize(rosetta_.size());
    for (std::size_t r = 0; r < rosetta_.size(); ++r) rosetta_by_id_.try_emplace(rosetta_[r].id, r);

    for (std::size_t l = 0; l < crosswalk_.links.size(); ++l) {
        const auto& link = crosswalk_.links[l];
        const auto v = version_index(link.source.instrument, link.source.version);
        if (!v) continue;
        const auto q = question_index(*v, link.source.question_id);
        const auto r = rosetta_index(link.rosetta_id);
        if (!q || !r) continue;
        ResolvedLink rl{l, *v, *q, *r, {}};
        const int choices = versions_[*v].questions[*q].scale.size();
        rl.codes.assign(static_cast<std::size_t>(std::max(choices, 0)), 0);
        for (const auto& [choice, code] : link.answer_map) {
            if (choice >= 1 && choice <= choices) rl.codes[choice - 1] = code;
        }
        links_by_question_[*v][*q].push_back(resolved_.size());
        into_[*r].push_back(resolved_.size());
        resolved_.push_back(std::move(rl));
    }
}

std::optional<std::size_t> Registry::version_index(std::string_view instrument, std::string_view version) const {
    auto it = version_by_key_.find(std::pair<std::string, std::string>(instrument, version));
    if (it == version_by_key_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> Registry::rosetta_index(std::string_view id) const {
    auto it = rosetta_by_id_.find(id);
    if (it == rosetta_by_id_.end()) return std::nullopt;
    return it->second;
}

const RosettaQuestion* Registry::find_rosetta(std::string_view id) const {
    auto r = rosetta_index(id);
    return r ? &rosetta_[*r] : nullptr;
}

std::optional<std::size_t> Registry::question_index(std::size_t version, std::string_view question_id) const {
    if (version >= question_by_id_.size()) return std::nullopt;
    auto it = question_by_id_[version].find(question_id);
    if (it == question_by_id_[version].end()) return std::nullopt;
    return it->second;
}

const std::vector<std::size_t>& Registry::links_for(std::size_t version, std::size_t question) const {
    return links_by_question_.at(version).at(question);
}

Registry load_registry(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw std::runtime_error("registry directory not found: " + dir.string());
    auto ontology = parse_ontology(text::read_file(dir / "ontology.txt"), "ontology.txt");

    std::vector<fs::path> files;
    const auto inst_dir = dir / "instruments";
    if (fs::is_directory(inst_dir)) {
        for (const auto& e : fs::directory_iterator(inst_dir)) {
            if (e.is_regular_file() && e.path().extension() == ".tsv") files.push_back(e.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<InstrumentVersion> versions;
    for (const auto& f : files) {
        versions.push_back(
            parse_instrument(text::read_file(f), ontology, "instruments/" + f.filename().string()));
    }
    auto rosetta = parse_rosetta_questions(text::read_file(dir / "rosetta.tsv"), ontology, "rosetta.tsv");
    auto crosswalk = parse_crosswalk_rows(text::read_file(dir / "crosswalk.tsv"), "crosswalk.tsv");
    return Registry(std::move(ontology), std::move(versions), std::move(rosetta), std::move(crosswalk));
}

Registry load_canonical_registry(const fs::path& dir) {
    auto reg = load_registry(dir);
    auto report = validate(reg);
    if (report.error_count() > 0) {
        std::vector<Diagnostic> errors;
        for (auto& d : report.diagnostics) {
            if (d.severity == Severity::error) errors.push_back(std::move(d));
        }
        throw ValidationError(std::move(errors));
    }
    return reg;
}

ValidationReport validate(const Registry& reg) {
    ValidationReport report;
    auto& out = report.diagnostics;
    auto error = [&](std::string rule, std::string file, std::size_t line, std::string msg) {
        out.push_back(Diagnostic{Severity::error, std::move(rule), std::move(file), line, std::move(msg)});
    };

    const auto& onto = reg.ontology();
    {
        std::vector<std::string> roots;
        for (auto r : onto.roots()) roots.push_back(onto.nodes()[r].name);
        auto sorted = roots;
        std::sort(sorted.begin(), sorted.end());
        if (sorted != kOntologyDomains) {
            error("ontology-roots", "ontology.txt", 0,
                  "level-1 domains must be exactly Cognitive, Motor, Somatic (found: " +
                      (roots.empty() ? std::string("none") : text::join(roots, ", ")) + ")");
        }
    }

    std::set<std::pair<std::string, std::string>> version_keys;
    for (const auto& v : reg.versions()) {
        if (!version_keys.insert({v.instrument, v.version}).second) {
            error("duplicate-version", v.file, 0, "instrument version '" + v.key() + "' defined twice");
        }
        if (v.questions.empty()) error("empty-instrument", v.file, 0, "'" + v.key() + "' has no questions");
        std::set<std::string> ids;
        for (const auto& q : v.questions) {
            if (!ids.insert(q.id).second) {
                error("duplicate-question", v.file, q.line, "question id '" + q.id + "' repeated");
            }
            if (!onto.find_leaf(q.leaf)) {
                error("source-leaf", v.file, q.line,
                      "question '" + q.id + "' leaf " + q.leaf.to_string() + " does not resolve");
            }
            if (auto why = q.scale.check(); !why.empty()) {
                error("answer-scale", v.file, q.line, "question '" + q.id + "': " + why);
            }
        }
    }

    std::set<std::string> rosetta_ids;
    for (const auto& r : reg.rosetta()) {
        const std::string file = "rosetta.tsv";
        if (!rosetta_ids.insert(r.id).second) error("duplicate-rosetta", file, r.line, "Rosetta id '" + r.id + "' repeated");
        if (!is_valid_rosetta_id(r.id)) error("rosetta-id", file, r.line, "malformed Rosetta id '" + r.id + "'");
        if (!onto.find_leaf(r.leaf)) {
            error("rosetta-leaf", file, r.line, r.id + ": leaf " + r.leaf.to_string() + " does not resolve");
        }
        if (auto why = check_template(r.body_template); !why.empty()) error("rosetta-template", file, r.line, r.id + ": " + why);
        bool contiguous = r.codes.size() >= 2;
        for (std::size_t i = 0; i < r.codes.size(); ++i) contiguous = contiguous && r.codes[i].code == static_cast<int>(i + 1);
        if (!contiguous) error("rosetta-codes", file, r.line, r.id + ": codes must be contiguous from 1, at least 2");
    }

    auto xw = check_crosswalk(reg, reg.crosswalk());
    out.insert(out.end(), std::make_move_iterator(xw.begin()), std::make_move_iterator(xw.end()));

    std::set<SourceRef> mapped;
    for (const auto& l : reg.crosswalk().links) mapped.insert(l.source);
    for (const auto& v : reg.versions()) {
        for (const auto& q : v.questions) {
            if (!mapped.count(SourceRef{v.instrument, v.version, q.id})) {
                out.push_back(Diagnostic{Severity::warning, "unmapped-source", v.file, q.line,
                                         "question '" + q.id + "' of " + v.key() + " is not mapped to any Rosetta question"});
            }
        }
    }
    return report;
}

}  // namespace rosetta
