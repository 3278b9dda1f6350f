#include "rosetta/synth.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "json.hpp"
#include "rosetta/catalog.hpp"
#include "rosetta/error.hpp"
#include "rosetta/parallel.hpp"
#include "rosetta/random.hpp"

namespace rosetta::synth {

using nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kLabelStream = 0;
constexpr std::uint64_t kWeightStream = 0x5157A7Eull;
constexpr int kCodeRetries = 8;

std::size_t label_slot(fusion::Label l) { return static_cast<std::size_t>(l); }

}  // namespace

GeneratorSpec default_spec() {
    GeneratorSpec s;
    s.seed = 0;
    s.class_counts = {2941, 343, 447};
    s.effect_size = 1.0;
    s.second_version_probability = 0.3;
    return s;
}

std::vector<CoverageEntry> effective_coverage(const GeneratorSpec& spec, const Registry& reg) {
    if (!spec.coverage.empty()) return spec.coverage;
    std::vector<CoverageEntry> out;
    for (auto name : kCaseStudyInstruments) {
        std::vector<const InstrumentVersion*> versions;
        for (const auto& v : reg.versions()) {
            if (v.instrument == name) versions.push_back(&v);
        }
        for (const auto* v : versions) {
            out.push_back({v->instrument, v->version, 1.0 / static_cast<double>(versions.size())});
        }
    }
    return out;
}

void check_spec(const GeneratorSpec& spec, const Registry& reg) {
    if (!(spec.effect_size >= 0.0) || !std::isfinite(spec.effect_size)) {
        throw std::invalid_argument("effect_size must be a finite value >= 0");
    }
    if (!(spec.second_version_probability >= 0.0 && spec.second_version_probability <= 1.0)) {
        throw std::invalid_argument("second_version_probability must be in [0, 1]");
    }
    const auto coverage = effective_coverage(spec, reg);
    double total = 0.0;
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& c : coverage) {
        if (!reg.version_index(c.instrument, c.version)) {
            throw std::invalid_argument("coverage names unknown version " + c.instrument + " / " + c.version);
        }
        if (!seen.insert({c.instrument, c.version}).second) {
            throw std::invalid_argument("coverage lists " + c.instrument + " / " + c.version + " twice");
        }
        if (!(c.weight >= 0.0) || !std::isfinite(c.weight)) throw std::invalid_argument("coverage weights must be >= 0");
        total += c.weight;
    }
    const std::size_t subjects = spec.class_counts[0] + spec.class_counts[1] + spec.class_counts[2];
    if (subjects > 0 && !(total > 0.0)) throw std::invalid_argument("coverage weights must have a positive sum");
    for (const auto& [id, dists] : spec.distributions) {
        const auto* q = reg.find_rosetta(id);
        if (!q) throw std::invalid_argument("distribution for unknown Rosetta question " + id);
        for (auto l : fusion::kLabels) {
            const auto& d = dists[label_slot(l)];
            if (d.size() != q->codes.size()) {
                throw std::invalid_argument("distribution for " + id + " / " + std::string(fusion::to_string(l)) +
                                            " needs " + std::to_string(q->codes.size()) + " probabilities");
            }
            double sum = 0.0;
            for (double p : d) {
                if (!(p >= 0.0)) throw std::invalid_argument("negative probability for " + id);
                sum += p;
            }
            if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("distribution for " + id + " does not sum to 1");
        }
    }
}

QuestionGroup question_group(const LeafCategory& leaf) {
    const auto& p = leaf.path;
    if (p.size() >= 3 && p[0] == "Cognitive" && p[1] == "Behavioral" && (p[2] == "Social" || p[2] == "Sensory")) {
        return QuestionGroup::autism;
    }
    if (p.size() >= 2 && p[0] == "Cognitive" && p[1] == "Language and Communication") return QuestionGroup::autism;
    if (p.size() >= 3 && p[0] == "Cognitive" && p[1] == "Executive Functioning") {
        static const std::set<std::string> adhd = {"Attention", "Hyperactivity", "Impulsivity", "Inhibitory Control",
                                                   "Patience"};
        if (adhd.count(p[2])) return QuestionGroup::adhd;
    }
    return QuestionGroup::general;
}

std::vector<ClassDistributions> class_distributions(const GeneratorSpec& spec, const Registry& reg) {
    Rng rng(substream_seed(spec.seed, kWeightStream));
    std::vector<ClassDistributions> out;
    out.reserve(reg.rosetta().size());
    for (const auto& q : reg.rosetta()) {
        const double weight = 0.5 + rng.uniform();
        const auto group = question_group(q.leaf);
        const int m = static_cast<int>(q.codes.size());
        ClassDistributions d;
        for (auto l : fusion::kLabels) {
            double loading = 0.0;
            switch (l) {
                case fusion::Label::neither: loading = -1.0; break;
                case fusion::Label::autism:
                    loading = group == QuestionGroup::autism ? 1.0 : group == QuestionGroup::adhd ? 0.0 : 0.5;
                    break;
                case fusion::Label::adhd:
                    loading = group == QuestionGroup::adhd ? 1.0 : group == QuestionGroup::autism ? 0.0 : 0.5;
                    break;
            }
            std::vector<double> logits(static_cast<std::size_t>(m));
            for (int k = 0; k < m; ++k) {
                const double x = m > 1 ? -1.0 + 2.0 * k / (m - 1) : 0.0;
                logits[static_cast<std::size_t>(k)] = spec.effect_size * loading * weight * x;
            }
            const double top = *std::max_element(logits.begin(), logits.end());
            double sum = 0.0;
            for (auto& v : logits) sum += (v = std::exp(v - top));
            for (auto& v : logits) v /= sum;
            d[label_slot(l)] = std::move(logits);
        }
        if (auto it = spec.distributions.find(q.id); it != spec.distributions.end()) d = it->second;
        out.push_back(std::move(d));
    }
    return out;
}

namespace {

struct Plan {
    std::vector<std::size_t> versions;  // registry indexes, coverage order
    std::vector<std::string> instruments;
    std::vector<double> weights;
};

Plan make_plan(const GeneratorSpec& spec, const Registry& reg) {
    Plan p;
    for (const auto& c : effective_coverage(spec, reg)) {
        p.versions.push_back(*reg.version_index(c.instrument, c.version));
        p.instruments.push_back(c.instrument);
        p.weights.push_back(c.weight);
    }
    return p;
}

// Weights of entries eligible as a second version after `first`.
std::vector<double> second_weights(const Plan& p, std::size_t first) {
    std::vector<double> w(p.weights.size(), 0.0);
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (p.instruments[i] != p.instruments[first]) w[i] = p.weights[i];
    }
    return w;
}

double sum_of(const std::vector<double>& w) {
    double s = 0.0;
    for (double v : w) s += v;
    return s;
}

// Lowest choice whose answer map yields `code`, or 0.
int lowest_choice(const ResolvedLink& link, int code) {
    for (int c = 1; c <= static_cast<int>(link.codes.size()); ++c) {
        if (link.codes[static_cast<std::size_t>(c - 1)] == code) return c;
    }
    return 0;
}

SyntheticSubject make_subject(std::size_t index, const std::string& id, fusion::Label label, const Plan& plan,
                              const std::vector<ClassDistributions>& dists, const GeneratorSpec& spec,
                              const Registry& reg, std::vector<fusion::AssessmentRecord>& records) {
    Rng rng(substream_seed(spec.seed, index + 1));
    SyntheticSubject s;
    s.subject_id = id;
    s.label = label;
    s.codes.assign(reg.rosetta().size(), std::nullopt);

    const std::size_t first = rng.categorical(plan.weights);
    std::vector<std::size_t> entries{first};
    const auto w2 = second_weights(plan, first);
    if (rng.uniform() < spec.second_version_probability && sum_of(w2) > 0.0) entries.push_back(rng.categorical(w2));
    for (auto e : entries) s.versions.push_back(plan.versions[e]);

    // Links per Rosetta question reachable through the assigned versions.
    std::map<std::size_t, std::vector<std::size_t>> reachable;
    for (auto v : s.versions) {
        for (std::size_t q = 0; q < reg.versions()[v].questions.size(); ++q) {
            for (auto li : reg.links_for(v, q)) reachable[reg.resolved_links()[li].rosetta].push_back(li);
        }
    }
    // answers[link index] = choice
    std::map<std::size_t, int> answers;
    for (const auto& [r, links] : reachable) {
        const auto& dist = dists[r][label_slot(label)];
        for (int attempt = 0; attempt < kCodeRetries; ++attempt) {
            const int code = static_cast<int>(rng.categorical(dist)) + 1;
            bool any = false;
            for (auto li : links) {
                if (int c = lowest_choice(reg.resolved_links()[li], code)) {
                    answers[li] = c;
                    any = true;
                }
            }
            if (any) {
                s.codes[r] = code;
                break;
            }
        }
    }
    for (auto v : s.versions) {
        const auto& ver = reg.versions()[v];
        fusion::AssessmentRecord rec{id, ver.instrument, ver.version, {}, std::nullopt};
        for (std::size_t q = 0; q < ver.questions.size(); ++q) {
            for (auto li : reg.links_for(v, q)) {
                if (auto it = answers.find(li); it != answers.end()) {
                    rec.responses.emplace_back(ver.questions[q].id, it->second);
                    break;
                }
            }
        }
        records.push_back(std::move(rec));
    }
    return s;
}

}  // namespace

SyntheticCohort generate(const GeneratorSpec& spec, const Registry& reg, unsigned workers) {
    check_spec(spec, reg);
    const auto dists = class_distributions(spec, reg);
    const auto plan = make_plan(spec, reg);

    std::vector<fusion::Label> labels;
    for (auto l : fusion::kLabels) labels.insert(labels.end(), spec.class_counts[label_slot(l)], l);
    Rng shuffle_rng(substream_seed(spec.seed, kLabelStream));
    shuffle_rng.shuffle(labels);

    const std::size_t n = labels.size();
    const std::size_t width = std::max<std::size_t>(5, std::to_string(n).size());
    std::vector<SyntheticSubject> subjects(n);
    std::vector<std::vector<fusion::AssessmentRecord>> records(n);
    parallel_for(n, workers, [&](std::size_t i) {
        std::string id = std::to_string(i + 1);
        id = "S" + std::string(width - id.size(), '0') + id;
        subjects[i] = make_subject(i, id, labels[i], plan, dists, spec, reg, records[i]);
    });

    SyntheticCohort out;
    for (std::size_t i = 0; i < n; ++i) {
        for (auto& r : records[i]) out.records.push_back(std::move(r));
        out.labels.emplace_back(subjects[i].subject_id, subjects[i].label);
    }
    out.subjects = std::move(subjects);
    return out;
}

std::vector<double> expected_missingness(const GeneratorSpec& spec, const Registry& reg) {
    check_spec(spec, reg);
    const auto plan = make_plan(spec, reg);
    const std::size_t entries = plan.versions.size();
    // linked[e][r]: entry e's version has a resolved link into Rosetta question r.
    std::vector<std::vector<bool>> linked(entries, std::vector<bool>(reg.rosetta().size(), false));
    for (std::size_t e = 0; e < entries; ++e) {
        const auto v = plan.versions[e];
        for (std::size_t q = 0; q < reg.versions()[v].questions.size(); ++q) {
            for (auto li : reg.links_for(v, q)) linked[e][reg.resolved_links()[li].rosetta] = true;
        }
    }
    const double total = sum_of(plan.weights);
    std::vector<double> out(reg.rosetta().size(), 1.0);
    if (!(total > 0.0)) return out;
    for (std::size_t r = 0; r < out.size(); ++r) {
        double covered = 0.0;
        for (std::size_t e = 0; e < entries; ++e) {
            const double pe = plan.weights[e] / total;
            if (linked[e][r]) {
                covered += pe;
                continue;
            }
            const auto w2 = second_weights(plan, e);
            const double t2 = sum_of(w2);
            if (!(t2 > 0.0)) continue;
            double hit = 0.0;
            for (std::size_t u = 0; u < entries; ++u) {
                if (linked[u][r]) hit += w2[u];
            }
            covered += pe * spec.second_version_probability * hit / t2;
        }
        out[r] = 1.0 - covered;
    }
    return out;
}

GeneratorSpec parse_spec(std::string_view source, const std::string& file) {
    ordered_json j;
    try {
        j = ordered_json::parse(source);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(file, 0, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError(file, 0, "spec must be a JSON object");
    GeneratorSpec s = default_spec();
    auto number = [&](const ordered_json& v, const std::string& key) {
        if (!v.is_number()) throw ParseError(file, 0, key + " must be a number");
        return v.get<double>();
    };
    auto count = [&](const ordered_json& v, const std::string& key) {
        if (!v.is_number_unsigned()) throw ParseError(file, 0, key + " must be a nonnegative integer");
        return v.get<std::uint64_t>();
    };
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "seed") {
                s.seed = count(v, key);
            } else if (key == "effect_size") {
                s.effect_size = number(v, key);
            } else if (key == "second_version_probability") {
                s.second_version_probability = number(v, key);
            } else if (key == "class_counts") {
                if (!v.is_object()) throw ParseError(file, 0, "class_counts must be an object");
                s.class_counts = {0, 0, 0};
                for (const auto& [name, c] : v.items()) {
                    auto l = fusion::label_from_string(name);
                    if (!l) throw ParseError(file, 0, "unknown label '" + name + "' in class_counts");
                    s.class_counts[label_slot(*l)] = static_cast<std::size_t>(count(c, "class_counts." + name));
                }
            } else if (key == "coverage") {
                if (!v.is_array()) throw ParseError(file, 0, "coverage must be an array");
                for (const auto& e : v) {
                    if (!e.is_object() || !e.contains("instrument") || !e.contains("version") ||
                        !e["instrument"].is_string() || !e["version"].is_string()) {
                        throw ParseError(file, 0, "coverage entries need string instrument and version");
                    }
                    CoverageEntry c{e["instrument"].get<std::string>(), e["version"].get<std::string>(), 1.0};
                    if (e.contains("weight")) c.weight = number(e["weight"], "coverage weight");
                    s.coverage.push_back(std::move(c));
                }
            } else if (key == "distributions") {
                if (!v.is_object()) throw ParseError(file, 0, "distributions must be an object");
                for (const auto& [id, per_class] : v.items()) {
                    if (!per_class.is_object()) throw ParseError(file, 0, "distributions." + id + " must be an object");
                    ClassDistributions d;
                    for (auto l : fusion::kLabels) {
                        const std::string name(fusion::to_string(l));
                        if (!per_class.contains(name) || !per_class[name].is_array()) {
                            throw ParseError(file, 0, "distributions." + id + " needs an array for " + name);
                        }
                        for (const auto& p : per_class[name]) d[label_slot(l)].push_back(number(p, "probability"));
                    }
                    s.distributions[id] = std::move(d);
                }
            } else {
                throw ParseError(file, 0, "unknown key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(file, 0, e.what());
    }
    return s;
}

std::string serialize_spec(const GeneratorSpec& s) {
    ordered_json j;
    j["seed"] = s.seed;
    auto& counts = j["class_counts"] = ordered_json::object();
    for (auto l : fusion::kLabels) counts[std::string(fusion::to_string(l))] = s.class_counts[label_slot(l)];
    j["effect_size"] = s.effect_size;
    j["second_version_probability"] = s.second_version_probability;
    if (!s.coverage.empty()) {
        auto& cov = j["coverage"] = ordered_json::array();
        for (const auto& c : s.coverage) {
            cov.push_back({{"instrument", c.instrument}, {"version", c.version}, {"weight", c.weight}});
        }
    }
    if (!s.distributions.empty()) {
        auto& ds = j["distributions"] = ordered_json::object();
        for (const auto& [id, d] : s.distributions) {
            auto& e = ds[id] = ordered_json::object();
            for (auto l : fusion::kLabels) e[std::string(fusion::to_string(l))] = d[label_slot(l)];
        }
    }
    return j.dump(2) + "\n";
}

}  // namespace rosetta::synth
