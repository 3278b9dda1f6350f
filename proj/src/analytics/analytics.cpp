#include "rosetta/analytics.hpp"

#include <map>
#include <set>

#include "rosetta/text.hpp"

namespace rosetta::analytics {

namespace {

// Instrument index (into registry.instrument_names()) feeding each Rosetta question.
std::vector<std::set<std::size_t>> instruments_per_rosetta(const Registry& reg) {
    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < reg.instrument_names().size(); ++i) idx[reg.instrument_names()[i]] = i;
    std::vector<std::set<std::size_t>> out(reg.rosetta().size());
    for (const auto& link : reg.resolved_links()) {
        out[link.rosetta].insert(idx.at(reg.versions()[link.version].instrument));
    }
    return out;
}

}  // namespace

std::vector<LeafFusionStat> leaf_stats(const Registry& reg) {
    const auto& onto = reg.ontology();
    struct Acc {
        std::set<std::string> instruments;
        std::set<std::pair<std::size_t, std::size_t>> sources;
        std::size_t rosetta = 0;
    };
    std::map<LeafCategory, Acc> acc;
    for (const auto& r : reg.rosetta()) acc[r.leaf].rosetta++;
    for (const auto& link : reg.resolved_links()) {
        const auto& ver = reg.versions()[link.version];
        auto& a = acc[ver.questions[link.question].leaf];
        a.instruments.insert(ver.instrument);
        a.sources.insert({link.version, link.question});
    }

    std::vector<LeafFusionStat> out;
    for (auto leaf : onto.leaves()) {
        const auto path = onto.path_of(leaf);
        auto it = acc.find(path);
        if (it == acc.end()) continue;
        const auto& a = it->second;
        if (a.rosetta == 0 && a.sources.empty()) continue;
        out.push_back(LeafFusionStat{path.base(), path.leaf_name(), a.instruments.size(), a.sources.size(), a.rosetta});
    }
    return out;
}

GlobalStats global_stats(const Registry& reg) {
    GlobalStats g;
    g.rosetta_questions = reg.rosetta().size();
    std::set<std::pair<std::size_t, std::size_t>> sources;
    for (const auto& link : reg.resolved_links()) sources.insert({link.version, link.question});
    g.source_questions = sources.size();

    const auto inst = instruments_per_rosetta(reg);
    std::size_t linked = 0;
    std::size_t instrument_sum = 0;
    std::size_t source_sum = 0;
    for (std::size_t r = 0; r < reg.rosetta().size(); ++r) {
        std::set<std::pair<std::size_t, std::size_t>> feeding;
        for (auto li : reg.links_into(r)) {
            const auto& l = reg.resolved_links()[li];
            feeding.insert({l.version, l.question});
        }
        if (feeding.empty()) continue;
        ++linked;
        instrument_sum += inst[r].size();
        source_sum += feeding.size();
    }
    if (linked > 0) {
        g.mean_instruments_per_rosetta = static_cast<double>(instrument_sum) / static_cast<double>(linked);
        g.mean_sources_per_rosetta = static_cast<double>(source_sum) / static_cast<double>(linked);
    }
    return g;
}

OverlapMatrix overlap_matrix(const Registry& reg) {
    OverlapMatrix m;
    m.instruments = reg.instrument_names();
    const auto n = m.instruments.size();
    m.cells.assign(n, std::vector<std::size_t>(n, 0));
    m.totals.assign(n, 0);
    for (const auto& set : instruments_per_rosetta(reg)) {
        for (auto i : set) {
            m.totals[i]++;
            for (auto j : set) {
                if (i != j) m.cells[i][j]++;
            }
        }
        if (set.size() == 1) m.cells[*set.begin()][*set.begin()]++;
    }
    return m;
}

std::string leaf_stats_csv(const std::vector<LeafFusionStat>& stats) {
    std::string out = "base_category,leaf,overlapping_instruments,instrument_questions,rosetta_questions\n";
    for (const auto& s : stats) {
        out += text::csv_field(s.base_category) + "," + text::csv_field(s.leaf) + "," +
               std::to_string(s.overlapping_instruments) + "," + std::to_string(s.instrument_questions) + "," +
               std::to_string(s.rosetta_questions) + "\n";
    }
    return out;
}

std::string global_stats_csv(const GlobalStats& g) {
    std::string out = "metric,value\n";
    out += "source_questions," + std::to_string(g.source_questions) + "\n";
    out += "rosetta_questions," + std::to_string(g.rosetta_questions) + "\n";
    out += "mean_instruments_per_rosetta," + text::format_double(g.mean_instruments_per_rosetta) + "\n";
    out += "mean_sources_per_rosetta," + text::format_double(g.mean_sources_per_rosetta) + "\n";
    out += "headline_source_questions," + std::to_string(kHeadlineSourceQuestions) + "\n";
    out += "headline_rosetta_questions," + std::to_string(kHeadlineRosettaQuestions) + "\n";
    const long long diff = static_cast<long long>(g.source_questions) - static_cast<long long>(kHeadlineSourceQuestions);
    out += "source_questions_minus_headline," + std::to_string(diff) + "\n";
    out += std::string("source_total_matches_headline,") + (diff == 0 ? "yes" : "no") + "\n";
    return out;
}

std::string overlap_matrix_csv(const OverlapMatrix& m) {
    std::string out = "instrument";
    for (const auto& name : m.instruments) out += "," + text::csv_field(name);
    out += ",total\n";
    for (std::size_t i = 0; i < m.instruments.size(); ++i) {
        out += text::csv_field(m.instruments[i]);
        for (auto v : m.cells[i]) out += "," + std::to_string(v);
        out += "," + std::to_string(m.totals[i]) + "\n";
    }
    return out;
}

std::string overlap_long_csv(const OverlapMatrix& m) {
    std::string out = "row,col,value\n";
    for (std::size_t i = 0; i < m.instruments.size(); ++i) {
        for (std::size_t j = 0; j < m.instruments.size(); ++j) {
            out += text::csv_field(m.instruments[i]) + "," + text::csv_field(m.instruments[j]) + "," +
                   std::to_string(m.cells[i][j]) + "\n";
        }
        out += text::csv_field(m.instruments[i]) + ",total," + std::to_string(m.totals[i]) + "\n";
    }
    return out;
}

std::vector<std::filesystem::path> emit_reports(const std::vector<LeafFusionStat>& stats, const GlobalStats& global,
                                                const OverlapMatrix& matrix, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> written = {out_dir / "leaf_stats.csv", out_dir / "summary.csv",
                                                  out_dir / "overlap_matrix.csv", out_dir / "overlap_long.csv"};
    text::write_file(written[0], leaf_stats_csv(stats));
    text::write_file(written[1], global_stats_csv(global));
    text::write_file(written[2], overlap_matrix_csv(matrix));
    text::write_file(written[3], overlap_long_csv(matrix));
    return written;
}

}  // namespace rosetta::analytics
