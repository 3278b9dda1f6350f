#pragma once

// Fusion statistics per leaf category and the instrument overlap matrix.

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "rosetta/registry.hpp"

namespace rosetta::analytics {

// Headline totals of the first-generation Rosetta mapping. The per-leaf
// fusion table sums to 1277 source questions, three more than the headline
// figure; reports print both.
inline constexpr std::size_t kHeadlineSourceQuestions = 1274;
inline constexpr std::size_t kHeadlineRosettaQuestions = 209;

struct LeafFusionStat {
    std::string base_category;  // "/"-joined path above the leaf
    std::string leaf;
    std::size_t overlapping_instruments = 0;  // distinct instruments, not versions
    std::size_t instrument_questions = 0;     // mapped source questions
    std::size_t rosetta_questions = 0;

    friend bool operator==(const LeafFusionStat&, const LeafFusionStat&) = default;
};

struct GlobalStats {
    std::size_t source_questions = 0;  // mapped
    std::size_t rosetta_questions = 0;
    double mean_instruments_per_rosetta = 0.0;
    double mean_sources_per_rosetta = 0.0;
};

struct OverlapMatrix {
    std::vector<std::string> instruments;
    // cells[i][j], i != j: Rosetta questions fed by both i and j.
    // cells[i][i]: Rosetta questions fed by i alone.
    std::vector<std::vector<std::size_t>> cells;
    std::vector<std::size_t> totals;  // Rosetta questions fed by i at all
};

// One entry per ontology leaf (in ontology order) that holds a Rosetta
// question or a mapped source question. Only resolved crosswalk links count.
std::vector<LeafFusionStat> leaf_stats(const Registry& registry);
GlobalStats global_stats(const Registry& registry);
OverlapMatrix overlap_matrix(const Registry& registry);

std::string leaf_stats_csv(const std::vector<LeafFusionStat>& stats);
std::string global_stats_csv(const GlobalStats& stats);
std::string overlap_matrix_csv(const OverlapMatrix& matrix);
// Long format row,col,value for heat-map tools.
std::string overlap_long_csv(const OverlapMatrix& matrix);

// Writes leaf_stats.csv, summary.csv, overlap_matrix.csv and
// overlap_long.csv into `out_dir` (created if needed). Returns the paths.
std::vector<std::filesystem::path> emit_reports(const std::vector<LeafFusionStat>& stats, const GlobalStats& global,
                                                const OverlapMatrix& matrix, const std::filesystem::path& out_dir);

}  // namespace rosetta::analytics
