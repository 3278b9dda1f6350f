#pragma once

// Many-to-one mapping from instrument questions to Rosetta questions, with a
// per-link answer map from source choice index to Rosetta code.

#include <compare>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rosetta/diagnostics.hpp"

namespace rosetta {

class Registry;

struct SourceRef {
    std::string instrument;
    std::string version;
    std::string question_id;

    std::string to_string() const { return instrument + " / " + version + " #" + question_id; }
    friend bool operator==(const SourceRef&, const SourceRef&) = default;
    friend auto operator<=>(const SourceRef&, const SourceRef&) = default;
};

// choice index -> Rosetta code, as written in the file (may be partial or
// non-monotone until validated).
using AnswerMap = std::map<int, int>;

struct CrosswalkLink {
    SourceRef source;
    std::string rosetta_id;
    AnswerMap answer_map;
    std::size_t line = 0;

    friend bool operator==(const CrosswalkLink& a, const CrosswalkLink& b) {
        return a.source == b.source && a.rosetta_id == b.rosetta_id && a.answer_map == b.answer_map;
    }
};

struct Crosswalk {
    std::vector<CrosswalkLink> links;
    std::string file = "crosswalk.tsv";

    friend bool operator==(const Crosswalk& a, const Crosswalk& b) { return a.links == b.links; }
};

// "1:1,2:2,3:2,4:3". Throws std::invalid_argument on syntax errors or a
// repeated choice index.
AnswerMap parse_answer_map(std::string_view text);
std::string format_answer_map(const AnswerMap& map);

// Syntax-only parse of crosswalk rows (instrument, version, question_id,
// rosetta_id, answer_map). An optional header row starting with
// "instrument\t" is skipped. Throws ParseError.
Crosswalk parse_crosswalk_rows(std::string_view source, const std::string& file = "crosswalk.tsv");

// Full parse: rows plus every crosswalk rule checked against `registry`'s
// ontology, instruments and Rosetta questions (its own crosswalk is
// ignored). Throws ValidationError listing every violated rule.
Crosswalk parse_crosswalk(std::string_view source, const Registry& registry,
                          const std::string& file = "crosswalk.tsv");

// Crosswalk rule checks (dangling ids, many-to-one, leaf agreement, answer
// map totality/range/monotonicity, minimal-code). Errors only.
std::vector<Diagnostic> check_crosswalk(const Registry& registry, const Crosswalk& crosswalk);

std::string serialize_crosswalk(const Crosswalk& crosswalk);

}  // namespace rosetta
