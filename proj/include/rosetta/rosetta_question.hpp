#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rosetta/ontology.hpp"

namespace rosetta {

struct RosettaCode {
    int code = 1;  // 1-based severity level
    std::string label;
    friend bool operator==(const RosettaCode&, const RosettaCode&) = default;
};

// A harmonized question. The body is a template over exactly two
// placeholders, [NAME] and [his/her]; [NAME] must appear at least once.
struct RosettaQuestion {
    std::string id;  // "R-<leafslug>-<n>"
    LeafCategory leaf;
    std::string body_template;
    std::vector<RosettaCode> codes;
    std::size_t line = 0;

    int code_count() const { return static_cast<int>(codes.size()); }

    friend bool operator==(const RosettaQuestion& a, const RosettaQuestion& b) {
        return a.id == b.id && a.leaf == b.leaf && a.body_template == b.body_template &&
               a.codes == b.codes;
    }
};

enum class Gender { male, female };

// Empty string if the template is legal, else the reason.
std::string check_template(std::string_view body_template);

// Substitutes [NAME] and [his/her]. Throws std::invalid_argument on an
// unknown bracketed token or a template without [NAME].
std::string render_question(const RosettaQuestion& q, std::string_view name, Gender gender);

// "R-<slug>-<n>" with a lowercase slug and positive n.
bool is_valid_rosetta_id(std::string_view id);

// Tab-separated rows: rosetta_id, leaf_path, body_template, codes
// ("|"-separated "n=label"). An optional header row starting with
// "rosetta_id" is skipped.
std::vector<RosettaQuestion> parse_rosetta_questions(std::string_view source,
                                                     const OntologyTree& ontology,
                                                     const std::string& file = "rosetta.tsv");
std::string serialize_rosetta_questions(const std::vector<RosettaQuestion>& questions);

}  // namespace rosetta
