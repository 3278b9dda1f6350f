#pragma once

// The registry bundles ontology, instrument versions, Rosetta questions and
// the crosswalk, with lookup indexes built once at construction. Values are
// immutable afterwards and safe to share read-only across threads.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rosetta/crosswalk.hpp"
#include "rosetta/diagnostics.hpp"
#include "rosetta/instrument.hpp"
#include "rosetta/ontology.hpp"
#include "rosetta/rosetta_question.hpp"

namespace rosetta {

// A crosswalk link whose source and target both resolve, with the answer map
// flattened to a vector indexed by choice-1 (0 where the map is partial).
struct ResolvedLink {
    std::size_t link = 0;     // index into crosswalk().links
    std::size_t version = 0;  // index into versions()
    std::size_t question = 0; // index into versions()[version].questions
    std::size_t rosetta = 0;  // index into rosetta()
    std::vector<int> codes;

    int code_for(int choice) const {
        return choice >= 1 && choice <= static_cast<int>(codes.size()) ? codes[choice - 1] : 0;
    }
};

class Registry {
public:
    Registry() = default;
    Registry(OntologyTree ontology, std::vector<InstrumentVersion> versions,
             std::vector<RosettaQuestion> rosetta, Crosswalk crosswalk = {});

    const OntologyTree& ontology() const { return ontology_; }
    const std::vector<InstrumentVersion>& versions() const { return versions_; }
    const std::vector<RosettaQuestion>& rosetta() const { return rosetta_; }
    const Crosswalk& crosswalk() const { return crosswalk_; }

    std::optional<std::size_t> version_index(std::string_view instrument, std::string_view version) const;
    std::optional<std::size_t> rosetta_index(std::string_view id) const;
    const RosettaQuestion* find_rosetta(std::string_view id) const;
    std::optional<std::size_t> question_index(std::size_t version, std::string_view question_id) const;

    // Resolved links for one source question (normally zero or one).
    const std::vector<std::size_t>& links_for(std::size_t version, std::size_t question) const;
    const std::vector<ResolvedLink>& resolved_links() const { return resolved_; }
    // Resolved links targeting one Rosetta question.
    const std::vector<std::size_t>& links_into(std::size_t rosetta) const { return into_[rosetta]; }

    // Distinct instrument names in order of first appearance among versions.
    const std::vector<std::string>& instrument_names() const { return instrument_names_; }

    Registry with_crosswalk(Crosswalk crosswalk) const;

private:
    void build_indexes();

    OntologyTree ontology_;
    std::vector<InstrumentVersion> versions_;
    std::vector<RosettaQuestion> rosetta_;
    Crosswalk crosswalk_;

    std::map<std::pair<std::string, std::string>, std::size_t, std::less<>> version_by_key_;
    std::map<std::string, std::size_t, std::less<>> rosetta_by_id_;
    std::vector<std::map<std::string, std::size_t, std::less<>>> question_by_id_;
    std::vector<std::vector<std::vector<std::size_t>>> links_by_question_;
    std::vector<std::vector<std::size_t>> into_;
    std::vector<ResolvedLink> resolved_;
    std::vector<std::string> instrument_names_;
};

// Directory layout: ontology.txt, rosetta.tsv, crosswalk.tsv and
// instruments/*.tsv (loaded in file-name order). Syntax errors throw
// ParseError; crosswalk rules are not checked here (see validate()).
Registry load_registry(const std::filesystem::path& dir);

// load_registry + validate; throws ValidationError when any error is reported.
Registry load_canonical_registry(const std::filesystem::path& dir);

// Every structural rule, as diagnostics. Never throws; unmapped source
// questions are warnings. Empty iff the registry is canonical.
ValidationReport validate(const Registry& registry);

// The three level-1 domains every complete ontology must have.
inline const std::vector<std::string> kOntologyDomains = {"Cognitive", "Motor", "Somatic"};

}  // namespace rosetta
