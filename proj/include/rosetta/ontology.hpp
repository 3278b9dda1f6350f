#pragma once

// Clinical-domain taxonomy: a forest of at most four levels whose leaves are
// the categories every instrument question and Rosetta question is filed under.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rosetta {

inline constexpr int kMaxOntologyDepth = 4;

// Path of node names from a level-1 domain down to a leaf, e.g.
// {"Cognitive", "Behavioral", "Emotional", "Adaptability"}.
struct LeafCategory {
    std::vector<std::string> path;

    static LeafCategory from_string(std::string_view slash_path);
    std::string to_string() const;  // "/"-joined
    const std::string& leaf_name() const { return path.back(); }
    // Path without the leaf, "/"-joined; the Table-5 "base category".
    std::string base() const;

    friend bool operator==(const LeafCategory&, const LeafCategory&) = default;
    friend auto operator<=>(const LeafCategory&, const LeafCategory&) = default;
};

struct OntologyNode {
    std::string name;
    int level = 1;                      // 1..4
    std::optional<std::size_t> parent;  // index into OntologyTree::nodes()
    bool is_leaf = true;
    std::size_t line = 0;               // source line, 0 if built in memory
};

class OntologyTree {
public:
    OntologyTree() = default;

    // Appends a node under `parent` (nullopt for a level-1 root). Throws
    // std::invalid_argument on a duplicate sibling name or excess depth.
    std::size_t add(std::string name, std::optional<std::size_t> parent, std::size_t line = 0);

    const std::vector<OntologyNode>& nodes() const { return nodes_; }
    std::vector<std::size_t> roots() const;
    std::vector<std::size_t> children(std::size_t node) const;
    // Leaf node indices in file (pre-)order.
    std::vector<std::size_t> leaves() const;
    LeafCategory path_of(std::size_t node) const;

    // Index of the leaf at exactly this path, if any.
    std::optional<std::size_t> find_leaf(const LeafCategory& leaf) const;
    std::optional<std::size_t> find(const std::vector<std::string>& path) const;

    bool empty() const { return nodes_.empty(); }

    // Structural equality: same names, levels, parents, in order. Line numbers ignored.
    friend bool operator==(const OntologyTree& a, const OntologyTree& b);

private:
    std::optional<std::size_t> child_named(std::optional<std::size_t> parent,
                                           std::string_view name) const;
    std::vector<OntologyNode> nodes_;
};

// Indentation-encoded ontology file: one node per line, two spaces per level,
// '#' starts a comment. Throws ParseError with the offending line number.
OntologyTree parse_ontology(std::string_view source, const std::string& file = "ontology.txt");
std::string serialize_ontology(const OntologyTree& tree);

}  // namespace rosetta
