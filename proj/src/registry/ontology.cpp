#include "rosetta/ontology.hpp"

#include <stdexcept>

#include "rosetta/error.hpp"
#include "rosetta/text.hpp"

namespace rosetta {

LeafCategory LeafCategory::from_string(std::string_view slash_path) {
    LeafCategory out;
    for (auto& part : text::split(slash_path, '/')) out.path.emplace_back(text::trim(part));
    return out;
}

std::string LeafCategory::to_string() const { return text::join(path, "/"); }

std::string LeafCategory::base() const {
    if (path.size() <= 1) return {};
    return text::join(std::vector<std::string>(path.begin(), path.end() - 1), "/");
}

std::size_t OntologyTree::add(std::string name, std::optional<std::size_t> parent, std::size_t line) {
    int level = 1;
    if (parent) {
        if (*parent >= nodes_.size()) throw std::invalid_argument("unknown parent node");
        level = nodes_[*parent].level + 1;
    }
    if (level > kMaxOntologyDepth) {
        throw std::invalid_argument("depth " + std::to_string(level) + " exceeds maximum of " +
                                    std::to_string(kMaxOntologyDepth));
    }
    if (child_named(parent, name)) {
        throw std::invalid_argument("duplicate sibling name '" + name + "'");
    }
    if (parent) nodes_[*parent].is_leaf = false;
    nodes_.push_back(OntologyNode{std::move(name), level, parent, true, line});
    return nodes_.size() - 1;
}

std::vector<std::size_t> OntologyTree::roots() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!nodes_[i].parent) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> OntologyTree::children(std::size_t node) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].parent == node) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> OntologyTree::leaves() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].is_leaf) out.push_back(i);
    }
    return out;
}

LeafCategory OntologyTree::path_of(std::size_t node) const {
    std::vector<std::string> rev;
    std::optional<std::size_t> cur = node;
    while (cur) {
        rev.push_back(nodes_[*cur].name);
        cur = nodes_[*cur].parent;
    }
    return LeafCategory{{rev.rbegin(), rev.rend()}};
}

std::optional<std::size_t> OntologyTree::child_named(std::optional<std::size_t> parent,
                                                     std::string_view name) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].parent == parent && nodes_[i].name == name) return i;
    }
    return std::nullopt;
}

std::optional<std::size_t> OntologyTree::find(const std::vector<std::string>& path) const {
    std::optional<std::size_t> cur;
    for (const auto& name : path) {
        cur = child_named(cur, name);
        if (!cur) return std::nullopt;
    }
    return cur;
}

std::optional<std::size_t> OntologyTree::find_leaf(const LeafCategory& leaf) const {
    if (leaf.path.empty()) return std::nullopt;
    auto node = find(leaf.path);
    if (node && nodes_[*node].is_leaf) return node;
    return std::nullopt;
}

bool operator==(const OntologyTree& a, const OntologyTree& b) {
    if (a.nodes_.size() != b.nodes_.size()) return false;
    for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
        const auto& x = a.nodes_[i];
        const auto& y = b.nodes_[i];
        if (x.name != y.name || x.level != y.level || x.parent != y.parent || x.is_leaf != y.is_leaf)
            return false;
    }
    return true;
}

OntologyTree parse_ontology(std::string_view source, const std::string& file) {
    OntologyTree tree;
    // stack[d] = node index at level d+1 on the current branch
    std::vector<std::size_t> stack;
    const auto all = text::lines(source);
    for (std::size_t i = 0; i < all.size(); ++i) {
        const std::size_t lineno = i + 1;
        std::string_view line = all[i];
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        if (text::trim(line).empty()) continue;

        std::size_t indent = 0;
        while (indent < line.size() && line[indent] == ' ') ++indent;
        if (indent < line.size() && line[indent] == '\t') {
            throw ParseError(file, lineno, "tab indentation is not allowed; use two spaces per level");
        }
        if (indent % 2 != 0) {
            throw ParseError(file, lineno, "indentation must be a multiple of two spaces");
        }
        const std::size_t depth = indent / 2;  // 0-based
        const std::string name(text::trim(line));
        if (name.find_first_of("/|\t") != std::string::npos) {
            throw ParseError(file, lineno, "node name '" + name + "' contains a reserved character");
        }
        if (depth >= static_cast<std::size_t>(kMaxOntologyDepth)) {
            throw ParseError(file, lineno,
                             "depth " + std::to_string(depth + 1) + " exceeds maximum of " +
                                 std::to_string(kMaxOntologyDepth));
        }
        if (depth > stack.size()) {
            throw ParseError(file, lineno, "node '" + name + "' has no parent at level " +
                                               std::to_string(depth));
        }
        stack.resize(depth);
        std::optional<std::size_t> parent;
        if (depth > 0) parent = stack.back();
        try {
            stack.push_back(tree.add(name, parent, lineno));
        } catch (const std::invalid_argument& e) {
            throw ParseError(file, lineno, e.what());
        }
    }
    if (tree.empty()) throw ParseError(file, 0, "ontology file contains no nodes");
    return tree;
}

std::string serialize_ontology(const OntologyTree& tree) {
    std::string out;
    // Pre-order from roots keeps the output reparseable even if nodes were
    // appended out of branch order in memory.
    std::vector<std::size_t> todo;
    auto roots = tree.roots();
    for (auto it = roots.rbegin(); it != roots.rend(); ++it) todo.push_back(*it);
    while (!todo.empty()) {
        const auto n = todo.back();
        todo.pop_back();
        const auto& node = tree.nodes()[n];
        out.append(static_cast<std::size_t>(2 * (node.level - 1)), ' ');
        out += node.name;
        out += '\n';
        auto kids = tree.children(n);
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) todo.push_back(*it);
    }
    return out;
}

}  // namespace rosetta
