#include "rosetta/rosetta_question.hpp"

#include <cctype>
#include <set>
#include <stdexcept>

#include "rosetta/error.hpp"
#include "rosetta/text.hpp"

namespace rosetta {

namespace {

constexpr std::string_view kNameToken = "[NAME]";
constexpr std::string_view kPossessiveToken = "[his/her]";

}  // namespace

std::string check_template(std::string_view body) {
    bool has_name = false;
    std::size_t pos = 0;
    while ((pos = body.find('[', pos)) != std::string_view::npos) {
        const auto close = body.find(']', pos);
        if (close == std::string_view::npos) return "unterminated placeholder";
        const auto token = body.substr(pos, close - pos + 1);
        if (token == kNameToken) {
            has_name = true;
        } else if (token != kPossessiveToken) {
            return "unknown placeholder token " + std::string(token);
        }
        pos = close + 1;
    }
    if (!has_name) return "body template must contain [NAME]";
    return {};
}

std::string render_question(const RosettaQuestion& q, std::string_view name, Gender gender) {
    if (auto why = check_template(q.body_template); !why.empty()) {
        throw std::invalid_argument(q.id + ": " + why);
    }
    const std::string_view possessive = gender == Gender::male ? "his" : "her";
    std::string out;
    std::string_view body = q.body_template;
    std::size_t pos = 0;
    while (pos < body.size()) {
        const auto open = body.find('[', pos);
        if (open == std::string_view::npos) {
            out.append(body.substr(pos));
            break;
        }
        out.append(body.substr(pos, open - pos));
        const auto close = body.find(']', open);
        const auto token = body.substr(open, close - open + 1);
        out.append(token == kNameToken ? name : possessive);
        pos = close + 1;
    }
    return out;
}

bool is_valid_rosetta_id(std::string_view id) {
    if (!id.starts_with("R-")) return false;
    const auto dash = id.rfind('-');
    if (dash <= 2 || dash + 1 >= id.size()) return false;
    const auto slug = id.substr(2, dash - 2);
    const auto num = id.substr(dash + 1);
    for (char c : slug) {
        if (!(std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) ||
              c == '-'))
            return false;
    }
    if (slug.front() == '-' || slug.back() == '-') return false;
    int n = 0;
    return text::parse_int(num, n) && n > 0 && num.front() != '0';
}

std::vector<RosettaQuestion> parse_rosetta_questions(std::string_view source,
                                                     const OntologyTree& ontology,
                                                     const std::string& file) {
    std::vector<RosettaQuestion> out;
    std::set<std::string> ids;
    const auto all = text::lines(source);
    for (std::size_t i = 0; i < all.size(); ++i) {
        const std::size_t lineno = i + 1;
        const std::string_view line = all[i];
        if (text::trim(line).empty() || text::trim(line).starts_with('#')) continue;
        if (line.starts_with("rosetta_id\t")) continue;
        const auto cols = text::split(line, '\t');
        if (cols.size() != 4) {
            throw ParseError(file, lineno, "expected 4 tab-separated columns, found " +
                                               std::to_string(cols.size()));
        }
        RosettaQuestion q;
        q.line = lineno;
        q.id = std::string(text::trim(cols[0]));
        if (!is_valid_rosetta_id(q.id)) throw ParseError(file, lineno, "malformed Rosetta id '" + q.id + "'");
        if (!ids.insert(q.id).second) throw ParseError(file, lineno, "duplicate Rosetta id '" + q.id + "'");
        q.leaf = LeafCategory::from_string(cols[1]);
        if (!ontology.find_leaf(q.leaf)) {
            throw ParseError(file, lineno, "unknown leaf path '" + cols[1] + "'");
        }
        q.body_template = cols[2];
        if (auto why = check_template(q.body_template); !why.empty()) {
            throw ParseError(file, lineno, why);
        }
        int expected = 1;
        for (auto& item : text::split(cols[3], '|')) {
            const auto eq = item.find('=');
            int code = 0;
            if (eq == std::string::npos || !text::parse_int(std::string_view(item).substr(0, eq), code)) {
                throw ParseError(file, lineno, "answer code must be 'n=label', got '" + item + "'");
            }
            if (code != expected) {
                throw ParseError(file, lineno, "answer codes must be contiguous from 1 (found " +
                                                   std::to_string(code) + ")");
            }
            std::string label(text::trim(std::string_view(item).substr(eq + 1)));
            if (label.empty()) throw ParseError(file, lineno, "empty label for code " + std::to_string(code));
            q.codes.push_back(RosettaCode{code, std::move(label)});
            ++expected;
        }
        if (q.codes.size() < 2) throw ParseError(file, lineno, "Rosetta question needs at least 2 codes");
        out.push_back(std::move(q));
    }
    return out;
}

std::string serialize_rosetta_questions(const std::vector<RosettaQuestion>& questions) {
    std::string out = "rosetta_id\tleaf_path\tbody_template\tcodes\n";
    for (const auto& q : questions) {
        std::vector<std::string> codes;
        for (const auto& c : q.codes) codes.push_back(std::to_string(c.code) + "=" + c.label);
        out += q.id + "\t" + q.leaf.to_string() + "\t" + q.body_template + "\t" + text::join(codes, "|") + "\n";
    }
    return out;
}

}  // namespace rosetta
