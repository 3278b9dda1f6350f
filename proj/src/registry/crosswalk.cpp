#include "rosetta/crosswalk.hpp"

#include <set>
#include <stdexcept>

#include "rosetta/error.hpp"
#include "rosetta/registry.hpp"
#include "rosetta/text.hpp"

namespace rosetta {

AnswerMap parse_answer_map(std::string_view s) {
    AnswerMap out;
    if (text::trim(s).empty()) throw std::invalid_argument("empty answer map");
    for (auto& item : text::split(s, ',')) {
        const auto colon = item.find(':');
        int choice = 0;
        int code = 0;
        if (colon == std::string::npos ||
            !text::parse_int(std::string_view(item).substr(0, colon), choice) ||
            !text::parse_int(std::string_view(item).substr(colon + 1), code)) {
            throw std::invalid_argument("answer map entry must be 'choice:code', got '" + item + "'");
        }
        if (!out.emplace(choice, code).second) {
            throw std::invalid_argument("choice " + std::to_string(choice) + " mapped twice");
        }
    }
    return out;
}

std::string format_answer_map(const AnswerMap& map) {
    std::string out;
    for (const auto& [choice, code] : map) {
        if (!out.empty()) out += ',';
        out += std::to_string(choice) + ":" + std::to_string(code);
    }
    return out;
}

Crosswalk parse_crosswalk_rows(std::string_view source, const std::string& file) {
    Crosswalk cw;
    cw.file = file;
    const auto all = text::lines(source);
    for (std::size_t i = 0; i < all.size(); ++i) {
        const std::size_t lineno = i + 1;
        const std::string_view line = all[i];
        if (text::trim(line).empty() || text::trim(line).starts_with('#')) continue;
        if (line.starts_with("instrument\t")) continue;
        const auto cols = text::split(line, '\t');
        if (cols.size() != 5) {
            throw ParseError(file, lineno, "expected 5 tab-separated columns, found " +
                                               std::to_string(cols.size()));
        }
        CrosswalkLink link;
        link.line = lineno;
        link.source = SourceRef{std::string(text::trim(cols[0])), std::string(text::trim(cols[1])),
                                std::string(text::trim(cols[2]))};
        link.rosetta_id = std::string(text::trim(cols[3]));
        if (link.source.instrument.empty() || link.source.version.empty() ||
            link.source.question_id.empty() || link.rosetta_id.empty()) {
            throw ParseError(file, lineno, "empty identifier column");
        }
        try {
            link.answer_map = parse_answer_map(cols[4]);
        } catch (const std::invalid_argument& e) {
            throw ParseError(file, lineno, e.what());
        }
        cw.links.push_back(std::move(link));
    }
    return cw;
}

std::vector<Diagnostic> check_crosswalk(const Registry& reg, const Crosswalk& cw) {
    std::vector<Diagnostic> out;
    auto report = [&](std::string rule, std::size_t line, std::string msg) {
        out.push_back(Diagnostic{Severity::error, std::move(rule), cw.file, line, std::move(msg)});
    };

    // Resolved sources in first-appearance order, with every (target, line).
    std::vector<SourceRef> order;
    std::map<SourceRef, std::vector<std::pair<std::string, std::size_t>>> targets;
    // Per Rosetta question: smallest linked scale and the line that set it.
    std::map<std::size_t, std::pair<int, std::size_t>> coarsest;
    std::vector<std::size_t> rosetta_order;

    for (const auto& link : cw.links) {
        const auto vi = reg.version_index(link.source.instrument, link.source.version);
        std::optional<std::size_t> qi;
        if (!vi) {
            report("dangling-source", link.line,
                   "unknown instrument version '" + link.source.instrument + " / " + link.source.version + "'");
        } else {
            qi = reg.question_index(*vi, link.source.question_id);
            if (!qi) report("dangling-source", link.line, "unknown question " + link.source.to_string());
        }
        const auto ri = reg.rosetta_index(link.rosetta_id);
        if (!ri) report("dangling-rosetta", link.line, "unknown Rosetta question '" + link.rosetta_id + "'");

        if (qi) {
            auto [it, fresh] = targets.try_emplace(link.source);
            if (fresh) order.push_back(link.source);
            it->second.emplace_back(link.rosetta_id, link.line);
        }
        if (!qi || !ri) continue;

        const auto& src = reg.versions()[*vi].questions[*qi];
        const auto& dst = reg.rosetta()[*ri];
        const std::string where = link.source.to_string() + " -> " + dst.id;
        if (src.leaf != dst.leaf) {
            report("leaf-agreement", link.line,
                   where + ": source leaf " + src.leaf.to_string() + " differs from target leaf " +
                       dst.leaf.to_string());
        }

        const int choices = src.scale.size();
        const int codes = dst.code_count();
        std::vector<std::string> missing;
        std::vector<std::string> extra;
        for (int c = 1; c <= choices; ++c) {
            if (!link.answer_map.count(c)) missing.push_back(std::to_string(c));
        }
        for (const auto& [choice, code] : link.answer_map) {
            if (choice < 1 || choice > choices) extra.push_back(std::to_string(choice));
        }
        if (!missing.empty() || !extra.empty()) {
            std::string msg = where + ": answer map is not total over choices 1.." + std::to_string(choices);
            if (!missing.empty()) msg += "; unmapped choices " + text::join(missing, ",");
            if (!extra.empty()) msg += "; choices outside the scale " + text::join(extra, ",");
            report("answer-total", link.line, msg);
        }
        std::vector<std::string> bad_codes;
        for (const auto& [choice, code] : link.answer_map) {
            if (code < 1 || code > codes) bad_codes.push_back(std::to_string(choice) + ":" + std::to_string(code));
        }
        if (!bad_codes.empty()) {
            report("answer-range", link.line,
                   where + ": codes outside 1.." + std::to_string(codes) + " (" + text::join(bad_codes, ",") + ")");
        }
        int prev_code = 0;
        int prev_choice = 0;
        bool first = true;
        for (const auto& [choice, code] : link.answer_map) {
            if (!first && code < prev_code) {
                report("answer-monotone", link.line,
                       where + ": choice " + std::to_string(prev_choice) + "->" + std::to_string(prev_code) +
                           " but choice " + std::to_string(choice) + "->" + std::to_string(code));
                break;
            }
            first = false;
            prev_code = code;
            prev_choice = choice;
        }

        auto [cit, fresh] = coarsest.try_emplace(*ri, choices, link.line);
        if (fresh) {
            rosetta_order.push_back(*ri);
        } else if (choices < cit->second.first) {
            cit->second = {choices, link.line};
        }
    }

    for (const auto& src : order) {
        const auto& t = targets[src];
        std::set<std::string> distinct;
        for (const auto& [id, line] : t) distinct.insert(id);
        if (distinct.size() > 1) {
            report("many-to-one", t[1].second,
                   src.to_string() + " is mapped to " + std::to_string(distinct.size()) +
                       " Rosetta questions (" + text::join({distinct.begin(), distinct.end()}, ", ") + ")");
        }
        std::set<std::string> seen;
        for (const auto& [id, line] : t) {
            if (!seen.insert(id).second) {
                report("duplicate-link", line, src.to_string() + " -> " + id + " is listed more than once");
            }
        }
    }

    for (auto ri : rosetta_order) {
        const auto& dst = reg.rosetta()[ri];
        const auto [min_choices, line] = coarsest[ri];
        if (dst.code_count() > min_choices) {
            report("minimal-code", line,
                   dst.id + " has " + std::to_string(dst.code_count()) +
                       " codes but a linked source offers only " + std::to_string(min_choices) + " choices");
        }
    }
    return out;
}

Crosswalk parse_crosswalk(std::string_view source, const Registry& registry, const std::string& file) {
    auto cw = parse_crosswalk_rows(source, file);
    auto diags = check_crosswalk(registry, cw);
    if (!diags.empty()) throw ValidationError(std::move(diags));
    return cw;
}

std::string serialize_crosswalk(const Crosswalk& cw) {
    std::string out = "instrument\tversion\tquestion_id\trosetta_id\tanswer_map\n";
    for (const auto& l : cw.links) {
        out += l.source.instrument + "\t" + l.source.version + "\t" + l.source.question_id + "\t" +
               l.rosetta_id + "\t" + format_answer_map(l.answer_map) + "\n";
    }
    return out;
}

}  // namespace rosetta
