#include "rosetta/diagnostics.hpp"

#include <algorithm>
#include "json.hpp"

namespace rosetta {

namespace {

const char* severity_name(Severity s) { return s == Severity::error ? "error" : "warning"; }

std::string first_message(const std::vector<Diagnostic>& d) {
    if (d.empty()) return "validation failed";
    std::string out = d.front().file;
    if (d.front().line) out += ":" + std::to_string(d.front().line);
    out += ": [" + d.front().rule + "] " + d.front().message;
    if (d.size() > 1) out += " (+" + std::to_string(d.size() - 1) + " more)";
    return out;
}

}  // namespace

std::size_t ValidationReport::error_count() const {
    return static_cast<std::size_t>(std::count_if(diagnostics.begin(), diagnostics.end(),
                                                  [](const auto& d) { return d.severity == Severity::error; }));
}

std::size_t ValidationReport::warning_count() const { return diagnostics.size() - error_count(); }

bool ValidationReport::has_rule(const std::string& rule) const {
    return std::any_of(diagnostics.begin(), diagnostics.end(), [&](const auto& d) { return d.rule == rule; });
}

std::string ValidationReport::to_text() const {
    std::string out;
    for (const auto& d : diagnostics) {
        out += d.file.empty() ? "<registry>" : d.file;
        if (d.line) out += ":" + std::to_string(d.line);
        out += ": ";
        out += severity_name(d.severity);
        out += ": [" + d.rule + "] " + d.message + "\n";
    }
    return out;
}

std::string ValidationReport::to_json() const {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& d : diagnostics) {
        arr.push_back({{"rule", d.rule},
                       {"severity", severity_name(d.severity)},
                       {"file", d.file},
                       {"line", d.line},
                       {"message", d.message}});
    }
    return arr.dump(2) + "\n";
}

ValidationError::ValidationError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(first_message(diagnostics)), diagnostics_(std::move(diagnostics)) {}

}  // namespace rosetta
