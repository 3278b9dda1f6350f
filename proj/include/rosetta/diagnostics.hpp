#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rosetta {

enum class Severity { error, warning };

struct Diagnostic {
    Severity severity = Severity::error;
    std::string rule;  // stable rule id, e.g. "minimal-code"
    std::string file;
    std::size_t line = 0;
    std::string message;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct ValidationReport {
    std::vector<Diagnostic> diagnostics;

    std::size_t error_count() const;
    std::size_t warning_count() const;
    bool canonical() const { return diagnostics.empty(); }
    bool has_rule(const std::string& rule) const;

    // One "file:line: severity: [rule] message" line per diagnostic.
    std::string to_text() const;
    // JSON array, one object per diagnostic.
    std::string to_json() const;

    friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

// Thrown by the strict loaders when a file is syntactically fine but breaks
// structural rules.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<Diagnostic> diagnostics);
    const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

}  // namespace rosetta
