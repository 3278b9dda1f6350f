#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rosetta {

// Malformed input file. Carries the file label and 1-based line (0 = whole file).
class ParseError : public std::runtime_error {
public:
    ParseError(std::string file, std::size_t line, const std::string& message)
        : std::runtime_error(format(file, line, message)),
          file_(std::move(file)),
          line_(line),
          message_(message) {}

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }
    const std::string& message() const noexcept { return message_; }

private:
    static std::string format(const std::string& file, std::size_t line, const std::string& msg) {
        std::string out = file.empty() ? std::string("<input>") : file;
        if (line > 0) out += ":" + std::to_string(line);
        return out + ": " + msg;
    }

    std::string file_;
    std::size_t line_;
    std::string message_;
};

// Input that is well-formed but violates a domain rule at use time
// (unknown instrument version, out-of-range choice, unlabeled subject, ...).
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rosetta
