#pragma once

// Run manifests: what went in, what came out, and with which settings.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace rosetta {

inline constexpr std::string_view kToolName = "rosetta";
inline constexpr std::string_view kToolVersion = "1.0.0";

// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

struct FileDigest {
    std::string path;  // label recorded in the manifest, never absolute
    std::string sha256;
};

struct Manifest {
    std::string subcommand;
    std::optional<std::uint64_t> seed;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    std::vector<FileDigest> inputs;
    std::vector<FileDigest> outputs;

    void add_input(const std::filesystem::path& file, std::string label);
    // Every regular file under `dir`, labelled "<prefix>/<relative path>", sorted.
    void add_input_tree(const std::filesystem::path& dir, const std::string& prefix);
    void add_output(const std::filesystem::path& file, std::string label);

    std::string to_json() const;
};

}  // namespace rosetta
