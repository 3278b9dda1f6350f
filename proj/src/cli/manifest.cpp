#include "rosetta/manifest.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <memory>
#include <stdexcept>

#include "rosetta/text.hpp"

namespace rosetta {

std::string sha256_hex(std::string_view bytes) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
        throw std::runtime_error("SHA-256 computation failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out += kHex[digest[i] >> 4];
        out += kHex[digest[i] & 0xF];
    }
    return out;
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(text::read_file(path)); }

void Manifest::add_input(const std::filesystem::path& file, std::string label) {
    inputs.push_back({std::move(label), sha256_file(file)});
}

void Manifest::add_input_tree(const std::filesystem::path& dir, const std::string& prefix) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
        if (e.is_regular_file()) files.push_back(e.path());
    }
    std::vector<std::pair<std::string, std::filesystem::path>> labelled;
    for (const auto& f : files) {
        labelled.emplace_back(prefix + "/" + std::filesystem::relative(f, dir).generic_string(), f);
    }
    std::sort(labelled.begin(), labelled.end());
    for (const auto& [label, f] : labelled) add_input(f, label);
}

void Manifest::add_output(const std::filesystem::path& file, std::string label) {
    outputs.push_back({std::move(label), sha256_file(file)});
}

std::string Manifest::to_json() const {
    nlohmann::ordered_json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["subcommand"] = subcommand;
    j["seed"] = seed ? nlohmann::ordered_json(*seed) : nlohmann::ordered_json(nullptr);
    j["params"] = params;
    auto digests = [](const std::vector<FileDigest>& v) {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& d : v) arr.push_back({{"path", d.path}, {"sha256", d.sha256}});
        return arr;
    };
    j["inputs"] = digests(inputs);
    j["outputs"] = digests(outputs);
    return j.dump(2) + "\n";
}

}  // namespace rosetta
