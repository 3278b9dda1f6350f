#pragma once

#include <filesystem>
#include <string>

#include "rosetta/ml/dataset.hpp"
#include "rosetta/registry.hpp"
#include "rosetta/synth.hpp"

namespace rosetta::fixtures {

inline std::filesystem::path data_dir() { return ROSETTA_DATA_DIR; }
inline std::filesystem::path registry_dir() { return data_dir() / "registry"; }

// Bundled registry, loaded once per process.
inline const Registry& canonical() {
    static const Registry reg = load_canonical_registry(registry_dir());
    return reg;
}

// Synthetic cohort over the bundled registry, fused and tabulated.
ml::CohortTable synthetic_table(std::array<std::size_t, 3> counts, double effect_size, std::uint64_t seed);

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag);
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace rosetta::fixtures
