#include <filesystem>
#include <map>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"
#include "rosetta/cli.hpp"
#include "rosetta/manifest.hpp"
#include "rosetta/text.hpp"

using namespace rosetta;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

CliResult run(std::vector<std::string> args) {
    args.insert(args.begin(), "rosetta");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    CliResult r;
    r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string reg_dir() { return fixtures::registry_dir().string(); }

std::map<std::string, std::string> tree_digests(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = sha256_file(e.path());
    }
    return out;
}

std::string small_spec(const fs::path& dir) {
    const auto path = dir / "spec.json";
    text::write_file(path, R"({"seed": 5, "class_counts": {"autism": 80, "adhd": 30, "neither": 30}, "effect_size": 3.0})");
    return path.string();
}

// synth -> fuse -> train -> eval -> cv into `dir`; every step must succeed.
void pipeline(const fs::path& dir, const std::string& spec, const std::string& workers) {
    const auto d = [&](const char* sub) { return (dir / sub).string(); };
    const std::vector<std::string> ml{"--max-features", "3", "--rounds", "15", "--workers", workers, "--registry", reg_dir()};
    auto with = [&](std::vector<std::string> a) {
        a.insert(a.end(), ml.begin(), ml.end());
        return a;
    };
    REQUIRE(run({"synth", "--registry", reg_dir(), "--spec", spec, "--out", d("synth"), "--workers", workers}).code == 0);
    REQUIRE(run({"fuse", "--registry", reg_dir(), "--records", d("synth") + "/records.tsv", "--labels",
                 d("synth") + "/labels.tsv", "--out", d("fuse"), "--workers", workers})
                .code == 0);
    REQUIRE(run(with({"train", "--cohort", d("fuse") + "/cohort.csv", "--out", d("train")})).code == 0);
    REQUIRE(run({"eval", "--registry", reg_dir(), "--model", d("train") + "/model.txt", "--cohort",
                 d("fuse") + "/cohort.csv", "--out", d("eval")})
                .code == 0);
    REQUIRE(run(with({"cv", "--cohort", d("fuse") + "/cohort.csv", "--out", d("cv"), "--folds", "3"})).code == 0);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("help text matches the snapshot") {
    const auto r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out == text::read_file(fs::path(ROSETTA_TEST_DIR) / "data" / "help.txt"));
}

TEST_CASE("validate on the bundled registry") {
    const auto r = run({"validate", "--registry", reg_dir()});
    CHECK(r.code == 0);
    CHECK(r.out.find("0 errors, 0 warnings") != std::string::npos);
    fixtures::TempDir tmp("cli-validate");
    CHECK(run({"validate", "--registry", reg_dir(), "--out", tmp.path().string()}).code == 0);
    CHECK(text::read_file(tmp.path() / "validation.json") == "[]\n");
    CHECK(fs::exists(tmp.path() / "manifest.json"));
}

TEST_CASE("stats writes the leaf table") {
    fixtures::TempDir tmp("cli-stats");
    const auto r = run({"stats", "--registry", reg_dir(), "--out", tmp.path().string()});
    REQUIRE(r.code == 0);
    const auto csv = text::read_file(tmp.path() / "leaf_stats.csv");
    CHECK(csv.find("Cognitive/Behavioral/Emotional,Adaptability,6,32,4\n") != std::string::npos);
    for (const char* f : {"summary.csv", "overlap_matrix.csv", "overlap_long.csv", "manifest.json"}) {
        CHECK(fs::exists(tmp.path() / f));
    }
}

TEST_CASE("synth with the same seed reproduces its outputs") {
    fixtures::TempDir a("cli-synth-a"), b("cli-synth-b");
    REQUIRE(run({"synth", "--registry", reg_dir(), "--seed", "7", "--out", a.path().string()}).code == 0);
    REQUIRE(run({"synth", "--registry", reg_dir(), "--seed", "7", "--out", b.path().string()}).code == 0);
    CHECK(tree_digests(a.path()) == tree_digests(b.path()));
    const auto manifest = nlohmann::json::parse(text::read_file(a.path() / "manifest.json"));
    CHECK(manifest.at("seed").get<std::uint64_t>() == 7);
    CHECK(manifest.at("outputs").size() == 3);
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run({}).code == 2);
    CHECK(run({"validate", "--registry", reg_dir(), "--bogus"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"stats", "--registry", reg_dir()}).code == 2);
    const auto r = run({"train", "--cohort", "x.csv", "--out", "y", "--threshold", "1.5"});
    CHECK(r.code == 2);
    CHECK(r.err.find("--threshold") != std::string::npos);
    CHECK(run({"render", "--registry", reg_dir(), "--id", "R-adaptability-1", "--name", "A", "--gender", "other"}).code ==
          2);
}

TEST_CASE("invalid inputs exit with 1") {
    fixtures::TempDir tmp("cli-bad");
    CHECK(run({"fuse", "--registry", reg_dir(), "--records", (tmp.path() / "none.tsv").string(), "--labels",
               (tmp.path() / "none.tsv").string(), "--out", (tmp.path() / "o").string()})
              .code == 1);
    CHECK(run({"validate", "--registry", (tmp.path() / "missing").string()}).code == 1);

    const auto broken = tmp.path() / "registry";
    fs::copy(fixtures::registry_dir(), broken, fs::copy_options::recursive);
    auto cw = text::read_file(broken / "crosswalk.tsv");
    cw += "SRS-2\tSchool-Age\t24\tR-nowhere-1\t1:1,2:2,3:3,4:3\n";
    text::write_file(broken / "crosswalk.tsv", cw);
    const auto r = run({"validate", "--registry", broken.string()});
    CHECK(r.code == 1);
    CHECK(r.out.find("dangling-rosetta") != std::string::npos);

    const auto unknown = run({"render", "--registry", reg_dir(), "--id", "R-none-9", "--name", "Alex"});
    CHECK(unknown.code == 1);
    CHECK(unknown.err.find("R-none-9") != std::string::npos);
}

TEST_CASE("render fills the template") {
    const auto r = run({"render", "--registry", reg_dir(), "--id", "R-adaptability-1", "--name", "Alex", "--gender", "male"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("Does Alex become unusually upset", 0) == 0);
    CHECK(r.out.find("in his bedtime routine") != std::string::npos);
    CHECK(r.out.find('[') == std::string::npos);
}

TEST_CASE("pipeline leaves inputs untouched and is reproducible across worker counts") {
    fixtures::TempDir a("cli-pipe-a"), b("cli-pipe-b"), in("cli-pipe-in");
    const auto spec = small_spec(in.path());
    const auto registry_before = tree_digests(fixtures::registry_dir());
    const auto spec_before = sha256_file(spec);
    pipeline(a.path(), spec, "1");
    pipeline(b.path(), spec, "4");
    CHECK(tree_digests(fixtures::registry_dir()) == registry_before);
    CHECK(sha256_file(spec) == spec_before);

    const auto da = tree_digests(a.path());
    const auto db = tree_digests(b.path());
    REQUIRE(da.size() == db.size());
    for (const auto& [file, digest] : da) {
        CAPTURE(file);
        if (file.ends_with("manifest.json")) continue;
        CHECK(db.at(file) == digest);
    }
    for (const char* f : {"fuse/cohort.csv", "train/model.txt", "eval/predictions.csv", "cv/eval_report.json"}) {
        CHECK(da.count(f) == 1);
    }
    // manifests record inputs by label only, never absolute paths
    const auto m = text::read_file(a.path() / "train" / "manifest.json");
    CHECK(m.find(a.path().string()) == std::string::npos);
}

}  // TEST_SUITE
