#include "rosetta/cli.hpp"

#include <filesystem>
#include <ostream>
#include <string>

#include "CLI11.hpp"
#include "rosetta/analytics.hpp"
#include "rosetta/error.hpp"
#include "rosetta/fusion.hpp"
#include "rosetta/manifest.hpp"
#include "rosetta/ml/evaluation.hpp"
#include "rosetta/registry.hpp"
#include "rosetta/synth.hpp"
#include "rosetta/text.hpp"

namespace rosetta {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct Options {
    std::string registry = "data/registry";
    std::string out;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    // synth
    std::string spec;
    double effect_size = 1.0;
    // fuse
    std::string records;
    std::string labels;
    std::string policy = "max";
    // train / eval / cv
    std::string cohort;
    std::string model;
    int folds = 0;
    int max_features = 30;
    double threshold = 0.5;
    std::string selection = "greedy_forward";
    ml::GbdtParams gbdt;
    // render
    std::string id;
    std::string name;
    std::string gender = "female";
};

// Output directory plus the manifest recorded for it.
class Run {
public:
    Run(std::string subcommand, const std::string& out_dir) : dir_(out_dir) {
        manifest_.subcommand = std::move(subcommand);
        if (!dir_.empty()) fs::create_directories(dir_);
    }

    Manifest& manifest() { return manifest_; }

    void write(const std::string& name, std::string_view content) {
        const auto path = dir_ / name;
        text::write_file(path, content);
        manifest_.add_output(path, name);
    }

    void finish() {
        if (!dir_.empty()) text::write_file(dir_ / "manifest.json", manifest_.to_json());
    }

private:
    fs::path dir_;
    Manifest manifest_;
};

Registry load(const Options& o, Manifest& m) {
    Registry reg = load_canonical_registry(o.registry);
    m.add_input_tree(o.registry, "registry");
    return reg;
}

std::string read_input(const std::string& path, Manifest& m) {
    std::string content = text::read_file(path);
    m.inputs.push_back({fs::path(path).filename().string(), sha256_hex(content)});
    return content;
}

ordered_json gbdt_json(const ml::GbdtParams& p) {
    return {{"rounds", p.rounds},         {"max_depth", p.max_depth}, {"learning_rate", p.learning_rate},
            {"min_samples_leaf", p.min_samples_leaf}, {"lambda", p.lambda}, {"subsample", p.subsample}};
}

ml::CascadeParams cascade_params(const Options& o, int inner_folds) {
    ml::CascadeParams p;
    p.model = o.gbdt;
    p.model.seed = o.seed;
    p.selection.max_features = o.max_features;
    p.selection.folds = inner_folds;
    p.selection.method = *ml::selection_method_from_string(o.selection);
    p.threshold = o.threshold;
    p.seed = o.seed;
    p.workers = o.workers;
    return p;
}

ordered_json cascade_json(const ml::CascadeParams& p) {
    return {{"threshold", p.threshold},
            {"impute", ml::to_string(p.impute)},
            {"selection",
             {{"method", ml::to_string(p.selection.method)},
              {"max_features", p.selection.max_features},
              {"folds", p.selection.folds},
              {"min_improvement", p.selection.min_improvement},
              {"model", gbdt_json(p.selection.model)}}},
            {"model", gbdt_json(p.model)}};
}

ml::CohortTable load_cohort(const Options& o, const Registry& reg, Manifest& m) {
    const auto source = read_input(o.cohort, m);
    return ml::make_table(fusion::parse_fused_csv(source, reg, fs::path(o.cohort).filename().string()), reg);
}

int cmd_validate(const Options& o, std::ostream& out) {
    Run run("validate", o.out);
    const Registry reg = load_registry(o.registry);
    run.manifest().add_input_tree(o.registry, "registry");
    const auto report = validate(reg);
    out << report.to_text();
    out << report.error_count() << " errors, " << report.warning_count() << " warnings\n";
    if (!o.out.empty()) {
        run.write("validation.json", report.to_json());
        run.finish();
    }
    return report.error_count() == 0 ? 0 : 1;
}

int cmd_stats(const Options& o, std::ostream& out) {
    Run run("stats", o.out);
    const Registry reg = load(o, run.manifest());
    const auto leaves = analytics::leaf_stats(reg);
    const auto global = analytics::global_stats(reg);
    const auto matrix = analytics::overlap_matrix(reg);
    run.write("leaf_stats.csv", analytics::leaf_stats_csv(leaves));
    run.write("summary.csv", analytics::global_stats_csv(global));
    run.write("overlap_matrix.csv", analytics::overlap_matrix_csv(matrix));
    run.write("overlap_long.csv", analytics::overlap_long_csv(matrix));
    run.finish();
    out << global.rosetta_questions << " Rosetta questions, " << global.source_questions
        << " mapped source questions (headline figure " << analytics::kHeadlineSourceQuestions << ")\n";
    return 0;
}

int cmd_synth(const Options& o, std::ostream& out, bool seed_given, bool effect_given) {
    Run run("synth", o.out);
    const Registry reg = load(o, run.manifest());
    synth::GeneratorSpec spec = synth::default_spec();
    if (!o.spec.empty()) spec = synth::parse_spec(read_input(o.spec, run.manifest()), fs::path(o.spec).filename().string());
    if (seed_given) spec.seed = o.seed;
    if (effect_given) spec.effect_size = o.effect_size;
    run.manifest().seed = spec.seed;
    run.manifest().params = {{"effect_size", spec.effect_size},
                             {"second_version_probability", spec.second_version_probability}};
    const auto cohort = synth::generate(spec, reg, o.workers);
    run.write("records.tsv", fusion::serialize_records(cohort.records));
    run.write("labels.tsv", fusion::serialize_labels(cohort.labels));
    run.write("spec.json", synth::serialize_spec(spec));
    run.finish();
    out << cohort.labels.size() << " subjects, " << cohort.records.size() << " assessment records\n";
    return 0;
}

int cmd_fuse(const Options& o, std::ostream& out) {
    Run run("fuse", o.out);
    const Registry reg = load(o, run.manifest());
    const auto policy = *fusion::policy_from_string(o.policy);
    run.manifest().params = {{"policy", o.policy}};
    const auto records = fusion::parse_records(read_input(o.records, run.manifest()),
                                               fs::path(o.records).filename().string());
    const auto labels = fusion::parse_labels(read_input(o.labels, run.manifest()),
                                             fs::path(o.labels).filename().string());
    const auto cohort = fusion::build_cohort(records, labels, reg, policy, o.workers);
    run.write("cohort.csv", fusion::fused_csv(cohort, reg));
    run.write("provenance.json", fusion::provenance_json(cohort, reg));
    run.write("missingness.csv", fusion::missingness_csv(cohort, reg));
    run.finish();
    const auto counts = cohort.class_counts();
    out << cohort.vectors.size() << " subjects fused (autism " << counts[0] << ", adhd " << counts[1] << ", neither "
        << counts[2] << ")\n";
    return 0;
}

int cmd_train(const Options& o, std::ostream& out) {
    Run run("train", o.out);
    const Registry reg = load(o, run.manifest());
    const auto table = load_cohort(o, reg, run.manifest());
    const auto params = cascade_params(o, o.folds > 0 ? o.folds : 3);
    run.manifest().seed = o.seed;
    run.manifest().params = cascade_json(params);
    const auto model = ml::train_cascade(table, params);
    run.write("model.txt", ml::save_cascade(model));
    run.finish();
    out << "trained cascade on " << table.rows() << " subjects with " << model.selected.size()
        << " selected Rosetta questions\n";
    return 0;
}

int cmd_eval(const Options& o, std::ostream& out) {
    Run run("eval", o.out);
    const Registry reg = load(o, run.manifest());
    const auto model = ml::load_cascade(read_input(o.model, run.manifest()), fs::path(o.model).filename().string());
    const auto table = load_cohort(o, reg, run.manifest());
    run.manifest().seed = model.params.seed;
    const auto ev = ml::evaluate_model(model, table);
    run.write("predictions.csv", ml::predictions_csv(ev));
    run.write("evaluation.json", ml::evaluation_json(ev));
    run.finish();
    out << "stage-1 AUC " << (ev.auc_stage1 ? text::format_double(*ev.auc_stage1) : "n/a") << ", stage-2 AUC "
        << (ev.auc_stage2 ? text::format_double(*ev.auc_stage2) : "n/a") << "\n";
    return 0;
}

int cmd_cv(const Options& o, std::ostream& out) {
    Run run("cv", o.out);
    const Registry reg = load(o, run.manifest());
    const auto table = load_cohort(o, reg, run.manifest());
    ml::CvParams params;
    params.folds = o.folds > 0 ? o.folds : 5;
    params.cascade = cascade_params(o, 3);
    run.manifest().seed = o.seed;
    run.manifest().params = cascade_json(params.cascade);
    run.manifest().params["folds"] = params.folds;
    const auto report = ml::cross_validate(table, params);
    run.write("eval_report.csv", ml::eval_report_csv(report));
    run.write("eval_report.json", ml::eval_report_json(report));
    run.finish();
    out << "mean stage-1 AUC " << text::format_double(report.auc_stage1) << ", mean stage-2 AUC "
        << text::format_double(report.auc_stage2) << " over " << report.folds << " folds\n";
    return 0;
}

int cmd_render(const Options& o, std::ostream& out) {
    Run run("render", o.out);
    const Registry reg = load(o, run.manifest());
    const auto* q = reg.find_rosetta(o.id);
    if (!q) throw DomainError("unknown Rosetta question " + o.id);
    const auto rendered =
        render_question(*q, o.name, o.gender == "male" ? Gender::male : Gender::female);
    out << rendered << "\n";
    if (!o.out.empty()) {
        run.manifest().params = {{"id", o.id}, {"name", o.name}, {"gender", o.gender}};
        run.write("question.txt", rendered + "\n");
        run.finish();
    }
    return 0;
}

void add_registry(CLI::App* sub, Options& o) {
    sub->add_option("--registry", o.registry, "Registry directory")->capture_default_str();
}

void add_model_options(CLI::App* sub, Options& o) {
    sub->add_option("--seed", o.seed, "Random seed")->capture_default_str();
    sub->add_option("--max-features", o.max_features, "Feature budget shared by both stages")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--threshold", o.threshold, "Stage-1 probability that triggers stage 2")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--selection", o.selection, "Feature selection method")
        ->capture_default_str()
        ->check(CLI::IsMember({"greedy_forward", "gain_filter"}));
    sub->add_option("--rounds", o.gbdt.rounds, "Boosting rounds")->capture_default_str()->check(CLI::NonNegativeNumber);
    sub->add_option("--max-depth", o.gbdt.max_depth, "Tree depth")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--learning-rate", o.gbdt.learning_rate, "Shrinkage per round")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--workers", o.workers, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Harmonize questionnaire instruments into Rosetta space and model autism/ADHD cohorts.", "rosetta"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    auto* validate_cmd = app.add_subcommand("validate", "Check the registry against every structural rule");
    add_registry(validate_cmd, o);
    validate_cmd->add_option("--out", o.out, "Optional output directory for validation.json");

    auto* stats_cmd = app.add_subcommand("stats", "Per-leaf fusion statistics and instrument overlap");
    add_registry(stats_cmd, o);
    stats_cmd->add_option("--out", o.out, "Output directory")->required();

    auto* synth_cmd = app.add_subcommand("synth", "Generate a labeled synthetic cohort");
    add_registry(synth_cmd, o);
    synth_cmd->add_option("--out", o.out, "Output directory")->required();
    synth_cmd->add_option("--spec", o.spec, "Generator spec (JSON)");
    auto* synth_seed = synth_cmd->add_option("--seed", o.seed, "Random seed (overrides the spec)");
    auto* synth_effect = synth_cmd->add_option("--effect-size", o.effect_size, "Class separation (overrides the spec)")
                             ->check(CLI::NonNegativeNumber);
    synth_cmd->add_option("--workers", o.workers, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);

    auto* fuse_cmd = app.add_subcommand("fuse", "Translate and merge assessment records into a labeled cohort");
    add_registry(fuse_cmd, o);
    fuse_cmd->add_option("--records", o.records, "Records file")->required();
    fuse_cmd->add_option("--labels", o.labels, "Labels file")->required();
    fuse_cmd->add_option("--out", o.out, "Output directory")->required();
    fuse_cmd->add_option("--policy", o.policy, "Conflict policy")
        ->capture_default_str()
        ->check(CLI::IsMember({"max", "first", "latest"}));
    fuse_cmd->add_option("--workers", o.workers, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);

    auto* train_cmd = app.add_subcommand("train", "Train the two-stage cascade on a fused cohort");
    add_registry(train_cmd, o);
    train_cmd->add_option("--cohort", o.cohort, "Fused cohort (cohort.csv)")->required();
    train_cmd->add_option("--out", o.out, "Output directory")->required();
    train_cmd->add_option("--folds", o.folds, "Inner folds for feature selection [3]")->check(CLI::Range(2, 1000));
    add_model_options(train_cmd, o);

    auto* eval_cmd = app.add_subcommand("eval", "Score a trained cascade on a fused cohort");
    add_registry(eval_cmd, o);
    eval_cmd->add_option("--model", o.model, "Model file (model.txt)")->required();
    eval_cmd->add_option("--cohort", o.cohort, "Fused cohort (cohort.csv)")->required();
    eval_cmd->add_option("--out", o.out, "Output directory")->required();

    auto* cv_cmd = app.add_subcommand("cv", "Cross-validated AUC of the cascade");
    add_registry(cv_cmd, o);
    cv_cmd->add_option("--cohort", o.cohort, "Fused cohort (cohort.csv)")->required();
    cv_cmd->add_option("--out", o.out, "Output directory")->required();
    cv_cmd->add_option("--folds", o.folds, "Outer folds [5]")->check(CLI::Range(2, 1000));
    add_model_options(cv_cmd, o);

    auto* render_cmd = app.add_subcommand("render", "Render a Rosetta question for a named child");
    add_registry(render_cmd, o);
    render_cmd->add_option("--id", o.id, "Rosetta question id")->required();
    render_cmd->add_option("--name", o.name, "Child's name")->required();
    render_cmd->add_option("--gender", o.gender, "Pronoun set")
        ->capture_default_str()
        ->check(CLI::IsMember({"male", "female"}));
    render_cmd->add_option("--out", o.out, "Optional output directory for question.txt");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    if (o.threshold <= 0.0 || o.threshold >= 1.0) {
        err << "rosetta: error: --threshold must lie strictly between 0 and 1\n";
        return 2;
    }

    try {
        if (validate_cmd->parsed()) return cmd_validate(o, out);
        if (stats_cmd->parsed()) return cmd_stats(o, out);
        if (synth_cmd->parsed()) return cmd_synth(o, out, synth_seed->count() > 0, synth_effect->count() > 0);
        if (fuse_cmd->parsed()) return cmd_fuse(o, out);
        if (train_cmd->parsed()) return cmd_train(o, out);
        if (eval_cmd->parsed()) return cmd_eval(o, out);
        if (cv_cmd->parsed()) return cmd_cv(o, out);
        if (render_cmd->parsed()) return cmd_render(o, out);
    } catch (const ValidationError& e) {
        for (const auto& d : e.diagnostics()) {
            if (d.severity == Severity::error) err << d.file << ":" << d.line << ": error: [" << d.rule << "] " << d.message << "\n";
        }
        err << "rosetta: error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "rosetta: error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace rosetta
