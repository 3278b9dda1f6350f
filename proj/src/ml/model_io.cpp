#include <string>
#include <vector>

#include "rosetta/error.hpp"
#include "rosetta/ml/cascade.hpp"
#include "rosetta/text.hpp"

namespace rosetta::ml {

namespace {

constexpr std::string_view kMagic = "rosetta-cascade";
constexpr int kFormatVersion = 1;

using text::format_double;

std::string gbdt_params_line(std::string_view key, const GbdtParams& p) {
    return std::string(key) + " rounds " + std::to_string(p.rounds) + " max_depth " + std::to_string(p.max_depth) +
           " learning_rate " + format_double(p.learning_rate) + " min_samples_leaf " +
           std::to_string(p.min_samples_leaf) + " lambda " + format_double(p.lambda) + " subsample " +
           format_double(p.subsample) + " seed " + std::to_string(p.seed) + "\n";
}

std::string doubles_line(std::string_view key, const std::vector<double>& v) {
    std::string out = std::string(key) + " " + std::to_string(v.size());
    for (double x : v) out += " " + format_double(x);
    return out + "\n";
}

void write_tree(std::string& out, const Tree& t, int i) {
    const auto& n = t.nodes[static_cast<std::size_t>(i)];
    if (n.is_leaf()) {
        out += "leaf " + format_double(n.weight) + "\n";
        return;
    }
    out += "split " + std::to_string(n.feature) + " " + format_double(n.threshold) + " " + format_double(n.gain) + "\n";
    write_tree(out, t, n.left);
    write_tree(out, t, n.right);
}

void write_stage(std::string& out, std::string_view name, const GbdtModel& m) {
    out += std::string(name) + "\n";
    out += "features " + std::to_string(m.features.size()) + "\n";
    for (const auto& f : m.features) out += f + "\n";
    out += "base_score " + format_double(m.base_score) + "\n";
    out += gbdt_params_line("params", m.params);
    out += doubles_line("train_loss", m.train_loss);
    out += doubles_line("feature_gain", m.feature_gain);
    out += "trees " + std::to_string(m.trees.size()) + "\n";
    for (const auto& t : m.trees) {
        out += "tree " + std::to_string(t.nodes.size()) + "\n";
        if (!t.nodes.empty()) write_tree(out, t, 0);
    }
}

class Reader {
public:
    Reader(std::string_view source, std::string file) : lines_(text::lines(source)), file_(std::move(file)) {}

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(file_, line_, msg); }

    // Next line split on spaces; the first token must equal `key`.
    std::vector<std::string> expect(std::string_view key) {
        auto tokens = next_tokens();
        if (tokens.empty() || tokens[0] != key) fail("expected '" + std::string(key) + "'");
        return tokens;
    }

    std::vector<std::string> next_tokens() {
        if (pos_ >= lines_.size()) {
            line_ = lines_.size();
            fail("unexpected end of file");
        }
        line_ = pos_ + 1;
        return text::split(lines_[pos_++], ' ');
    }

    std::string next_line() {
        if (pos_ >= lines_.size()) fail("unexpected end of file");
        line_ = pos_ + 1;
        return lines_[pos_++];
    }

    int to_int(const std::string& s) const {
        int v = 0;
        if (!text::parse_int(s, v)) fail("not an integer: '" + s + "'");
        return v;
    }
    double to_double(const std::string& s) const {
        double v = 0;
        if (!text::parse_double(s, v)) fail("not a number: '" + s + "'");
        return v;
    }
    std::uint64_t to_u64(const std::string& s) const {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(s, &used);
            if (used != s.size() || s.empty() || s[0] == '-') fail("not an unsigned integer: '" + s + "'");
            return v;
        } catch (const std::logic_error&) {
            fail("not an unsigned integer: '" + s + "'");
        }
    }
    std::size_t count(const std::vector<std::string>& tokens) const {
        if (tokens.size() < 2) fail("missing count");
        const int n = to_int(tokens[1]);
        if (n < 0) fail("negative count");
        return static_cast<std::size_t>(n);
    }

    bool at_end() const { return pos_ >= lines_.size(); }

private:
    std::vector<std::string> lines_;
    std::string file_;
    std::size_t pos_ = 0;
    std::size_t line_ = 0;
};

GbdtParams read_gbdt_params(Reader& r, std::string_view key) {
    const auto t = r.expect(key);
    if (t.size() != 15) r.fail("malformed parameter line");
    GbdtParams p;
    for (std::size_t i = 1; i + 1 < t.size(); i += 2) {
        const auto& k = t[i];
        const auto& v = t[i + 1];
        if (k == "rounds") p.rounds = r.to_int(v);
        else if (k == "max_depth") p.max_depth = r.to_int(v);
        else if (k == "learning_rate") p.learning_rate = r.to_double(v);
        else if (k == "min_samples_leaf") p.min_samples_leaf = r.to_int(v);
        else if (k == "lambda") p.lambda = r.to_double(v);
        else if (k == "subsample") p.subsample = r.to_double(v);
        else if (k == "seed") p.seed = r.to_u64(v);
        else r.fail("unknown parameter '" + k + "'");
    }
    return p;
}

std::vector<double> read_doubles(Reader& r, std::string_view key) {
    const auto t = r.expect(key);
    const auto n = r.count(t);
    if (t.size() != n + 2) r.fail("expected " + std::to_string(n) + " values");
    std::vector<double> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(r.to_double(t[i + 2]));
    return out;
}

int read_node(Reader& r, Tree& t, std::size_t features, std::size_t& budget) {
    if (budget == 0) r.fail("tree has more nodes than declared");
    --budget;
    const auto tok = r.next_tokens();
    const int index = static_cast<int>(t.nodes.size());
    t.nodes.emplace_back();
    if (!tok.empty() && tok[0] == "leaf" && tok.size() == 2) {
        t.nodes.back().weight = r.to_double(tok[1]);
        return index;
    }
    if (tok.empty() || tok[0] != "split" || tok.size() != 4) r.fail("expected 'leaf <w>' or 'split <f> <t> <gain>'");
    const int f = r.to_int(tok[1]);
    if (f < 0 || static_cast<std::size_t>(f) >= features) r.fail("split feature out of range");
    const double threshold = r.to_double(tok[2]);
    const double gain = r.to_double(tok[3]);
    const int left = read_node(r, t, features, budget);
    const int right = read_node(r, t, features, budget);
    auto& n = t.nodes[static_cast<std::size_t>(index)];
    n.feature = f;
    n.threshold = threshold;
    n.gain = gain;
    n.left = left;
    n.right = right;
    return index;
}

GbdtModel read_stage(Reader& r, std::string_view name) {
    r.expect(name);
    GbdtModel m;
    const auto n = r.count(r.expect("features"));
    for (std::size_t i = 0; i < n; ++i) m.features.push_back(r.next_line());
    const auto base = r.expect("base_score");
    if (base.size() != 2) r.fail("malformed base_score");
    m.base_score = r.to_double(base[1]);
    m.params = read_gbdt_params(r, "params");
    m.train_loss = read_doubles(r, "train_loss");
    m.feature_gain = read_doubles(r, "feature_gain");
    const auto trees = r.count(r.expect("trees"));
    for (std::size_t i = 0; i < trees; ++i) {
        std::size_t nodes = r.count(r.expect("tree"));
        Tree t;
        if (nodes > 0) read_node(r, t, m.features.size(), nodes);
        if (nodes != 0) r.fail("tree has fewer nodes than declared");
        m.trees.push_back(std::move(t));
    }
    return m;
}

}  // namespace

std::string save_cascade(const CascadeModel& m) {
    const auto& p = m.params;
    std::string out = std::string(kMagic) + " " + std::to_string(kFormatVersion) + "\n";
    out += "seed " + std::to_string(p.seed) + "\n";
    out += "threshold " + format_double(m.threshold) + "\n";
    out += gbdt_params_line("model", p.model);
    out += "selection method " + std::string(to_string(p.selection.method)) + " max_features " +
           std::to_string(p.selection.max_features) + " folds " + std::to_string(p.selection.folds) +
           " min_improvement " + format_double(p.selection.min_improvement) + " seed " +
           std::to_string(p.selection.seed) + "\n";
    out += gbdt_params_line("selection_model", p.selection.model);
    out += "imputer " + std::to_string(m.imputer.features.size()) + " " + std::string(to_string(p.impute)) + " " +
           (m.imputer.fitted ? "fitted" : "unfitted") + "\n";
    for (std::size_t i = 0; i < m.imputer.features.size(); ++i) {
        const auto& f = m.imputer.fills[i];
        out += m.imputer.features[i] + " " + std::to_string(f.value) + " " + std::string(to_string(f.strategy)) + " " +
               (f.fallback ? "fallback" : "observed") + "\n";
    }
    out += "selected " + std::to_string(m.selected.size()) + "\n";
    for (const auto& s : m.selected) out += s + "\n";
    write_stage(out, "stage1", m.stage1);
    write_stage(out, "stage2", m.stage2);
    out += "end\n";
    return out;
}

CascadeModel load_cascade(std::string_view source, const std::string& file) {
    Reader r(source, file);
    CascadeModel m;
    const auto head = r.expect(kMagic);
    if (head.size() != 2) r.fail("malformed header");
    if (r.to_int(head[1]) != kFormatVersion) r.fail("unsupported model format version " + head[1]);

    auto& p = m.params;
    const auto seed = r.expect("seed");
    if (seed.size() != 2) r.fail("malformed seed");
    p.seed = r.to_u64(seed[1]);
    const auto thr = r.expect("threshold");
    if (thr.size() != 2) r.fail("malformed threshold");
    m.threshold = r.to_double(thr[1]);
    if (!(m.threshold > 0.0 && m.threshold < 1.0)) r.fail("threshold must be in (0, 1)");
    p.threshold = m.threshold;
    p.model = read_gbdt_params(r, "model");

    const auto sel = r.expect("selection");
    if (sel.size() != 11) r.fail("malformed selection line");
    for (std::size_t i = 1; i + 1 < sel.size(); i += 2) {
        const auto& k = sel[i];
        const auto& v = sel[i + 1];
        if (k == "method") {
            auto meth = selection_method_from_string(v);
            if (!meth) r.fail("unknown selection method '" + v + "'");
            p.selection.method = *meth;
        } else if (k == "max_features") {
            p.selection.max_features = r.to_int(v);
        } else if (k == "folds") {
            p.selection.folds = r.to_int(v);
        } else if (k == "min_improvement") {
            p.selection.min_improvement = r.to_double(v);
        } else if (k == "seed") {
            p.selection.seed = r.to_u64(v);
        } else {
            r.fail("unknown selection key '" + k + "'");
        }
    }
    p.selection.model = read_gbdt_params(r, "selection_model");

    const auto imp = r.expect("imputer");
    if (imp.size() != 4) r.fail("malformed imputer line");
    const auto n = r.count(imp);
    auto strategy = impute_strategy_from_string(imp[2]);
    if (!strategy) r.fail("unknown imputation strategy '" + imp[2] + "'");
    p.impute = *strategy;
    if (imp[3] != "fitted" && imp[3] != "unfitted") r.fail("expected fitted or unfitted");
    m.imputer.fitted = imp[3] == "fitted";
    for (std::size_t i = 0; i < n; ++i) {
        const auto t = r.next_tokens();
        if (t.size() != 4) r.fail("malformed imputer row");
        FeatureFill f;
        f.value = r.to_int(t[1]);
        auto s = impute_strategy_from_string(t[2]);
        if (!s) r.fail("unknown imputation strategy '" + t[2] + "'");
        f.strategy = *s;
        if (t[3] != "fallback" && t[3] != "observed") r.fail("expected fallback or observed");
        f.fallback = t[3] == "fallback";
        m.imputer.features.push_back(t[0]);
        m.imputer.fills.push_back(f);
    }
    const auto selected = r.count(r.expect("selected"));
    for (std::size_t i = 0; i < selected; ++i) m.selected.push_back(r.next_line());
    m.stage1 = read_stage(r, "stage1");
    m.stage2 = read_stage(r, "stage2");
    r.expect("end");
    return m;
}

}  // namespace rosetta::ml
