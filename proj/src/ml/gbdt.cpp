#include "rosetta/ml/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <unordered_map>

#include "rosetta/random.hpp"

namespace rosetta::ml {

void check_params(const GbdtParams& p) {
    if (p.rounds < 0) throw std::invalid_argument("rounds must be >= 0");
    if (p.max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");
    if (!(p.learning_rate >= 0.0 && p.learning_rate <= 1.0)) throw std::invalid_argument("learning_rate must be in [0, 1]");
    if (p.min_samples_leaf < 1) throw std::invalid_argument("min_samples_leaf must be >= 1");
    if (!(p.lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
    if (!(p.subsample > 0.0 && p.subsample <= 1.0)) throw std::invalid_argument("subsample must be in (0, 1]");
}

double sigmoid(double f) {
    if (f >= 0) return 1.0 / (1.0 + std::exp(-f));
    const double e = std::exp(f);
    return e / (1.0 + e);
}

double logistic_loss(double f, int y) {
    const double z = y ? -f : f;
    return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double logistic_gradient(double f, int y) { return y ? -sigmoid(-f) : sigmoid(f); }

double logistic_hessian(double f, int) {
    const double p = sigmoid(f);
    return p * (1.0 - p);
}

double split_gain(double gl, double hl, double gr, double hr, double lambda) {
    const double g = gl + gr;
    const double h = hl + hr;
    return gl * gl / (hl + lambda) + gr * gr / (hr + lambda) - g * g / (h + lambda);
}

bool improves_on(double gain, double best) {
    return gain > best + 1e-12 * std::max(1.0, std::abs(best));
}

double Tree::predict(std::span<const double> row) const {
    std::size_t i = 0;
    while (!nodes[i].is_leaf()) {
        const auto& n = nodes[i];
        i = static_cast<std::size_t>(row[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left : n.right);
    }
    return nodes[i].weight;
}

int Tree::depth() const {
    if (nodes.empty()) return 0;
    int deepest = 0;
    std::vector<std::pair<int, int>> stack{{0, 0}};
    while (!stack.empty()) {
        auto [i, d] = stack.back();
        stack.pop_back();
        const auto& n = nodes[static_cast<std::size_t>(i)];
        if (n.is_leaf()) {
            deepest = std::max(deepest, d);
        } else {
            stack.push_back({n.left, d + 1});
            stack.push_back({n.right, d + 1});
        }
    }
    return deepest;
}

double GbdtModel::margin(std::span<const double> row) const {
    double m = base_score;
    for (const auto& t : trees) m += t.predict(row);
    return m;
}

double GbdtModel::predict_proba(std::span<const double> row) const { return sigmoid(margin(row)); }

std::vector<double> GbdtModel::predict_proba(const Dataset& data) const {
    if (data.cols() != features.size()) throw std::invalid_argument("predict: column count does not match model");
    std::vector<double> out(data.rows());
    for (std::size_t r = 0; r < data.rows(); ++r) out[r] = predict_proba(data.row(r));
    return out;
}

namespace {

// Rows of one fit collapsed into distinct bin patterns. Splits only look at
// bins, so rows sharing a pattern always share a margin.
struct Patterns {
    std::size_t n = 0;  // patterns
    std::size_t d = 0;  // features
    std::vector<const std::vector<double>*> values;  // per feature: sorted distinct values
    std::vector<std::uint32_t> bins;                 // bins[f * n + p]
    std::vector<std::uint32_t> of_row;               // pattern of each fitted row
    std::vector<int> row_label;                      // label of each fitted row
    std::vector<double> count;                       // rows per pattern
    std::vector<double> positives;                   // positive rows per pattern
};

class TreeBuilder {
public:
    TreeBuilder(const Patterns& b, const GbdtParams& p, std::span<const double> g, std::span<const double> h,
                std::span<const double> count, std::vector<double>& feature_gain)
        : b_(b), p_(p), g_(g), h_(h), count_(count), feature_gain_(feature_gain) {}

    Tree build(std::vector<std::uint32_t>& patterns) {
        Tree t;
        scratch_.resize(patterns.size());
        grow(t, patterns, 0);
        return t;
    }

private:
    struct Split {
        int feature = -1;
        std::uint32_t left_bin = 0;  // bins <= left_bin go left
        double threshold = 0.0;
        double gain = 0.0;
    };

    int grow(Tree& t, std::span<std::uint32_t> rows, int depth) {
        const int index = static_cast<int>(t.nodes.size());
        t.nodes.emplace_back();
        double gs = 0.0, hs = 0.0, cs = 0.0;
        for (auto r : rows) {
            gs += g_[r];
            hs += h_[r];
            cs += count_[r];
        }
        Split s;
        if (depth < p_.max_depth && cs >= 2.0 * p_.min_samples_leaf) s = best_split(rows, gs, hs, cs);
        if (s.feature < 0) {
            t.nodes[static_cast<std::size_t>(index)].weight = -gs / (hs + p_.lambda) * p_.learning_rate;
            return index;
        }
        // Stable in-place partition: left rows keep their order at the front.
        const auto* col = &b_.bins[static_cast<std::size_t>(s.feature) * b_.n];
        std::size_t nl = 0, nr = 0;
        for (auto r : rows) {
            if (col[r] <= s.left_bin) rows[nl++] = r;
            else scratch_[nr++] = r;
        }
        std::copy(scratch_.begin(), scratch_.begin() + static_cast<std::ptrdiff_t>(nr),
                  rows.begin() + static_cast<std::ptrdiff_t>(nl));
        feature_gain_[static_cast<std::size_t>(s.feature)] += s.gain;
        const int l = grow(t, rows.subspan(0, nl), depth + 1);
        const int r = grow(t, rows.subspan(nl), depth + 1);
        auto& node = t.nodes[static_cast<std::size_t>(index)];
        node.feature = s.feature;
        node.threshold = s.threshold;
        node.gain = s.gain;
        node.left = l;
        node.right = r;
        return index;
    }

    Split best_split(std::span<const std::uint32_t> rows, double gs, double hs, double cs) {
        Split best;
        double best_gain = 0.0;
        const double min_leaf = p_.min_samples_leaf;
        for (std::size_t f = 0; f < b_.d; ++f) {
            const auto& vals = *b_.values[f];
            const auto nb = vals.size();
            if (nb < 2) continue;
            hg_.assign(nb, 0.0);
            hh_.assign(nb, 0.0);
            hc_.assign(nb, 0.0);
            const auto* col = &b_.bins[f * b_.n];
            for (auto r : rows) {
                const auto bin = col[r];
                hg_[bin] += g_[r];
                hh_[bin] += h_[r];
                hc_[bin] += count_[r];
            }
            double gl = 0.0, hl = 0.0, cl = 0.0;
            std::optional<std::size_t> prev;
            for (std::size_t bin = 0; bin < nb; ++bin) {
                if (hc_[bin] == 0.0) continue;
                if (prev && cl >= min_leaf && cs - cl >= min_leaf) {
                    const double gain = split_gain(gl, hl, gs - gl, hs - hl, p_.lambda);
                    if (improves_on(gain, best_gain)) {
                        best_gain = gain;
                        best.feature = static_cast<int>(f);
                        best.left_bin = static_cast<std::uint32_t>(*prev);
                        best.threshold = 0.5 * (vals[*prev] + vals[bin]);
                        best.gain = gain;
                    }
                }
                gl += hg_[bin];
                hl += hh_[bin];
                cl += hc_[bin];
                prev = bin;
            }
        }
        return best;
    }

    const Patterns& b_;
    const GbdtParams& p_;
    std::span<const double> g_;
    std::span<const double> h_;
    std::span<const double> count_;
    std::vector<double>& feature_gain_;
    std::vector<double> hg_, hh_, hc_;
    std::vector<std::uint32_t> scratch_;
};

// Mean log-loss over all rows given per-pattern margins; also stores
// sigmoid(margin) per pattern.
double mean_loss(const Patterns& b, std::span<const double> margins, std::vector<double>& prob, double rows) {
    double s = 0.0;
    for (std::size_t i = 0; i < b.n; ++i) {
        const double f = margins[i];
        const double e = std::exp(-std::abs(f));
        prob[i] = f >= 0 ? 1.0 / (1.0 + e) : e / (1.0 + e);
        s += b.count[i] * (std::max(f, 0.0) + std::log1p(e)) - b.positives[i] * f;
    }
    return s / rows;
}

GbdtModel fit(const Patterns& b, std::size_t rows_total, std::vector<std::string> names, const GbdtParams& params) {
    const std::size_t n = b.n;
    const std::size_t d = b.d;
    double positives = 0.0;
    for (double v : b.positives) positives += v;
    const double rows = static_cast<double>(rows_total);
    if (positives == 0.0 || positives == rows) throw std::invalid_argument("train_gbdt: labels contain a single class");

    GbdtModel m;
    m.features = std::move(names);
    m.params = params;
    m.feature_gain.assign(d, 0.0);
    m.base_score = std::log(positives / (rows - positives));

    std::vector<double> margins(n, m.base_score);
    std::vector<double> g(n), h(n), step(n), trial(n);
    std::vector<double> prob(n), trial_prob(n);
    std::vector<double> count(n), pos(n);
    double loss = mean_loss(b, margins, prob, rows);
    std::vector<std::uint32_t> active;
    active.reserve(n);

    for (int round = 0; round < params.rounds; ++round) {
        if (params.subsample < 1.0) {
            std::fill(count.begin(), count.end(), 0.0);
            std::fill(pos.begin(), pos.end(), 0.0);
            Rng rng(substream_seed(params.seed, static_cast<std::uint64_t>(round)));
            for (std::size_t r = 0; r < b.of_row.size(); ++r) {
                if (rng.uniform() < params.subsample) {
                    count[b.of_row[r]] += 1.0;
                    pos[b.of_row[r]] += b.row_label[r];
                }
            }
        } else {
            count = b.count;
            pos = b.positives;
        }
        active.clear();
        for (std::size_t i = 0; i < n; ++i) {
            if (count[i] == 0.0) continue;
            active.push_back(static_cast<std::uint32_t>(i));
            g[i] = count[i] * prob[i] - pos[i];
            h[i] = count[i] * prob[i] * (1.0 - prob[i]);
        }
        std::vector<double> round_gain(d, 0.0);
        TreeBuilder builder(b, params, g, h, count, round_gain);
        Tree tree = builder.build(active);

        for (std::size_t i = 0; i < n; ++i) {
            std::size_t k = 0;
            while (!tree.nodes[k].is_leaf()) {
                const auto& node = tree.nodes[k];
                const auto f = static_cast<std::size_t>(node.feature);
                const double v = (*b.values[f])[b.bins[f * n + i]];
                k = static_cast<std::size_t>(v < node.threshold ? node.left : node.right);
            }
            step[i] = tree.nodes[k].weight;
        }

        // Backtrack the step while it would raise the training loss, so the
        // per-round loss never increases.
        double scale = 1.0;
        double next_loss = loss;
        for (int attempt = 0; attempt < 30; ++attempt) {
            for (std::size_t i = 0; i < n; ++i) trial[i] = margins[i] + scale * step[i];
            next_loss = mean_loss(b, trial, trial_prob, rows);
            if (next_loss <= loss) break;
            scale *= 0.5;
        }
        if (next_loss > loss) {
            scale = 0.0;
            next_loss = loss;
            trial = margins;
            trial_prob = prob;
        }
        if (scale != 1.0) {
            for (auto& node : tree.nodes) node.weight *= scale;
        }
        for (std::size_t f = 0; f < d; ++f) m.feature_gain[f] += round_gain[f];
        margins.swap(trial);
        prob.swap(trial_prob);
        loss = next_loss;
        m.train_loss.push_back(loss);
        m.trees.push_back(std::move(tree));
    }
    return m;
}

struct PatternHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept {
        std::uint64_t h = 1469598103934665603ull;
        for (auto x : v) h = (h ^ x) * 1099511628211ull;
        return static_cast<std::size_t>(h);
    }
};

}  // namespace

BinnedDataset::BinnedDataset(const Dataset& data) : data_(&data) {
    const std::size_t n = data.rows();
    const std::size_t d = data.cols();
    if (data.x.size() != n * d || data.y.size() != n) throw std::invalid_argument("malformed dataset");
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), 0);
    if (!std::is_sorted(data.ids.begin(), data.ids.end())) {
        std::stable_sort(order_.begin(), order_.end(), [&](auto a, auto b) { return data.ids[a] < data.ids[b]; });
    }
    rank_.resize(n);
    for (std::size_t i = 0; i < n; ++i) rank_[order_[i]] = i;
    values_.resize(d);
    bins_.resize(n * d);
    for (std::size_t f = 0; f < d; ++f) {
        auto& vals = values_[f];
        vals.reserve(n);
        for (std::size_t r = 0; r < n; ++r) vals.push_back(data.at(r, f));
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        for (std::size_t i = 0; i < n; ++i) {
            const double v = data.at(order_[i], f);
            bins_[f * n + i] = static_cast<std::uint32_t>(std::lower_bound(vals.begin(), vals.end(), v) - vals.begin());
        }
    }
}

GbdtModel train_gbdt(const BinnedDataset& data, std::span<const std::size_t> rows, std::span<const std::size_t> cols,
                     const GbdtParams& params) {
    check_params(params);
    const Dataset& src = data.data();
    if (cols.empty()) throw std::invalid_argument("train_gbdt: empty feature set");
    if (rows.empty()) throw std::invalid_argument("train_gbdt: no samples");
    for (auto c : cols) {
        if (c >= src.cols()) throw std::invalid_argument("train_gbdt: column out of range");
    }
    std::vector<std::size_t> pos;
    pos.reserve(rows.size());
    for (auto r : rows) {
        if (r >= src.rows()) throw std::invalid_argument("train_gbdt: row out of range");
        const int y = src.y[r];
        if (y != 0 && y != 1) throw std::invalid_argument("train_gbdt: labels must be 0 or 1");
        pos.push_back(data.rank_[r]);
    }
    std::sort(pos.begin(), pos.end());

    // Patterns are numbered in order of first appearance in id order.
    const std::size_t full = src.rows();
    const std::size_t d = cols.size();
    Patterns b;
    b.d = d;
    for (auto c : cols) b.values.push_back(&data.values_[c]);
    std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, PatternHash> index;
    index.reserve(pos.size());
    std::vector<std::uint32_t> key(d);
    std::vector<std::uint32_t> pattern_bins;  // pattern-major while collecting
    for (auto p : pos) {
        for (std::size_t f = 0; f < d; ++f) key[f] = data.bins_[cols[f] * full + p];
        auto [it, fresh] = index.try_emplace(key, static_cast<std::uint32_t>(b.count.size()));
        if (fresh) {
            pattern_bins.insert(pattern_bins.end(), key.begin(), key.end());
            b.count.push_back(0.0);
            b.positives.push_back(0.0);
        }
        const int y = src.y[data.order_[p]];
        b.of_row.push_back(it->second);
        b.row_label.push_back(y);
        b.count[it->second] += 1.0;
        b.positives[it->second] += y;
    }
    b.n = b.count.size();
    b.bins.resize(b.n * d);
    for (std::size_t i = 0; i < b.n; ++i) {
        for (std::size_t f = 0; f < d; ++f) b.bins[f * b.n + i] = pattern_bins[i * d + f];
    }
    std::vector<std::string> names;
    for (auto c : cols) names.push_back(src.feature_names[c]);
    return fit(b, pos.size(), std::move(names), params);
}

GbdtModel train_gbdt(const Dataset& data, const GbdtParams& params) {
    if (data.cols() == 0) throw std::invalid_argument("train_gbdt: empty feature set");
    if (data.rows() == 0) throw std::invalid_argument("train_gbdt: no samples");
    const BinnedDataset binned(data);
    std::vector<std::size_t> rows(data.rows()), cols(data.cols());
    std::iota(rows.begin(), rows.end(), 0);
    std::iota(cols.begin(), cols.end(), 0);
    return train_gbdt(binned, rows, cols, params);
}

}  // namespace rosetta::ml
