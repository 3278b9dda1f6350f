#pragma once

// Binary logistic gradient boosting with exact greedy splits and Newton
// leaf weights.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rosetta/ml/dataset.hpp"

namespace rosetta::ml {

struct GbdtParams {
    int rounds = 60;
    int max_depth = 3;
    double learning_rate = 0.3;
    int min_samples_leaf = 5;
    double lambda = 1.0;      // L2 penalty on leaf weights
    double subsample = 1.0;   // row fraction per round, drawn with `seed`
    std::uint64_t seed = 0;

    friend bool operator==(const GbdtParams&, const GbdtParams&) = default;
};

// Throws std::invalid_argument on out-of-range values.
void check_params(const GbdtParams& p);

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;  // x < threshold goes left
    int left = -1;
    int right = -1;
    double weight = 0.0;  // leaf output, learning rate already applied
    double gain = 0.0;

    bool is_leaf() const { return feature < 0; }
    friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct Tree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    double predict(std::span<const double> row) const;
    int depth() const;
    friend bool operator==(const Tree&, const Tree&) = default;
};

struct GbdtModel {
    std::vector<std::string> features;  // column names, in input order
    double base_score = 0.0;            // log-odds
    std::vector<Tree> trees;
    GbdtParams params;
    std::vector<double> train_loss;     // mean log-loss after each round
    std::vector<double> feature_gain;   // total split gain per feature

    double margin(std::span<const double> row) const;
    double predict_proba(std::span<const double> row) const;
    std::vector<double> predict_proba(const Dataset& data) const;

    friend bool operator==(const GbdtModel&, const GbdtModel&) = default;
};

// Loss of margin f for label y in {0,1}: log(1 + e^f) - y f, and its first
// and second derivatives in f.
double logistic_loss(double margin, int y);
double logistic_gradient(double margin, int y);
double logistic_hessian(double margin, int y);
double sigmoid(double margin);

// Samples are processed in subject-id order, so the result does not depend on
// input row order. Throws std::invalid_argument on an empty feature set, no
// rows, non-binary labels or a single class.
GbdtModel train_gbdt(const Dataset& data, const GbdtParams& params);

// A dataset binned once, with rows in subject-id order. Fits on row and
// column subsets reuse the bins and equal fits on the copied subset. The
// dataset must outlive this object.
class BinnedDataset {
public:
    explicit BinnedDataset(const Dataset& data);
    const Dataset& data() const { return *data_; }

private:
    friend GbdtModel train_gbdt(const BinnedDataset&, std::span<const std::size_t>, std::span<const std::size_t>,
                                const GbdtParams&);
    const Dataset* data_;
    std::vector<std::size_t> order_;  // order_[position] = row
    std::vector<std::size_t> rank_;   // rank_[row] = position
    std::vector<std::vector<double>> values_;
    std::vector<std::uint32_t> bins_;  // bins_[column * rows + position]
};

GbdtModel train_gbdt(const BinnedDataset& data, std::span<const std::size_t> rows, std::span<const std::size_t> cols,
                     const GbdtParams& params);

// Split score of a partition with gradient/hessian sums (gl, hl) | (gr, hr).
double split_gain(double gl, double hl, double gr, double hr, double lambda);

// True when `gain` should replace the current best; earlier candidates win
// near-ties.
bool improves_on(double gain, double best);

}  // namespace rosetta::ml
