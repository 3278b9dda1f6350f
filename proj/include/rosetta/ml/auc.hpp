#pragma once

#include <span>

namespace rosetta::ml {

// Area under the ROC curve as the Mann-Whitney statistic
// (concordant pairs + 0.5 * tied pairs) / (positives * negatives),
// computed from tie-averaged ranks in O(n log n). Labels are 0/1.
// Throws std::invalid_argument unless both classes are present.
double auc(std::span<const double> scores, std::span<const int> labels);

}  // namespace rosetta::ml
