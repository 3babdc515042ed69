#include "easerec/scoring.hpp"

#include <algorithm>

#include "easerec/errors.hpp"

namespace easerec {

Eigen::VectorXd score_user(std::span<const Index> history, const Eigen::MatrixXd& weights) {
    if (history.empty())
        throw ArgumentError("history is empty");
    Eigen::VectorXd scores = Eigen::VectorXd::Zero(weights.cols());
    for (Index i : history) {
        if (i < 0 || i >= weights.rows())
            throw ArgumentError("history index out of range");
        scores += weights.row(i).transpose();
    }
    return scores;
}

std::vector<Index> top_ranked(const Eigen::VectorXd& scores, std::span<const Index> mask,
                              std::size_t r) {
    if (r == 0)
        throw ArgumentError("r must be >= 1");
    std::vector<Index> masked(mask.begin(), mask.end());
    std::sort(masked.begin(), masked.end());

    std::vector<Index> candidates;
    candidates.reserve(static_cast<std::size_t>(scores.size()));
    for (Index i = 0; i < scores.size(); ++i)
        if (!std::binary_search(masked.begin(), masked.end(), i)) candidates.push_back(i);

    const std::size_t take = std::min(r, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + take, candidates.end(),
                      [&](Index a, Index b) {
                          return scores[a] > scores[b] || (scores[a] == scores[b] && a < b);
                      });
    candidates.resize(take);
    return candidates;
}

}  // namespace easerec
