#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "easerec/ease.hpp"

namespace easerec {

/// score(j) = sum over i in history of weights(i, j): the history rows of
/// the weight matrix summed in the order given. history must be non-empty
/// and in range.
Eigen::VectorXd score_user(std::span<const Index> history, const Eigen::MatrixXd& weights);

inline Eigen::VectorXd score_user(std::span<const Index> history,
                                  const SimilarityModel& model) {
    return score_user(history, model.weights());
}

/// The r highest-scoring entity indices with the masked (history) entities
/// removed, descending by score, ties broken by ascending index. Shorter
/// than r only when fewer candidates exist. Requires r >= 1.
std::vector<Index> top_ranked(const Eigen::VectorXd& scores, std::span<const Index> mask,
                              std::size_t r);

}  // namespace easerec
