#include "easerec/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "easerec/errors.hpp"

namespace easerec {

namespace {

void check_args(std::span<const Index> answer, std::size_t r) {
    if (r == 0) throw ArgumentError("r must be >= 1");
    if (answer.empty()) throw ArgumentError("answer set is empty");
}

bool hit(std::span<const Index> answer, Index entity) {
    return std::binary_search(answer.begin(), answer.end(), entity);
}

}  // namespace

double recall_at(std::span<const Index> ranking, std::span<const Index> answer,
                 std::size_t r) {
    check_args(answer, r);
    const std::size_t limit = std::min(r, ranking.size());
    std::size_t hits = 0;
    for (std::size_t p = 0; p < limit; ++p)
        if (hit(answer, ranking[p])) ++hits;
    return static_cast<double>(hits) / static_cast<double>(std::min(r, answer.size()));
}

double ndcg_at(std::span<const Index> ranking, std::span<const Index> answer,
               std::size_t r) {
    check_args(answer, r);
    const std::size_t limit = std::min(r, ranking.size());
    double dcg = 0.0;
    for (std::size_t p = 0; p < limit; ++p)
        if (hit(answer, ranking[p])) dcg += 1.0 / std::log2(static_cast<double>(p + 2));
    double ideal = 0.0;
    const std::size_t ideal_hits = std::min(r, answer.size());
    for (std::size_t p = 0; p < ideal_hits; ++p)
        ideal += 1.0 / std::log2(static_cast<double>(p + 2));
    return dcg / ideal;
}

}  // namespace easerec
