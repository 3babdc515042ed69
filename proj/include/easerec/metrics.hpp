#pragma once

#include <cstddef>
#include <span>

#include "easerec/vocabulary.hpp"

namespace easerec {

// Both metrics take the recommended ranking (best first), the answer set as
// a strictly ascending index vector, and the cutoff r >= 1. The answer set
// must be non-empty. Rankings shorter than r are scored as-is.

/// |top-r hits| / min(r, |answer|).
double recall_at(std::span<const Index> ranking, std::span<const Index> answer,
                 std::size_t r);

/// Binary-relevance DCG with the 1/log2(p + 1) discount at 1-based position
/// p, normalized by the ideal list (all of min(r, |answer|) leading
/// positions hit).
double ndcg_at(std::span<const Index> ranking, std::span<const Index> answer,
               std::size_t r);

}  // namespace easerec
