#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "easerec/interactions.hpp"

namespace easerec {

/// One evaluated user's assignment: fold membership plus the disjoint,
/// exhaustive history/answer partition of their interactions. Both parts
/// are ascending index vectors and both are non-empty.
struct UserSplit {
    std::string user;
    int fold = 0;
    std::vector<Index> history;
    std::vector<Index> answer;

    bool operator==(const UserSplit&) const = default;
};

/// Deterministic split of an InteractionSet for evaluation. users is sorted
/// by user name; excluded_users counts users with fewer than two
/// interactions, which cannot form both parts and are not evaluated.
struct SplitPlan {
    std::uint64_t seed = 0;
    int n_folds = 0;
    double history_fraction = 0.0;
    std::vector<UserSplit> users;
    std::size_t excluded_users = 0;

    bool operator==(const SplitPlan&) const = default;
};

/// Builds a SplitPlan:
///   1. users with >= 2 interactions, taken in name order, are shuffled
///      once with xoshiro256**(seed) and dealt round-robin into folds
///      (shuffled position p -> fold p mod n_folds);
///   2. in the same shuffled order, each user's ascending item list is
///      shuffled on the same stream and the first
///      clamp(round(history_fraction * n), 1, n - 1) items become history,
///      the rest the answer part.
///
/// The result depends only on (interactions, n_folds, history_fraction,
/// seed). Requires n_folds >= 2 and history_fraction in (0, 1); throws
/// ArgumentError when no user has two interactions or when fewer eligible
/// users exist than folds (which would leave a fold empty).
SplitPlan make_split(const InteractionSet& interactions, int n_folds,
                     double history_fraction, std::uint64_t seed);

}  // namespace easerec
