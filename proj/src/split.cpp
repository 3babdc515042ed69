#include "easerec/split.hpp"

#include <algorithm>
#include <cmath>

#include "easerec/errors.hpp"
#include "easerec/rng.hpp"

namespace easerec {

SplitPlan make_split(const InteractionSet& interactions, int n_folds,
                     double history_fraction, std::uint64_t seed) {
    if (n_folds < 2)
        throw ArgumentError("n_folds must be >= 2");
    if (!(history_fraction > 0.0 && history_fraction < 1.0))
        throw ArgumentError("history_fraction must lie in (0, 1)");

    SplitPlan plan;
    plan.seed = seed;
    plan.n_folds = n_folds;
    plan.history_fraction = history_fraction;

    std::vector<std::size_t> eligible;
    for (std::size_t u = 0; u < interactions.user_count(); ++u) {
        if (interactions.items_of(u).size() >= 2)
            eligible.push_back(u);
        else
            ++plan.excluded_users;
    }
    if (eligible.empty())
        throw ArgumentError("no user with at least 2 interactions");
    if (eligible.size() < static_cast<std::size_t>(n_folds))
        throw ArgumentError("fewer users with at least 2 interactions (" +
                            std::to_string(eligible.size()) + ") than folds (" +
                            std::to_string(n_folds) + ")");

    // One PRNG stream drives everything: first the user shuffle, then each
    // user's interaction shuffle in shuffled-user order.
    Xoshiro256 rng(seed);
    shuffle(eligible, rng);

    plan.users.reserve(eligible.size());
    for (std::size_t pos = 0; pos < eligible.size(); ++pos) {
        const std::size_t u = eligible[pos];
        UserSplit us;
        us.user = interactions.user_name(u);
        us.fold = static_cast<int>(pos % static_cast<std::size_t>(n_folds));

        auto span = interactions.items_of(u);
        std::vector<Index> items(span.begin(), span.end());
        shuffle(items, rng);

        const auto n = static_cast<long long>(items.size());
        long long h = std::llround(history_fraction * static_cast<double>(n));
        h = std::clamp(h, 1LL, n - 1);

        us.history.assign(items.begin(), items.begin() + h);
        us.answer.assign(items.begin() + h, items.end());
        std::sort(us.history.begin(), us.history.end());
        std::sort(us.answer.begin(), us.answer.end());
        plan.users.push_back(std::move(us));
    }
    std::sort(plan.users.begin(), plan.users.end(),
              [](const UserSplit& a, const UserSplit& b) { return a.user < b.user; });
    return plan;
}

}  // namespace easerec
