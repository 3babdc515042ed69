#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "easerec/vocabulary.hpp"

namespace easerec {

/// Per-user sets of preferred entity indices (binary implicit feedback).
/// Users are kept in lexicographic order; each item list is a strictly
/// ascending index vector into entities(). No user is empty.
class InteractionSet {
public:
    InteractionSet(Vocabulary entities, std::vector<std::string> users,
                   std::vector<std::vector<Index>> items);

    std::size_t user_count() const { return users_.size(); }
    const std::string& user_name(std::size_t u) const { return users_.at(u); }
    std::span<const Index> items_of(std::size_t u) const { return items_.at(u); }
    const Vocabulary& entities() const { return entities_; }

    /// Total number of (user, entity) pairs.
    std::size_t pair_count() const;

private:
    Vocabulary entities_;
    std::vector<std::string> users_;
    std::vector<std::vector<Index>> items_;
};

/// Parses `user<TAB>entity` or `user<TAB>entity<TAB>rating` lines. A pair
/// is kept when it has no rating column or its rating >= rating_threshold
/// (inclusive); duplicates collapse. The entity vocabulary covers exactly
/// the kept entities. Throws ParseError with a line number on malformed
/// input and ParseError("no interactions") when nothing survives.
InteractionSet load_interactions(std::istream& in, double rating_threshold = 3.5);
InteractionSet load_interactions_file(const std::string& path,
                                      double rating_threshold = 3.5);

struct AlignResult {
    InteractionSet interactions;
    std::size_t dropped_entities = 0;  ///< distinct names absent from the target vocabulary
    std::size_t dropped_pairs = 0;
    std::size_t dropped_users = 0;     ///< users left with no interactions
};

/// Re-indexes interactions onto the target vocabulary (normally the model's
/// entity universe), dropping unknown entities and then users left empty.
/// Throws ArgumentError("no overlap between interactions and model") when
/// nothing remains.
AlignResult align(const InteractionSet& raw, const Vocabulary& target);

}  // namespace easerec
