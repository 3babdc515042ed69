#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "easerec/errors.hpp"

namespace easerec {

using Index = Eigen::Index;

/// Dense bidirectional string <-> index map.
///
/// Vocabularies built from input data assign indices in lexicographic
/// (byte-wise) order of the names, so the same data produces the same
/// indices regardless of input line order. Vocabularies read back from a
/// model file keep the stored index order verbatim.
class Vocabulary {
public:
    Vocabulary() = default;

    /// Sorts, removes duplicates, then assigns indices 0..size-1.
    static Vocabulary from_names(std::vector<std::string> names);

    /// Keeps the given order as the index order. Throws ArgumentError on
    /// duplicate or empty names.
    static Vocabulary from_index_order(std::vector<std::string> names);

    Index size() const noexcept { return static_cast<Index>(names_.size()); }
    const std::string& name(Index i) const { return names_.at(static_cast<std::size_t>(i)); }
    const std::vector<std::string>& names() const noexcept { return names_; }

    std::optional<Index> find(const std::string& name) const;

    /// find() or throw LookupError naming the missing entry.
    Index at(const std::string& name) const;

    bool contains(const std::string& name) const { return find(name).has_value(); }

    bool operator==(const Vocabulary& other) const { return names_ == other.names_; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, Index> index_;
};

}  // namespace easerec
