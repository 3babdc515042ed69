#include "easerec/vocabulary.hpp"

#include <algorithm>

namespace easerec {

Vocabulary Vocabulary::from_names(std::vector<std::string> names) {
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    return from_index_order(std::move(names));
}

Vocabulary Vocabulary::from_index_order(std::vector<std::string> names) {
    Vocabulary vocab;
    vocab.names_ = std::move(names);
    vocab.index_.reserve(vocab.names_.size());
    for (std::size_t i = 0; i < vocab.names_.size(); ++i) {
        if (vocab.names_[i].empty())
            throw ArgumentError("empty name in vocabulary");
        auto [_, inserted] = vocab.index_.emplace(vocab.names_[i], static_cast<Index>(i));
        if (!inserted)
            throw ArgumentError("duplicate name in vocabulary: " + vocab.names_[i]);
    }
    return vocab;
}

std::optional<Index> Vocabulary::find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Index Vocabulary::at(const std::string& name) const {
    auto idx = find(name);
    if (!idx) throw LookupError("unknown entity: " + name);
    return *idx;
}

}  // namespace easerec
