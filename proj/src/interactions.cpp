#include "easerec/interactions.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <utility>

#include "easerec/errors.hpp"

namespace easerec {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

double parse_rating(const std::string& token, std::size_t lineno) {
    if (token.empty())
        throw ParseError(lineno, "empty rating field");
    errno = 0;
    char* end = nullptr;
    double value = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size() || errno == ERANGE || !std::isfinite(value))
        throw ParseError(lineno, "rating is not a finite number: '" + token + "'");
    return value;
}

}  // namespace

InteractionSet::InteractionSet(Vocabulary entities, std::vector<std::string> users,
                               std::vector<std::vector<Index>> items)
    : entities_(std::move(entities)), users_(std::move(users)), items_(std::move(items)) {
    if (users_.size() != items_.size())
        throw ArgumentError("users and item lists differ in length");
    if (!std::is_sorted(users_.begin(), users_.end()))
        throw ArgumentError("users must be sorted by name");
    for (const auto& list : items_) {
        if (list.empty())
            throw ArgumentError("user with no interactions");
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (list[i] < 0 || list[i] >= entities_.size())
                throw ArgumentError("interaction entity index out of range");
            if (i > 0 && list[i] <= list[i - 1])
                throw ArgumentError("item lists must be strictly ascending");
        }
    }
}

std::size_t InteractionSet::pair_count() const {
    std::size_t total = 0;
    for (const auto& list : items_) total += list.size();
    return total;
}

InteractionSet load_interactions(std::istream& in, double rating_threshold) {
    std::map<std::string, std::set<std::string>> by_user;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_tabs(line);
        if (fields.size() < 2 || fields.size() > 3)
            throw ParseError(lineno, "expected 2 or 3 tab-separated fields, got " +
                                         std::to_string(fields.size()));
        if (fields[0].empty() || fields[1].empty())
            throw ParseError(lineno, "empty user or entity field");
        if (fields.size() == 3 && parse_rating(fields[2], lineno) < rating_threshold)
            continue;
        by_user[fields[0]].insert(fields[1]);
    }
    if (by_user.empty())
        throw ParseError("no interactions");

    std::vector<std::string> entity_names;
    for (const auto& [user, ents] : by_user)
        entity_names.insert(entity_names.end(), ents.begin(), ents.end());
    Vocabulary entities = Vocabulary::from_names(std::move(entity_names));

    std::vector<std::string> users;
    std::vector<std::vector<Index>> items;
    users.reserve(by_user.size());
    items.reserve(by_user.size());
    for (const auto& [user, ents] : by_user) {
        std::vector<Index> list;
        list.reserve(ents.size());
        for (const auto& name : ents) list.push_back(entities.at(name));
        std::sort(list.begin(), list.end());
        users.push_back(user);
        items.push_back(std::move(list));
    }
    return InteractionSet(std::move(entities), std::move(users), std::move(items));
}

InteractionSet load_interactions_file(const std::string& path, double rating_threshold) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open interaction file: " + path);
    return load_interactions(in, rating_threshold);
}

AlignResult align(const InteractionSet& raw, const Vocabulary& target) {
    AlignResult result{InteractionSet(target, {}, {}), 0, 0, 0};

    // Remap every raw entity index onto the target vocabulary once.
    std::vector<std::optional<Index>> remap(
        static_cast<std::size_t>(raw.entities().size()));
    for (Index i = 0; i < raw.entities().size(); ++i) {
        remap[static_cast<std::size_t>(i)] = target.find(raw.entities().name(i));
        if (!remap[static_cast<std::size_t>(i)]) ++result.dropped_entities;
    }

    std::vector<std::string> users;
    std::vector<std::vector<Index>> items;
    for (std::size_t u = 0; u < raw.user_count(); ++u) {
        std::vector<Index> list;
        for (Index raw_idx : raw.items_of(u)) {
            const auto& mapped = remap[static_cast<std::size_t>(raw_idx)];
            if (mapped)
                list.push_back(*mapped);
            else
                ++result.dropped_pairs;
        }
        if (list.empty()) {
            ++result.dropped_users;
            continue;
        }
        std::sort(list.begin(), list.end());
        users.push_back(raw.user_name(u));
        items.push_back(std::move(list));
    }
    if (users.empty())
        throw ArgumentError("no overlap between interactions and model");
    result.interactions = InteractionSet(target, std::move(users), std::move(items));
    return result;
}

}  // namespace easerec
