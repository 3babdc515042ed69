#include "easerec/feature_matrix.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <utility>
#include <vector>

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

// Strict [0-9]+, value in [1, 2^53] so sums stay exact in a double.
long long parse_count(const std::string& token, std::size_t lineno) {
    if (token.empty())
        throw ParseError(lineno, "empty count field");
    long long value = 0;
    for (char c : token) {
        if (c < '0' || c > '9')
            throw ParseError(lineno, "count is not a positive integer: '" + token + "'");
        if (value > (1LL << 53) / 10)
            throw ParseError(lineno, "count too large: '" + token + "'");
        value = value * 10 + (c - '0');
    }
    if (value <= 0)
        throw ParseError(lineno, "count must be positive, got '" + token + "'");
    return value;
}

}  // namespace

FeatureMatrix::FeatureMatrix(Values values, Vocabulary entities, Vocabulary features,
                             FeatureMode mode)
    : values_(std::move(values)),
      entities_(std::move(entities)),
      features_(std::move(features)),
      mode_(mode) {
    if (values_.rows() != entities_.size() || values_.cols() != features_.size())
        throw ArgumentError("feature matrix shape does not match its vocabularies");
}

bool FeatureMatrix::operator==(const FeatureMatrix& other) const {
    if (mode_ != other.mode_ || !(entities_ == other.entities_) ||
        !(features_ == other.features_))
        return false;
    if (values_.rows() != other.values_.rows() || values_.cols() != other.values_.cols() ||
        values_.nonZeros() != other.values_.nonZeros())
        return false;
    for (Index row = 0; row < values_.outerSize(); ++row) {
        Values::InnerIterator a(values_, row);
        Values::InnerIterator b(other.values_, row);
        for (; a && b; ++a, ++b) {
            if (a.col() != b.col() || a.value() != b.value()) return false;
        }
        if (a || b) return false;
    }
    return true;
}

FeatureMatrix load_feature_pairs(std::istream& in, FeatureMode mode,
                                 std::size_t min_feature_count) {
    // entity -> feature -> accumulated count; std::map keeps both key sets
    // sorted, which fixes the vocabulary order.
    std::map<std::string, std::map<std::string, long long>> by_entity;
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
            throw ParseError(lineno, "empty entity or feature field");
        long long count = fields.size() == 3 ? parse_count(fields[2], lineno) : 1;
        by_entity[fields[0]][fields[1]] += count;
    }
    if (by_entity.empty())
        throw ParseError("no pairs");

    // Distinct-entity support per feature decides which features survive.
    std::map<std::string, std::size_t> support;
    for (const auto& [entity, feats] : by_entity)
        for (const auto& [feature, count] : feats) support[feature] += 1;

    std::vector<std::string> kept_features;
    for (const auto& [feature, entities_seen] : support)
        if (entities_seen >= min_feature_count) kept_features.push_back(feature);

    std::vector<std::string> entity_names;
    entity_names.reserve(by_entity.size());
    for (const auto& [entity, feats] : by_entity) entity_names.push_back(entity);

    Vocabulary entities = Vocabulary::from_index_order(std::move(entity_names));
    Vocabulary features = Vocabulary::from_index_order(std::move(kept_features));

    std::vector<Eigen::Triplet<double>> triplets;
    for (const auto& [entity, feats] : by_entity) {
        Index row = entities.at(entity);
        for (const auto& [feature, count] : feats) {
            auto col = features.find(feature);
            if (!col) continue;  // dropped by min_feature_count
            double value = mode == FeatureMode::binary ? 1.0 : static_cast<double>(count);
            triplets.emplace_back(row, *col, value);
        }
    }
    FeatureMatrix::Values values(entities.size(), features.size());
    values.setFromTriplets(triplets.begin(), triplets.end());
    values.makeCompressed();
    return FeatureMatrix(std::move(values), std::move(entities), std::move(features), mode);
}

FeatureMatrix load_feature_pairs_file(const std::string& path, FeatureMode mode,
                                      std::size_t min_feature_count) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open feature file: " + path);
    return load_feature_pairs(in, mode, min_feature_count);
}

FeatureMatrix binarize(const FeatureMatrix& fm) {
    FeatureMatrix::Values values = fm.values();
    for (Index row = 0; row < values.outerSize(); ++row)
        for (FeatureMatrix::Values::InnerIterator it(values, row); it; ++it)
            it.valueRef() = 1.0;
    return FeatureMatrix(std::move(values), fm.entities(), fm.features(),
                         FeatureMode::binary);
}

void dump_feature_pairs(const FeatureMatrix& fm, std::ostream& out) {
    char buf[64];
    for (Index row = 0; row < fm.values().outerSize(); ++row) {
        for (FeatureMatrix::Values::InnerIterator it(fm.values(), row); it; ++it) {
            double v = it.value();
            if (v == std::floor(v))
                std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
            else
                std::snprintf(buf, sizeof buf, "%.17g", v);
            out << fm.entities().name(row) << '\t' << fm.features().name(it.col()) << '\t'
                << buf << '\n';
        }
    }
}

}  // namespace easerec
