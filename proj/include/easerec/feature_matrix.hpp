#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>

#include <Eigen/SparseCore>

#include "easerec/vocabulary.hpp"

namespace easerec {

enum class FeatureMode { binary, count };

/// Sparse nonnegative entity-by-feature matrix with its two vocabularies.
/// Immutable once built; safe to share across threads.
///
/// Invariants: all stored entries are > 0 (exactly 1 in binary mode), and
/// both vocabularies are dense bijections onto the row/column ranges.
/// Entities that end up with no features keep their all-zero row so the
/// entity universe stays fixed.
class FeatureMatrix {
public:
    using Values = Eigen::SparseMatrix<double, Eigen::RowMajor>;

    FeatureMatrix(Values values, Vocabulary entities, Vocabulary features, FeatureMode mode);

    Index entity_count() const { return values_.rows(); }
    Index feature_count() const { return values_.cols(); }
    const Values& values() const { return values_; }
    const Vocabulary& entities() const { return entities_; }
    const Vocabulary& features() const { return features_; }
    FeatureMode mode() const { return mode_; }

    bool operator==(const FeatureMatrix& other) const;

private:
    Values values_;
    Vocabulary entities_;
    Vocabulary features_;
    FeatureMode mode_;
};

/// Builds a FeatureMatrix from `entity<TAB>feature` or
/// `entity<TAB>feature<TAB>count` lines (count a positive integer; blank
/// lines skipped; trailing CR tolerated).
///
/// Duplicate pairs collapse to a single 1 in binary mode and sum in count
/// mode; a missing count column contributes 1 either way. Features seen in
/// fewer than min_feature_count distinct entities are dropped and the
/// feature vocabulary is re-densified; entities left without features are
/// retained as all-zero rows. Index order is lexicographic after filtering,
/// so permuting input lines changes nothing.
///
/// Throws ParseError with the offending line number on malformed input and
/// ParseError("no pairs") when the input holds no pairs at all.
FeatureMatrix load_feature_pairs(std::istream& in, FeatureMode mode,
                                 std::size_t min_feature_count = 1);
FeatureMatrix load_feature_pairs_file(const std::string& path, FeatureMode mode,
                                      std::size_t min_feature_count = 1);

/// Every stored entry becomes 1 and the mode flips to binary; vocabularies
/// are unchanged. Idempotent.
FeatureMatrix binarize(const FeatureMatrix& fm);

/// `entity<TAB>feature<TAB>value` rows sorted by (row, col); reloading the
/// dump reproduces the matrix.
void dump_feature_pairs(const FeatureMatrix& fm, std::ostream& out);

}  // namespace easerec
