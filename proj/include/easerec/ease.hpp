#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "easerec/errors.hpp"
#include "easerec/feature_matrix.hpp"

namespace easerec {

/// Closed-form solution of the zero-diagonal ridge reconstruction problem
///
///   minimize  |X - X*B|_F^2 + lambda*|B|_F^2   s.t.  diag(B) = 0,
///
/// given the already-ridged Gram matrix G = X^T X + lambda*I (entities as
/// columns of X, so G(i,j) is the inner product of the feature vectors of
/// entities i and j). With P = G^{-1},
///
///   B = I - P * dmat(1 / diag(P)),
///
/// i.e. B(i,j) = -P(i,j) / P(j,j) off the diagonal and exactly 0 on it.
/// G is symmetric positive definite for lambda > 0, so a Cholesky
/// factorization computes the full inverse. Throws NumericError if the
/// factorization fails anyway.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> zero_diag_ridge_weights(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& gram) {
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    const Eigen::Index n = gram.rows();
    Eigen::LLT<Matrix> llt(gram);
    if (llt.info() != Eigen::Success)
        throw NumericError("Cholesky factorization of the gram matrix failed");
    Matrix inv = llt.solve(Matrix::Identity(n, n));
    Matrix weights = -(inv * inv.diagonal().cwiseInverse().asDiagonal());
    weights.diagonal().setZero();
    return weights;
}

/// Dense entity-entity weight matrix estimated from a FeatureMatrix,
/// immutable after construction. weights()(i, j) is the contribution of
/// entity i to reconstructing entity j; the diagonal is exactly zero and
/// every entry is finite.
class SimilarityModel {
public:
    SimilarityModel(Eigen::MatrixXd weights, Vocabulary entities,
                    std::optional<double> lambda);

    Index entity_count() const { return weights_.rows(); }
    const Eigen::MatrixXd& weights() const { return weights_; }
    const Vocabulary& entities() const { return entities_; }

    /// Regularization strength used by fit(). Model files do not store it,
    /// so it is absent on models loaded from disk.
    std::optional<double> lambda() const { return lambda_; }

    /// weights()(index(a), index(b)); zero when a == b. Throws LookupError
    /// naming the unknown entity.
    double similarity(const std::string& entity_a, const std::string& entity_b) const;

    /// The k entities with the largest weight in the query's row,
    /// descending, ties broken by ascending entity index. The query entity
    /// itself is excluded; fewer than k results only when fewer than k
    /// other entities exist.
    std::vector<std::pair<std::string, double>> top_similar(const std::string& entity,
                                                            std::size_t k) const;

    /// Binary format: magic "EASEB\0\0\x01", little-endian u64 entity
    /// count, little-endian u64 vocabulary blob length, the vocabulary blob
    /// (entity names joined by '\n' in index order), then n*n little-endian
    /// IEEE-754 doubles in row-major order. save/load round-trip bit-exactly.
    void save(std::ostream& out) const;
    void save_file(const std::string& path) const;
    static SimilarityModel load(std::istream& in);
    static SimilarityModel load_file(const std::string& path);

private:
    Eigen::MatrixXd weights_;
    Vocabulary entities_;
    std::optional<double> lambda_;
};

/// Fits the zero-diagonal ridge model on fm's entity Gram matrix.
/// Requires lambda > 0 and at least one entity. Single-threaded and
/// deterministic: the same input always produces bit-identical weights.
SimilarityModel fit(const FeatureMatrix& fm, double lambda);

/// Lossy post-fit shrink: zeroes every weight with |w| < min_abs. Storage
/// stays dense; the zeroed entries exist so persisted models compress
/// well externally.
SimilarityModel sparsify(const SimilarityModel& model, double min_abs);

}  // namespace easerec
