#pragma once

#include <cstddef>

#include <Eigen/Core>

#include "easerec/feature_matrix.hpp"

// Slow reference solver used by the tests to validate the closed-form fit.
// Deliberately shares no algorithm with the production path: first-order
// projected gradient descent instead of a factorization.

namespace easerec::oracle {

/// Minimizes |X - X*B|_F^2 + lambda*|B|_F^2 over zero-diagonal B (X is the
/// feature-by-entity orientation of fm) by projected gradient descent:
/// gradient 2*(X^T X B - X^T X + lambda*B), diagonal zeroed each step, step
/// size 1 / (2*(trace(X^T X) + lambda)) since the trace bounds the largest
/// eigenvalue. Runs until the projected gradient norm drops below
/// tolerance. The objective is strongly convex for lambda > 0, so the
/// minimizer is unique.
///
/// Test scale only: requires N <= 12 and M <= 12. Throws NumericError with
/// the final gradient norm when max_iterations is hit first.
Eigen::MatrixXd oracle_fit(const FeatureMatrix& fm, double lambda,
                           double tolerance = 1e-9,
                           std::size_t max_iterations = 1'000'000);

/// Evaluates |X - X*B|_F^2 + lambda*|B|_F^2 verbatim. Throws ArgumentError
/// when b has a nonzero diagonal entry.
double oracle_objective(const FeatureMatrix& fm, const Eigen::MatrixXd& b, double lambda);

}  // namespace easerec::oracle
