#include "easerec/oracle.hpp"

#include <sstream>

#include "easerec/errors.hpp"

namespace easerec::oracle {

namespace {

constexpr Eigen::Index kMaxSide = 12;

Eigen::MatrixXd entity_columns(const FeatureMatrix& fm) {
    // X = F^T: features down the rows, entities across the columns.
    return Eigen::MatrixXd(fm.values()).transpose();
}

}  // namespace

Eigen::MatrixXd oracle_fit(const FeatureMatrix& fm, double lambda, double tolerance,
                           std::size_t max_iterations) {
    if (fm.entity_count() > kMaxSide || fm.feature_count() > kMaxSide)
        throw ArgumentError("oracle_fit is limited to 12 entities and 12 features");
    if (!(lambda > 0.0))
        throw ArgumentError("lambda must be > 0");

    const Eigen::MatrixXd x = entity_columns(fm);
    const Eigen::MatrixXd gram = x.transpose() * x;  // no ridge here
    const Eigen::Index n = gram.rows();

    // 1 / L with L = 2*(sigma_max + lambda); the trace bounds sigma_max for
    // a PSD matrix, so this step always descends on the quadratic.
    const double step = 1.0 / (2.0 * (gram.trace() + lambda));

    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
    double grad_norm = 0.0;
    for (std::size_t iter = 0; iter < max_iterations; ++iter) {
        Eigen::MatrixXd grad = 2.0 * (gram * b - gram + lambda * b);
        grad.diagonal().setZero();  // project onto the zero-diagonal subspace
        grad_norm = grad.norm();
        if (grad_norm < tolerance)
            return b;
        b -= step * grad;
    }
    std::ostringstream msg;
    msg << "oracle_fit did not converge within " << max_iterations
        << " iterations (projected gradient norm " << grad_norm << ")";
    throw NumericError(msg.str());
}

double oracle_objective(const FeatureMatrix& fm, const Eigen::MatrixXd& b, double lambda) {
    for (Eigen::Index i = 0; i < b.rows(); ++i)
        if (b(i, i) != 0.0)
            throw ArgumentError("objective requires a zero diagonal");
    const Eigen::MatrixXd x = entity_columns(fm);
    return (x - x * b).squaredNorm() + lambda * b.squaredNorm();
}

}  // namespace easerec::oracle
