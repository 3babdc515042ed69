#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "easerec/ease.hpp"
#include "easerec/interactions.hpp"
#include "easerec/split.hpp"

namespace easerec {

struct EvalParams {
    std::vector<double> lambdas;
    std::vector<int> cutoffs{5, 10, 20, 50};
    int n_folds = 5;
    double history_fraction = 0.8;
    std::uint64_t seed = 1;
};

/// One metric at one cutoff: the per-fold means (index = fold) plus their
/// mean and population standard deviation (divide by n_folds) across folds.
struct MetricSummary {
    std::vector<double> per_fold;
    double mean = 0.0;
    double stddev = 0.0;

    bool operator==(const MetricSummary&) const = default;
};

/// metric name ("recall" / "ndcg") -> cutoff R -> summary. All values lie
/// in [0, 1]; every summary covers exactly n_folds folds.
struct EvalReport {
    std::vector<int> cutoffs;
    int n_folds = 0;
    std::map<std::string, std::map<int, MetricSummary>> metrics;

    bool operator==(const EvalReport&) const = default;
};

struct LambdaReport {
    double lambda = 0.0;
    EvalReport report;

    bool operator==(const LambdaReport&) const = default;
};

struct EvalRun {
    SplitPlan plan;
    std::vector<LambdaReport> per_lambda;
    /// Non-personalized baseline: entities ranked by how many evaluated
    /// users hold them in their history part, same masking and tie rules.
    EvalReport popularity;

    bool operator==(const EvalRun&) const = default;
};

/// Scores every user in the plan with the given weights (history rows
/// summed, history masked) and averages both metrics per fold. Users
/// accumulate in plan order (name order), so results are bit-stable.
EvalReport evaluate_model_on_split(const Eigen::MatrixXd& weights, const SplitPlan& plan,
                                   const std::vector<int>& cutoffs);

/// Same protocol with one global popularity score vector (history counts
/// over all evaluated users) instead of per-user model scores.
EvalReport evaluate_popularity_on_split(const SplitPlan& plan, Index n_entities,
                                        const std::vector<int>& cutoffs);

/// The whole protocol: one split of the users, one model fit per lambda on
/// the full FeatureMatrix (the weights depend only on entity features,
/// never on interactions), per-fold user means, mean/std across folds, and
/// the popularity baseline alongside. interactions must already be aligned
/// to fm's entity vocabulary.
EvalRun evaluate(const FeatureMatrix& fm, const InteractionSet& interactions,
                 const EvalParams& params);

}  // namespace easerec
