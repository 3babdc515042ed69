#include "easerec/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "easerec/errors.hpp"
#include "easerec/metrics.hpp"
#include "easerec/scoring.hpp"

namespace easerec {

namespace {

MetricSummary summarize(std::vector<double> per_fold) {
    MetricSummary s;
    s.per_fold = std::move(per_fold);
    const double n = static_cast<double>(s.per_fold.size());
    double sum = 0.0;
    for (double v : s.per_fold) sum += v;
    s.mean = sum / n;
    double sq = 0.0;
    for (double v : s.per_fold) sq += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(sq / n);  // population form: the folds are the whole population
    return s;
}

std::vector<int> checked_cutoffs(const std::vector<int>& cutoffs) {
    if (cutoffs.empty()) throw ArgumentError("no cutoffs given");
    std::vector<int> sorted = cutoffs;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    if (sorted.front() < 1) throw ArgumentError("cutoffs must be >= 1");
    return sorted;
}

/// Shared protocol core: per-user ranking from a caller-supplied scorer,
/// per-fold user means accumulated in plan order, then mean/std over folds.
EvalReport evaluate_ranked(
    const SplitPlan& plan, const std::vector<int>& cutoffs,
    const std::function<Eigen::VectorXd(const UserSplit&)>& scores_for) {
    const std::vector<int> rs = checked_cutoffs(cutoffs);
    const auto n_folds = static_cast<std::size_t>(plan.n_folds);
    const auto r_max = static_cast<std::size_t>(rs.back());

    std::map<int, std::vector<double>> recall_sum, ndcg_sum;
    for (int r : rs) {
        recall_sum[r].assign(n_folds, 0.0);
        ndcg_sum[r].assign(n_folds, 0.0);
    }
    std::vector<std::size_t> fold_users(n_folds, 0);

    for (const UserSplit& us : plan.users) {
        const auto fold = static_cast<std::size_t>(us.fold);
        Eigen::VectorXd scores = scores_for(us);
        std::vector<Index> ranking = top_ranked(scores, us.history, r_max);
        for (int r : rs) {
            recall_sum[r][fold] += recall_at(ranking, us.answer, static_cast<std::size_t>(r));
            ndcg_sum[r][fold] += ndcg_at(ranking, us.answer, static_cast<std::size_t>(r));
        }
        ++fold_users[fold];
    }
    for (std::size_t f = 0; f < n_folds; ++f)
        if (fold_users[f] == 0)
            throw ArgumentError("fold " + std::to_string(f) + " holds no users");

    EvalReport report;
    report.cutoffs = rs;
    report.n_folds = plan.n_folds;
    for (int r : rs) {
        std::vector<double> recall_folds(n_folds), ndcg_folds(n_folds);
        for (std::size_t f = 0; f < n_folds; ++f) {
            recall_folds[f] = recall_sum[r][f] / static_cast<double>(fold_users[f]);
            ndcg_folds[f] = ndcg_sum[r][f] / static_cast<double>(fold_users[f]);
        }
        report.metrics["recall"][r] = summarize(std::move(recall_folds));
        report.metrics["ndcg"][r] = summarize(std::move(ndcg_folds));
    }
    return report;
}

}  // namespace

EvalReport evaluate_model_on_split(const Eigen::MatrixXd& weights, const SplitPlan& plan,
                                   const std::vector<int>& cutoffs) {
    return evaluate_ranked(plan, cutoffs, [&](const UserSplit& us) {
        return score_user(us.history, weights);
    });
}

EvalReport evaluate_popularity_on_split(const SplitPlan& plan, Index n_entities,
                                        const std::vector<int>& cutoffs) {
    Eigen::VectorXd popularity = Eigen::VectorXd::Zero(n_entities);
    for (const UserSplit& us : plan.users)
        for (Index i : us.history) popularity[i] += 1.0;
    return evaluate_ranked(plan, cutoffs,
                           [&](const UserSplit&) { return popularity; });
}

EvalRun evaluate(const FeatureMatrix& fm, const InteractionSet& interactions,
                 const EvalParams& params) {
    if (!(interactions.entities() == fm.entities()))
        throw ArgumentError("interactions are not aligned to the feature matrix");
    if (params.lambdas.empty())
        throw ArgumentError("no lambda values given");
    for (double lambda : params.lambdas)
        if (!(lambda > 0.0)) throw ArgumentError("lambda must be > 0");

    EvalRun run;
    run.plan = make_split(interactions, params.n_folds, params.history_fraction,
                          params.seed);
    run.per_lambda.reserve(params.lambdas.size());
    for (double lambda : params.lambdas) {
        SimilarityModel model = fit(fm, lambda);
        run.per_lambda.push_back(
            {lambda, evaluate_model_on_split(model.weights(), run.plan, params.cutoffs)});
    }
    run.popularity =
        evaluate_popularity_on_split(run.plan, fm.entity_count(), params.cutoffs);
    return run;
}

}  // namespace easerec
