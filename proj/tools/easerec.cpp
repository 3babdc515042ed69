// Command-line front end: fit / similar / recommend / evaluate / inspect.
//
// Every command is deterministic for a fixed configuration (including the
// seed). Partial output files are written to `<path>.tmp` and renamed only
// on success.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "easerec/ease.hpp"
#include "easerec/errors.hpp"
#include "easerec/evaluate.hpp"
#include "easerec/feature_matrix.hpp"
#include "easerec/interactions.hpp"
#include "easerec/metrics.hpp"
#include "easerec/scoring.hpp"
#include "easerec/split.hpp"

namespace {

using nlohmann::ordered_json;

struct RunConfig {
    std::string features;
    std::string interactions;
    std::string mode = "binary";
    std::uint64_t min_feature_count = 1;
    std::vector<double> lambdas{100.0};
    std::vector<int> cutoffs{5, 10, 20, 50};
    int folds = 5;
    double history_fraction = 0.8;
    std::uint64_t seed = 1;
    double rating_threshold = 3.5;
    double sparsify = 0.0;
    std::string out;
    std::string report;
    std::string model;
    std::string entity;
    int k = 10;
    int top = 10;
};

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string fmt_lambda(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// Writes to `<path>.tmp`, renames into place on commit(), removes the
/// temporary when destroyed uncommitted.
class OutputFile {
public:
    explicit OutputFile(std::string path)
        : path_(std::move(path)),
          tmp_(path_ + ".tmp"),
          out_(tmp_, std::ios::binary | std::ios::trunc) {
        if (!out_) throw easerec::IoError("cannot open output file: " + tmp_);
    }

    OutputFile(const OutputFile&) = delete;
    OutputFile& operator=(const OutputFile&) = delete;

    std::ostream& stream() { return out_; }

    void commit() {
        out_.flush();
        if (!out_) throw easerec::IoError("failed writing " + tmp_);
        out_.close();
        std::filesystem::rename(tmp_, path_);
        committed_ = true;
    }

    ~OutputFile() {
        if (!committed_) {
            out_.close();
            std::error_code ec;
            std::filesystem::remove(tmp_, ec);
        }
    }

private:
    std::string path_;
    std::string tmp_;
    std::ofstream out_;
    bool committed_ = false;
};

easerec::FeatureMode parse_mode(const std::string& mode) {
    if (mode == "binary") return easerec::FeatureMode::binary;
    if (mode == "count") return easerec::FeatureMode::count;
    throw easerec::ArgumentError("mode must be 'binary' or 'count', got '" + mode + "'");
}

// ---------------------------------------------------------------------------
// config file support: one flat JSON document mirroring RunConfig. Explicit
// command-line flags override file values, which override defaults.

const std::set<std::string>& known_config_keys() {
    static const std::set<std::string> keys = {
        "features",         "interactions", "mode",   "min_feature_count",
        "lambda",           "cutoffs",      "folds",  "history_fraction",
        "seed",             "rating_threshold",       "sparsify",
        "out",
        "report",           "model",        "entity", "k",
        "top"};
    return keys;
}

void assign_config_value(const std::string& key, const nlohmann::json& value,
                         RunConfig& cfg) {
    if (key == "features") cfg.features = value.get<std::string>();
    else if (key == "interactions") cfg.interactions = value.get<std::string>();
    else if (key == "mode") cfg.mode = value.get<std::string>();
    else if (key == "min_feature_count") cfg.min_feature_count = value.get<std::uint64_t>();
    else if (key == "lambda") {
        if (value.is_array()) cfg.lambdas = value.get<std::vector<double>>();
        else cfg.lambdas = {value.get<double>()};
    }
    else if (key == "cutoffs") cfg.cutoffs = value.get<std::vector<int>>();
    else if (key == "folds") cfg.folds = value.get<int>();
    else if (key == "history_fraction") cfg.history_fraction = value.get<double>();
    else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
    else if (key == "rating_threshold") cfg.rating_threshold = value.get<double>();
    else if (key == "sparsify") cfg.sparsify = value.get<double>();
    else if (key == "out") cfg.out = value.get<std::string>();
    else if (key == "report") cfg.report = value.get<std::string>();
    else if (key == "model") cfg.model = value.get<std::string>();
    else if (key == "entity") cfg.entity = value.get<std::string>();
    else if (key == "k") cfg.k = value.get<int>();
    else if (key == "top") cfg.top = value.get<int>();
}

std::string flag_for_key(const std::string& key) {
    std::string flag = "--" + key;
    for (char& c : flag)
        if (c == '_') c = '-';
    return flag;
}

void apply_config_file(CLI::App* cmd, const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw easerec::IoError("cannot open config file: " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw easerec::ParseError(std::string("config file ") + path + ": " + e.what());
    }
    if (!doc.is_object())
        throw easerec::ParseError("config file must hold one flat JSON object");
    for (const auto& [key, value] : doc.items()) {
        if (!known_config_keys().count(key))
            throw easerec::ArgumentError("unknown config key: " + key);
        // "entity" is positional on the command line.
        const std::string flag = key == "entity" ? "entity" : flag_for_key(key);
        const CLI::Option* opt = cmd->get_option_no_throw(flag);
        if (opt == nullptr) continue;   // key not used by this subcommand
        if (opt->count() > 0) continue; // explicit flag wins
        try {
            assign_config_value(key, value, cfg);
        } catch (const nlohmann::json::exception& e) {
            throw easerec::ParseError("config key '" + key + "': " + e.what());
        }
    }
}

ordered_json eval_config_json(const RunConfig& cfg) {
    ordered_json j;
    j["features"] = cfg.features;
    j["interactions"] = cfg.interactions;
    j["mode"] = cfg.mode;
    j["min_feature_count"] = cfg.min_feature_count;
    j["lambda"] = cfg.lambdas;
    j["cutoffs"] = cfg.cutoffs;
    j["folds"] = cfg.folds;
    j["history_fraction"] = cfg.history_fraction;
    j["seed"] = cfg.seed;
    j["rating_threshold"] = cfg.rating_threshold;
    j["out"] = cfg.out;
    j["report"] = cfg.report;
    return j;
}

// ---------------------------------------------------------------------------
// report emission

ordered_json metrics_json(const easerec::EvalReport& report) {
    ordered_json metrics;
    for (const auto& [metric, by_r] : report.metrics) {
        ordered_json per_metric;
        for (const auto& [r, summary] : by_r) {
            per_metric[std::to_string(r)] = {{"per_fold", summary.per_fold},
                                             {"mean", summary.mean},
                                             {"std", summary.stddev}};
        }
        metrics[metric] = std::move(per_metric);
    }
    return metrics;
}

ordered_json report_json(const RunConfig& cfg, const easerec::EvalRun& run) {
    ordered_json j;
    j["config"] = eval_config_json(cfg);
    j["split"] = {{"seed", run.plan.seed},
                  {"n_folds", run.plan.n_folds},
                  {"history_fraction", run.plan.history_fraction},
                  {"evaluated_users", run.plan.users.size()},
                  {"excluded_users", run.plan.excluded_users}};
    j["results"] = ordered_json::array();
    for (const auto& lr : run.per_lambda)
        j["results"].push_back({{"lambda", lr.lambda}, {"metrics", metrics_json(lr.report)}});
    j["popularity_baseline"] = {{"metrics", metrics_json(run.popularity)}};
    return j;
}

void write_eval_tsv(std::ostream& out, const RunConfig& cfg, const easerec::EvalRun& run) {
    out << "# config: " << eval_config_json(cfg).dump() << "\n";
    auto emit = [&out](const std::string& label, const easerec::EvalReport& report) {
        for (const auto& [metric, by_r] : report.metrics) {
            for (const auto& [r, summary] : by_r) {
                for (std::size_t f = 0; f < summary.per_fold.size(); ++f)
                    out << label << '\t' << metric << '\t' << r << '\t' << f << '\t'
                        << fmt6(summary.per_fold[f]) << '\n';
                out << label << '\t' << metric << '\t' << r << '\t' << "mean" << '\t'
                    << fmt6(summary.mean) << '\n';
                out << label << '\t' << metric << '\t' << r << '\t' << "std" << '\t'
                    << fmt6(summary.stddev) << '\n';
            }
        }
    };
    for (const auto& lr : run.per_lambda) emit(fmt_lambda(lr.lambda), lr.report);
    emit("popularity", run.popularity);
}

// ---------------------------------------------------------------------------
// commands

void require(bool ok, const std::string& message) {
    if (!ok) throw easerec::ArgumentError(message);
}

int cmd_fit(const RunConfig& cfg) {
    require(!cfg.features.empty(), "fit needs --features");
    require(!cfg.out.empty(), "fit needs --out");
    require(cfg.lambdas.size() == 1, "fit takes exactly one --lambda");
    require(cfg.lambdas[0] > 0.0, "lambda must be > 0");
    require(cfg.sparsify >= 0.0, "sparsify threshold must be >= 0");

    const auto start = std::chrono::steady_clock::now();
    easerec::FeatureMatrix fm = easerec::load_feature_pairs_file(
        cfg.features, parse_mode(cfg.mode), cfg.min_feature_count);
    easerec::SimilarityModel model = easerec::fit(fm, cfg.lambdas[0]);
    if (cfg.sparsify > 0.0) model = easerec::sparsify(model, cfg.sparsify);
    OutputFile out(cfg.out);
    model.save(out.stream());
    out.commit();
    const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;

    std::cout << "fit: entities=" << fm.entity_count() << " features=" << fm.feature_count()
              << " lambda=" << fmt_lambda(cfg.lambdas[0]) << " model=" << cfg.out
              << " wall_s=" << fmt6(wall.count()) << "\n";
    return 0;
}

int cmd_similar(const RunConfig& cfg) {
    require(!cfg.model.empty(), "similar needs --model");
    require(!cfg.entity.empty(), "similar needs an entity argument");
    require(cfg.k >= 1, "k must be >= 1");

    easerec::SimilarityModel model = easerec::SimilarityModel::load_file(cfg.model);
    auto neighbors = model.top_similar(cfg.entity, static_cast<std::size_t>(cfg.k));
    std::size_t rank = 1;
    for (const auto& [name, weight] : neighbors)
        std::cout << rank++ << '\t' << name << '\t' << fmt6(weight) << '\n';
    return 0;
}

int cmd_recommend(const RunConfig& cfg) {
    require(!cfg.model.empty(), "recommend needs --model");
    require(!cfg.interactions.empty(), "recommend needs --interactions");
    require(cfg.top >= 1, "top must be >= 1");

    easerec::SimilarityModel model = easerec::SimilarityModel::load_file(cfg.model);
    easerec::InteractionSet raw =
        easerec::load_interactions_file(cfg.interactions, cfg.rating_threshold);
    easerec::AlignResult aligned = easerec::align(raw, model.entities());
    std::cerr << "align: dropped_entities=" << aligned.dropped_entities
              << " dropped_pairs=" << aligned.dropped_pairs
              << " dropped_users=" << aligned.dropped_users
              << " kept_users=" << aligned.interactions.user_count() << "\n";

    std::ostringstream tsv;
    const auto& ints = aligned.interactions;
    for (std::size_t u = 0; u < ints.user_count(); ++u) {
        auto history = ints.items_of(u);
        Eigen::VectorXd scores = easerec::score_user(history, model);
        auto ranking =
            easerec::top_ranked(scores, history, static_cast<std::size_t>(cfg.top));
        for (std::size_t pos = 0; pos < ranking.size(); ++pos)
            tsv << ints.user_name(u) << '\t' << pos + 1 << '\t'
                << model.entities().name(ranking[pos]) << '\t' << fmt6(scores[ranking[pos]])
                << '\n';
    }
    std::cout << tsv.str();
    if (!cfg.out.empty()) {
        OutputFile out(cfg.out);
        out.stream() << tsv.str();
        out.commit();
    }
    return 0;
}

int cmd_evaluate(const RunConfig& cfg) {
    require(!cfg.features.empty(), "evaluate needs --features");
    require(!cfg.interactions.empty(), "evaluate needs --interactions");
    require(cfg.folds >= 2, "folds must be >= 2");
    require(cfg.history_fraction > 0.0 && cfg.history_fraction < 1.0,
            "history fraction must lie in (0, 1)");
    require(!cfg.lambdas.empty(), "evaluate needs at least one --lambda");
    for (double lambda : cfg.lambdas) require(lambda > 0.0, "lambda must be > 0");
    require(!cfg.cutoffs.empty(), "evaluate needs at least one cutoff");
    for (int r : cfg.cutoffs) require(r >= 1, "cutoffs must be >= 1");

    easerec::FeatureMatrix fm = easerec::load_feature_pairs_file(
        cfg.features, parse_mode(cfg.mode), cfg.min_feature_count);
    easerec::InteractionSet raw =
        easerec::load_interactions_file(cfg.interactions, cfg.rating_threshold);
    easerec::AlignResult aligned = easerec::align(raw, fm.entities());
    std::cerr << "align: dropped_entities=" << aligned.dropped_entities
              << " dropped_pairs=" << aligned.dropped_pairs
              << " dropped_users=" << aligned.dropped_users
              << " kept_users=" << aligned.interactions.user_count() << "\n";

    easerec::EvalParams params;
    params.lambdas = cfg.lambdas;
    params.cutoffs = cfg.cutoffs;
    params.n_folds = cfg.folds;
    params.history_fraction = cfg.history_fraction;
    params.seed = cfg.seed;
    easerec::EvalRun run = easerec::evaluate(fm, aligned.interactions, params);
    std::cerr << "split: evaluated_users=" << run.plan.users.size()
              << " excluded_users=" << run.plan.excluded_users << " folds=" << cfg.folds
              << "\n";

    std::ostringstream tsv;
    write_eval_tsv(tsv, cfg, run);
    std::cout << tsv.str();
    if (!cfg.out.empty()) {
        OutputFile out(cfg.out);
        out.stream() << tsv.str();
        out.commit();
    }
    if (!cfg.report.empty()) {
        OutputFile report(cfg.report);
        report.stream() << report_json(cfg, run).dump(2) << "\n";
        report.commit();
    }
    return 0;
}

int cmd_inspect(const RunConfig& cfg) {
    require(!cfg.model.empty(), "inspect needs --model");
    easerec::SimilarityModel model = easerec::SimilarityModel::load_file(cfg.model);
    const Eigen::MatrixXd& w = model.weights();
    std::cout << "entities: " << model.entity_count() << "\n"
              << "lambda: unknown (model files do not store it)\n"
              << "weights_min: " << fmt6(w.minCoeff()) << "\n"
              << "weights_max: " << fmt6(w.maxCoeff()) << "\n"
              << "weights_mean_abs: " << fmt6(w.cwiseAbs().mean()) << "\n"
              << "weights_frobenius: " << fmt6(w.norm()) << "\n"
              << "zero_diagonal: yes\n"
              << "finite: yes\n";
    if (model.entity_count() > 0)
        std::cout << "first_entity: " << model.entities().name(0) << "\n"
                  << "last_entity: " << model.entities().name(model.entity_count() - 1)
                  << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"entity similarity estimation and top-N recommendation evaluation"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path,
                        "flat JSON config file; explicit flags override it");
    };

    CLI::App* fit_cmd =
        app.add_subcommand("fit", "estimate entity-entity weights and write a model file");
    fit_cmd->add_option("--features", cfg.features, "entity/feature pair TSV");
    fit_cmd->add_option("--mode", cfg.mode, "binary|count (default binary)");
    fit_cmd->add_option("--min-feature-count", cfg.min_feature_count,
                        "drop features seen in fewer distinct entities");
    fit_cmd->add_option("--lambda", cfg.lambdas, "L2 strength (exactly one)");
    fit_cmd->add_option("--sparsify", cfg.sparsify,
                        "zero weights with |w| below this before saving (lossy)");
    fit_cmd->add_option("--out", cfg.out, "model file to write");
    add_common(fit_cmd);

    CLI::App* similar_cmd =
        app.add_subcommand("similar", "print the nearest entities to a query entity");
    similar_cmd->add_option("--model", cfg.model, "model file");
    similar_cmd->add_option("entity", cfg.entity, "query entity name");
    similar_cmd->add_option("-k,--k", cfg.k, "number of neighbors (default 10)");
    add_common(similar_cmd);

    CLI::App* recommend_cmd = app.add_subcommand(
        "recommend", "score users from their full interaction history");
    recommend_cmd->add_option("--model", cfg.model, "model file");
    recommend_cmd->add_option("--interactions", cfg.interactions, "user/entity TSV");
    recommend_cmd->add_option("--rating-threshold", cfg.rating_threshold,
                              "keep rated pairs with rating >= threshold (default 3.5)");
    recommend_cmd->add_option("--top", cfg.top, "list length per user (default 10)");
    recommend_cmd->add_option("--out", cfg.out, "also write the TSV here");
    add_common(recommend_cmd);

    CLI::App* evaluate_cmd = app.add_subcommand(
        "evaluate", "run the fold/split evaluation protocol over a lambda grid");
    evaluate_cmd->add_option("--features", cfg.features, "entity/feature pair TSV");
    evaluate_cmd->add_option("--interactions", cfg.interactions, "user/entity TSV");
    evaluate_cmd->add_option("--mode", cfg.mode, "binary|count (default binary)");
    evaluate_cmd->add_option("--min-feature-count", cfg.min_feature_count,
                             "drop features seen in fewer distinct entities");
    evaluate_cmd->add_option("--lambda", cfg.lambdas, "lambda grid (repeatable)");
    evaluate_cmd->add_option("--cutoffs", cfg.cutoffs, "R cutoffs (default 5 10 20 50)");
    evaluate_cmd->add_option("--folds", cfg.folds, "user folds (default 5)");
    evaluate_cmd->add_option("--history-fraction", cfg.history_fraction,
                             "history share per user (default 0.8)");
    evaluate_cmd->add_option("--seed", cfg.seed, "split seed (default 1)");
    evaluate_cmd->add_option("--rating-threshold", cfg.rating_threshold,
                             "keep rated pairs with rating >= threshold (default 3.5)");
    evaluate_cmd->add_option("--out", cfg.out, "also write the TSV report here");
    evaluate_cmd->add_option("--report", cfg.report, "write the JSON report here");
    add_common(evaluate_cmd);

    CLI::App* inspect_cmd =
        app.add_subcommand("inspect", "print model header and weight statistics");
    inspect_cmd->add_option("--model", cfg.model, "model file");
    add_common(inspect_cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        CLI::App* active = app.get_subcommands().front();
        if (!config_path.empty()) apply_config_file(active, config_path, cfg);

        if (active == fit_cmd) return cmd_fit(cfg);
        if (active == similar_cmd) return cmd_similar(cfg);
        if (active == recommend_cmd) return cmd_recommend(cfg);
        if (active == evaluate_cmd) return cmd_evaluate(cfg);
        if (active == inspect_cmd) return cmd_inspect(cfg);
        throw easerec::ArgumentError("unknown subcommand");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
