#include "easerec/ease.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace easerec {

namespace {

constexpr char kMagic[8] = {'E', 'A', 'S', 'E', 'B', '\0', '\0', '\x01'};

void put_u64(std::ostream& out, std::uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t get_u64(std::istream& in) {
    unsigned char buf[8];
    if (!in.read(reinterpret_cast<char*>(buf), 8))
        throw IoError("truncated model file");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return v;
}

}  // namespace

SimilarityModel::SimilarityModel(Eigen::MatrixXd weights, Vocabulary entities,
                                 std::optional<double> lambda)
    : weights_(std::move(weights)), entities_(std::move(entities)), lambda_(lambda) {
    if (weights_.rows() != weights_.cols())
        throw ArgumentError("weight matrix must be square");
    if (weights_.rows() != entities_.size())
        throw ArgumentError("weight matrix size does not match the entity vocabulary");
    if (!weights_.allFinite())
        throw NumericError("weight matrix contains non-finite entries");
    for (Index i = 0; i < weights_.rows(); ++i)
        if (weights_(i, i) != 0.0)
            throw NumericError("weight matrix diagonal is not exactly zero");
}

double SimilarityModel::similarity(const std::string& entity_a,
                                   const std::string& entity_b) const {
    return weights_(entities_.at(entity_a), entities_.at(entity_b));
}

std::vector<std::pair<std::string, double>> SimilarityModel::top_similar(
    const std::string& entity, std::size_t k) const {
    if (k == 0) throw ArgumentError("k must be >= 1");
    const Index query = entities_.at(entity);
    std::vector<Index> order;
    order.reserve(static_cast<std::size_t>(entity_count()) - 1);
    for (Index i = 0; i < entity_count(); ++i)
        if (i != query) order.push_back(i);
    const std::size_t take = std::min<std::size_t>(k, order.size());
    std::partial_sort(order.begin(), order.begin() + take, order.end(),
                      [&](Index a, Index b) {
                          double wa = weights_(query, a), wb = weights_(query, b);
                          return wa > wb || (wa == wb && a < b);
                      });
    order.resize(take);
    std::vector<std::pair<std::string, double>> out;
    out.reserve(take);
    for (Index i : order) out.emplace_back(entities_.name(i), weights_(query, i));
    return out;
}

void SimilarityModel::save(std::ostream& out) const {
    std::string blob;
    for (Index i = 0; i < entities_.size(); ++i) {
        const std::string& name = entities_.name(i);
        if (name.find('\n') != std::string::npos)
            throw ArgumentError("entity name contains a newline: " + name);
        if (i > 0) blob.push_back('\n');
        blob += name;
    }
    out.write(kMagic, sizeof kMagic);
    put_u64(out, static_cast<std::uint64_t>(entity_count()));
    put_u64(out, blob.size());
    out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
    for (Index i = 0; i < weights_.rows(); ++i)
        for (Index j = 0; j < weights_.cols(); ++j)
            put_u64(out, std::bit_cast<std::uint64_t>(weights_(i, j)));
    if (!out) throw IoError("failed writing model");
}

void SimilarityModel::save_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open model file for writing: " + path);
    save(out);
    out.flush();
    if (!out) throw IoError("failed writing model file: " + path);
}

SimilarityModel SimilarityModel::load(std::istream& in) {
    char magic[8];
    if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
        throw IoError("not a model file (bad magic)");
    const std::uint64_t n = get_u64(in);
    if (n == 0) throw IoError("model file holds no entities");
    const std::uint64_t blob_len = get_u64(in);
    std::string blob(blob_len, '\0');
    if (!in.read(blob.data(), static_cast<std::streamsize>(blob_len)))
        throw IoError("truncated model file");

    std::vector<std::string> names;
    names.reserve(n);
    std::size_t start = 0;
    while (true) {
        std::size_t sep = blob.find('\n', start);
        if (sep == std::string::npos) {
            names.push_back(blob.substr(start));
            break;
        }
        names.push_back(blob.substr(start, sep - start));
        start = sep + 1;
    }
    if (names.size() != n)
        throw IoError("model vocabulary holds " + std::to_string(names.size()) +
                      " names, expected " + std::to_string(n));

    Eigen::MatrixXd weights(static_cast<Index>(n), static_cast<Index>(n));
    for (std::uint64_t i = 0; i < n; ++i)
        for (std::uint64_t j = 0; j < n; ++j)
            weights(static_cast<Index>(i), static_cast<Index>(j)) =
                std::bit_cast<double>(get_u64(in));
    if (in.peek() != std::istream::traits_type::eof())
        throw IoError("trailing bytes after model payload");

    return SimilarityModel(std::move(weights), Vocabulary::from_index_order(std::move(names)),
                           std::nullopt);
}

SimilarityModel SimilarityModel::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model file: " + path);
    return load(in);
}

SimilarityModel fit(const FeatureMatrix& fm, double lambda) {
    if (!(lambda > 0.0))
        throw ArgumentError("lambda must be > 0");
    if (fm.entity_count() < 1)
        throw ArgumentError("need at least one entity");

    // Entity Gram matrix: with entities as columns of X (X = F^T), X^T X is
    // F F^T, the matrix of feature-vector inner products between entities.
    Eigen::SparseMatrix<double> lhs = fm.values();
    Eigen::SparseMatrix<double> rhs = fm.values().transpose();
    Eigen::MatrixXd gram = Eigen::MatrixXd(Eigen::SparseMatrix<double>(lhs * rhs));
    gram.diagonal().array() += lambda;

    Eigen::MatrixXd weights;
    try {
        weights = zero_diag_ridge_weights(gram);
    } catch (const NumericError&) {
        std::ostringstream msg;
        msg << "gram matrix factorization failed at lambda=" << lambda;
        throw NumericError(msg.str());
    }
    if (!weights.allFinite()) {
        std::ostringstream msg;
        msg << "non-finite weights at lambda=" << lambda;
        throw NumericError(msg.str());
    }
    return SimilarityModel(std::move(weights), fm.entities(), lambda);
}

SimilarityModel sparsify(const SimilarityModel& model, double min_abs) {
    if (!(min_abs >= 0.0))
        throw ArgumentError("sparsify threshold must be >= 0");
    Eigen::MatrixXd weights =
        (model.weights().cwiseAbs().array() < min_abs).select(0.0, model.weights());
    return SimilarityModel(std::move(weights), model.entities(), model.lambda());
}

}  // namespace easerec
