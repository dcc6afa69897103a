#include "aqtsp/tsp/instance.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace aqtsp::tsp {

namespace {

std::string entry(Eigen::Index i, Eigen::Index j) {
    return "(" + std::to_string(i + 1) + ", " + std::to_string(j + 1) + ")";
}

} // namespace

TspInstance::TspInstance(Eigen::MatrixXd distances, bool require_symmetric) : d_(std::move(distances)) {
    if (d_.rows() != d_.cols()) {
        throw ValidationError("distance matrix must be square, got " + std::to_string(d_.rows()) + "x" +
                              std::to_string(d_.cols()));
    }
    if (d_.rows() < 3) {
        throw ValidationError("instance needs at least 3 cities, got " + std::to_string(d_.rows()));
    }
    for (Eigen::Index i = 0; i < d_.rows(); ++i) {
        for (Eigen::Index j = 0; j < d_.cols(); ++j) {
            const double v = d_(i, j);
            if (!std::isfinite(v)) throw ValidationError("distance " + entry(i, j) + " is not finite");
            if (i == j && v != 0.0) {
                throw ValidationError("diagonal distance " + entry(i, j) + " must be 0, got " + std::to_string(v));
            }
            if (v < 0.0) throw ValidationError("distance " + entry(i, j) + " is negative: " + std::to_string(v));
            if (require_symmetric && std::abs(v - d_(j, i)) > 1e-12) {
                std::ostringstream os;
                os << "distance matrix is not symmetric at entry " << entry(i, j) << ": " << v << " vs " << d_(j, i);
                throw ValidationError(os.str());
            }
        }
    }
}

bool TspInstance::symmetric(double tol) const {
    return (d_ - d_.transpose()).cwiseAbs().maxCoeff() <= tol;
}

TspInstance parse_instance(const std::string& text, bool require_symmetric) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("instance document is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError("instance document must be an object");
    if (!doc.contains("n_cities") || !doc["n_cities"].is_number_integer()) {
        throw ValidationError("instance document needs an integer n_cities");
    }
    if (!doc.contains("distances") || !doc["distances"].is_array()) {
        throw ValidationError("instance document needs a distances matrix");
    }
    const int n = doc["n_cities"].get<int>();
    if (n < 3) throw ValidationError("n_cities must be >= 3, got " + std::to_string(n));
    const auto& rows = doc["distances"];
    if (rows.size() != static_cast<std::size_t>(n)) {
        throw ValidationError("distances has " + std::to_string(rows.size()) + " rows, expected " + std::to_string(n));
    }
    Eigen::MatrixXd d(n, n);
    for (int i = 0; i < n; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || row.size() != static_cast<std::size_t>(n)) {
            throw ValidationError("distances row " + std::to_string(i + 1) + " must have " + std::to_string(n) +
                                  " entries");
        }
        for (int j = 0; j < n; ++j) {
            const auto& v = row[static_cast<std::size_t>(j)];
            if (!v.is_number()) throw ValidationError("distance " + entry(i, j) + " is not a number");
            d(i, j) = v.get<double>();
        }
    }
    return TspInstance(std::move(d), require_symmetric);
}

TspInstance load_instance(const std::string& path, bool require_symmetric) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open instance file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str(), require_symmetric);
}

std::string instance_to_json(const TspInstance& instance) {
    nlohmann::json doc;
    doc["n_cities"] = instance.n_cities();
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < instance.distances().rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < instance.distances().cols(); ++j) row.push_back(instance.distances()(i, j));
        rows.push_back(row);
    }
    doc["distances"] = rows;
    return doc.dump(2);
}

TspInstance random_euclidean(int n_cities, std::uint64_t seed) {
    if (n_cities < 3) throw ValidationError("random_euclidean: need at least 3 cities");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::MatrixXd p(n_cities, 2);
    for (int i = 0; i < n_cities; ++i) p.row(i) << u(rng), u(rng);
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n_cities, n_cities);
    for (int i = 0; i < n_cities; ++i)
        for (int j = 0; j < n_cities; ++j)
            if (i != j) d(i, j) = (p.row(i) - p.row(j)).norm();
    return TspInstance(std::move(d), true);
}

TspInstance random_asymmetric(int n_cities, std::uint64_t seed, double low, double high) {
    if (n_cities < 3) throw ValidationError("random_asymmetric: need at least 3 cities");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(low, high);
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n_cities, n_cities);
    for (int i = 0; i < n_cities; ++i)
        for (int j = 0; j < n_cities; ++j)
            if (i != j) d(i, j) = u(rng);
    return TspInstance(std::move(d), false);
}

} // namespace aqtsp::tsp
