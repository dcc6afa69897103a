#include "aqtsp/tsp/blocks.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <limits>

namespace aqtsp::tsp {

namespace {

using RealSparse = Eigen::SparseMatrix<double>;

struct Candidate {
    double value;
    std::size_t block_begin;
    double hm_weight;
};

class Collector {
public:
    Collector(const FockBasis& basis, double tol) : basis_(basis), tol_(tol) {}

    void add_block(std::size_t begin, const Eigen::MatrixXd& h) {
        ++blocks_;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
        const auto& w = es.eigenvalues();
        const auto& v = es.eigenvectors();
        const bool vac_first = basis_.hm_vacuum(begin);
        for (Eigen::Index k = 0; k < w.size(); ++k) {
            values_.push_back(w[k]);
            const double vac = vac_first ? v(0, k) * v(0, k) : 0.0;
            const double hm = std::max(0.0, 1.0 - vac);
            if (hm > 0.5) lowest_hm_ = std::min(lowest_hm_, w[k]);
            if (w[k] <= best_ + tol_) {
                best_ = std::min(best_, w[k]);
                candidates_.push_back({w[k], begin, hm});
            }
        }
    }

    void note_off_block(double v) { off_block_ = std::max(off_block_, v); }

    GroundSpaceReport finish() const {
        GroundSpaceReport r;
        r.blocks = blocks_;
        r.max_off_block = off_block_;
        r.min_eigenvalue = best_;
        r.lowest_hm_excited = lowest_hm_;
        r.first_excited = std::numeric_limits<double>::infinity();
        for (double v : values_)
            if (v > best_ + tol_) r.first_excited = std::min(r.first_excited, v);
        for (const auto& c : candidates_) {
            if (c.value > best_ + tol_) continue;
            r.ground.push_back({basis_.link_occupations(c.block_begin), c.value, c.hm_weight});
        }
        return r;
    }

private:
    const FockBasis& basis_;
    double tol_;
    std::size_t blocks_ = 0;
    double off_block_ = 0.0;
    double best_ = std::numeric_limits<double>::infinity();
    double lowest_hm_ = std::numeric_limits<double>::infinity();
    std::vector<double> values_;
    std::vector<Candidate> candidates_;
};

RealSparse block_factor(const FockBasis& basis, FilterTerm term, std::size_t begin, std::size_t end) {
    const auto n = static_cast<Eigen::Index>(end - begin);
    std::vector<Eigen::Triplet<double>> t;
    std::vector<std::pair<std::size_t, double>> col;
    for (std::size_t c = begin; c < end; ++c) {
        col.clear();
        filter_column(basis, term, c, FilterFault::none, col);
        for (const auto& [row, v] : col) {
            if (row < begin || row >= end) throw InvariantError("filter factor left its link block");
            t.emplace_back(static_cast<Eigen::Index>(row - begin), static_cast<Eigen::Index>(c - begin), v);
        }
    }
    RealSparse m(n, n);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

} // namespace

GroundSpaceReport ground_space_from_operator(const SparseOperator& H_P, const FockBasis& basis, double cluster_tol) {
    if (H_P.dimension() != static_cast<Eigen::Index>(basis.dimension())) {
        throw ValidationError("ground_space_from_operator: operator dimension does not match the basis");
    }
    if (!H_P.hermitian()) throw ValidationError("ground_space_from_operator: operator is not hermitian");
    Collector col(basis, cluster_tol);
    const auto& m = H_P.matrix();
    for (const auto& [begin, end] : basis.link_blocks()) {
        const auto n = static_cast<Eigen::Index>(end - begin);
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
        for (std::size_t r = begin; r < end; ++r) {
            for (SparseOperator::Matrix::InnerIterator it(m, static_cast<Eigen::Index>(r)); it; ++it) {
                const auto c = static_cast<std::size_t>(it.col());
                if (c < begin || c >= end) {
                    col.note_off_block(std::abs(it.value()));
                    continue;
                }
                if (std::abs(it.value().imag()) > 1e-14) {
                    throw InvariantError("ground_space_from_operator: H_P has a complex entry");
                }
                h(static_cast<Eigen::Index>(r - begin), static_cast<Eigen::Index>(c - begin)) = it.value().real();
            }
        }
        col.add_block(begin, h);
    }
    return col.finish();
}

GroundSpaceReport ground_space_blockwise(const TspInstance& instance, const FockBasis& basis, PenaltyVariant variant,
                                         double s, double cluster_tol) {
    if (instance.n_cities() != basis.registry().n_cities()) {
        throw ValidationError("ground_space_blockwise: instance and basis disagree on N");
    }
    require_filter_capacity(basis);
    const auto& reg = basis.registry();
    const double q_scale = reg.symmetric_links() ? 0.5 : 1.0;
    Collector col(basis, cluster_tol);
    for (const auto& [begin, end] : basis.link_blocks()) {
        const auto n = static_cast<Eigen::Index>(end - begin);
        const RealSparse F = block_factor(basis, FilterTerm::first_layer, begin, end);
        const RealSparse L = block_factor(basis, FilterTerm::link_layer, begin, end);
        const RealSparse E = block_factor(basis, FilterTerm::ending_layer, begin, end);
        const RealSparse M = block_factor(basis, FilterTerm::marker_product, begin, end);
        RealSparse q = F;
        for (int k = 0; k < reg.n_cities() - 2; ++k) q = (L * q).pruned();
        q = (M * (E * q)).pruned();

        Eigen::MatrixXd qm = q_scale * Eigen::MatrixXd(q);
        qm.diagonal().array() -= 1.0;
        Eigen::MatrixXd pen;
        if (variant == PenaltyVariant::hermitian_square) {
            pen = qm.transpose() * qm;
        } else {
            const Eigen::MatrixXd sq = qm * qm;
            pen = sq + sq.transpose();
        }

        double dist = 0.0;
        for (std::size_t m = 0; m < reg.link_count(); ++m) {
            const auto& p = reg.link_modes()[m];
            dist += instance.d(p.to, p.from) * basis.occupation(begin, m);
        }
        Eigen::MatrixXd h = s * pen;
        for (Eigen::Index i = 0; i < n; ++i) {
            int hm = 0;
            for (std::size_t m = reg.link_count(); m < reg.mode_count(); ++m)
                hm += basis.occupation(begin + static_cast<std::size_t>(i), m);
            h(i, i) += s * hm + dist;
        }
        col.add_block(begin, h);
    }
    return col.finish();
}

} // namespace aqtsp::tsp
