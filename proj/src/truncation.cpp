#include "ergocert/truncation.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "ergocert/error.hpp"

namespace ergocert {

Eigen::MatrixXd FiniteTruncation::dense() const {
    const auto n = static_cast<Eigen::Index>(size());
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (const auto& e : rows[i]) {
            M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(e.col)) += e.p;
        }
    }
    return M;
}

FiniteTruncation truncate(const DiscreteKernel& kernel, std::size_t k) {
    if (k < 1) throw InvalidArgument("truncation level must be at least 1");
    FiniteTruncation t;
    t.k = k;
    t.rows.resize(k + 1);
    t.lump.resize(k + 1);
    for (StateIndex i = 0; i <= k; ++i) {
        Row src = kernel.row(i);
        std::sort(src.begin(), src.end(),
                  [](const Entry& a, const Entry& b) { return a.col < b.col; });
        Row& dst = t.rows[i];
        // Rows have finite support, so the lump is the finite sum of the
        // entries at columns >= k. Forming it as 1 - sum_{j<k} would leave a
        // rounding residue of order 1e-16 in every row, which swamps the
        // small stationary probabilities far from the origin.
        double lump = 0.0;
        for (const auto& e : src) {
            if (!(e.p > 0.0)) continue;
            if (e.col >= k) {
                lump += e.p;
            } else if (!dst.empty() && dst.back().col == e.col) {
                dst.back().p += e.p;
            } else {
                dst.push_back(e);
            }
        }
        t.lump[i] = lump;
        if (lump > 0.0) dst.push_back({k, lump});
    }
    return t;
}

double delta_bound(std::size_t k, double K_const, const WeightSequence& V) {
    return K_const / V.value(k);
}

double delta_exact(const DiscreteKernel& kernel, std::size_t k, const WeightSequence& V) {
    double best = 1.0 / V.value(k + 1);
    for (StateIndex i = 0; i <= k; ++i) {
        double over = 0.0;
        for (const auto& e : kernel.row(i)) {
            if (e.col > k) over += e.p;
        }
        if (over > 0.0) best = std::max(best, 2.0 * over / V.value(i));
    }
    return best;
}

void write_truncation_csv(const FiniteTruncation& t, std::ostream& out) {
    const Eigen::MatrixXd M = t.dense();
    char buf[40];
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", M(i, j));
            out << (j ? "," : "") << buf;
        }
        out << '\n';
    }
}

}  // namespace ergocert
