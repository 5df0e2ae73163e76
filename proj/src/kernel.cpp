#include "ergocert/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ergocert/error.hpp"

namespace ergocert {

DriftViolation::DriftViolation(std::size_t row, double excess)
    : Error("drift inequality violated at row " + std::to_string(row) +
            " (excess " + std::to_string(excess) + ")"),
      row_(row),
      excess_(excess) {}

namespace {

void check_row(const Row& r, StateIndex i, const Tolerances& tol) {
    double sum = 0.0;
    for (const auto& e : r) {
        if (!(e.p >= 0.0)) {
            throw InvalidArgument("negative or NaN probability in row " + std::to_string(i));
        }
        sum += e.p;
    }
    if (std::abs(sum - 1.0) > tol.row_sum) {
        throw InvalidArgument("row " + std::to_string(i) + " sums to " +
                              std::to_string(sum) + ", not 1");
    }
}

}  // namespace

double laurent_eval(std::span<const double> increments, std::size_t g, double gamma) {
    // sum_m a_m gamma^m with m = idx - g; accumulate in a fixed order so that
    // every caller obtains bit-identical values.
    double sum = 0.0;
    for (std::size_t idx = 0; idx < increments.size(); ++idx) {
        const int m = static_cast<int>(idx) - static_cast<int>(g);
        sum += increments[idx] * std::pow(gamma, m);
    }
    return sum;
}

DiscreteKernel DiscreteKernel::homogeneous(std::vector<Row> boundary, std::size_t g,
                                           std::vector<double> increments,
                                           const Tolerances& tol) {
    if (increments.size() < g + 1) {
        throw InvalidArgument("increment vector shorter than g + 1");
    }
    if (boundary.size() < g) {
        throw InvalidArgument("a homogeneous tail needs at least g explicit boundary rows");
    }
    Row as_row;
    for (std::size_t idx = 0; idx < increments.size(); ++idx) {
        as_row.push_back({idx, increments[idx]});
    }
    check_row(as_row, boundary.size(), tol);
    for (std::size_t i = 0; i < boundary.size(); ++i) {
        check_row(boundary[i], i, tol);
    }

    DiscreteKernel k;
    k.boundary_ = std::move(boundary);
    k.band_ = TailBand{g, increments.size() - 1 - g};
    k.increments_ = std::move(increments);
    return k;
}

DiscreteKernel DiscreteKernel::banded(std::vector<Row> boundary, TailBand band,
                                      RowGenerator tail, const Tolerances& tol) {
    if (!tail) {
        throw InvalidArgument("banded kernel needs a tail generator");
    }
    if (boundary.size() < band.g) {
        throw InvalidArgument("banded kernel needs at least g explicit boundary rows");
    }
    for (std::size_t i = 0; i < boundary.size(); ++i) {
        check_row(boundary[i], i, tol);
    }
    DiscreteKernel k;
    k.boundary_ = std::move(boundary);
    k.band_ = band;
    k.tail_ = std::move(tail);
    return k;
}

Row DiscreteKernel::row(StateIndex i) const {
    if (i < boundary_.size()) {
        return boundary_[i];
    }
    if (increments_) {
        Row r;
        r.reserve(increments_->size());
        for (std::size_t idx = 0; idx < increments_->size(); ++idx) {
            if ((*increments_)[idx] > 0.0) {
                r.push_back({i + idx - band_.g, (*increments_)[idx]});
            }
        }
        return r;
    }
    return tail_(i);
}

double DiscreteKernel::entry(StateIndex i, StateIndex j) const {
    double p = 0.0;
    for (const auto& e : row(i)) {
        if (e.col == j) p += e.p;
    }
    return p;
}

std::span<const double> DiscreteKernel::increments() const {
    if (!increments_) {
        throw InvalidArgument("kernel tail is not homogeneous");
    }
    return *increments_;
}

void DiscreteKernel::check_rows(std::size_t rows, const Tolerances& tol) const {
    for (StateIndex i = 0; i < rows; ++i) {
        const Row r = row(i);
        check_row(r, i, tol);
        if (i >= boundary_.size()) {
            for (const auto& e : r) {
                if (e.col + band_.g < i || e.col > i + band_.d) {
                    throw InvalidArgument("row " + std::to_string(i) +
                                          " leaves its declared band");
                }
            }
        }
    }
}

WeightSequence WeightSequence::geometric(double gamma) {
    if (!(gamma > 1.0) || !std::isfinite(gamma)) {
        throw InvalidArgument("geometric weight needs gamma > 1");
    }
    WeightSequence w;
    w.kind_ = Kind::geometric;
    w.gamma_ = gamma;
    w.log_gamma_ = std::log(gamma);
    return w;
}

WeightSequence WeightSequence::tabulated(std::vector<double> values) {
    if (values.empty() || values.front() != 1.0) {
        throw InvalidArgument("tabulated weight must start with V(0) = 1");
    }
    for (std::size_t j = 1; j < values.size(); ++j) {
        if (!(values[j] > values[j - 1])) {
            throw InvalidArgument("tabulated weight must be strictly increasing");
        }
    }
    WeightSequence w;
    w.kind_ = Kind::tabulated;
    w.table_ = std::move(values);
    return w;
}

double WeightSequence::gamma() const {
    if (kind_ != Kind::geometric) {
        throw InvalidArgument("gamma() requested on a tabulated weight");
    }
    return gamma_;
}

double WeightSequence::value(StateIndex j) const {
    if (kind_ == Kind::geometric) {
        return std::exp(static_cast<double>(j) * log_gamma_);
    }
    if (j >= table_.size()) {
        throw InvalidArgument("weight index " + std::to_string(j) + " beyond table");
    }
    return table_[j];
}

double WeightSequence::log_value(StateIndex j) const {
    if (kind_ == Kind::geometric) {
        return static_cast<double>(j) * log_gamma_;
    }
    return std::log(value(j));
}

double WeightSequence::ratio(StateIndex j, StateIndex i) const {
    if (kind_ == Kind::geometric) {
        return std::exp((static_cast<double>(j) - static_cast<double>(i)) * log_gamma_);
    }
    return value(j) / value(i);
}

std::vector<double> WeightSequence::prefix(std::size_t n) const {
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = value(j);
    return out;
}

std::optional<std::size_t> WeightSequence::table_size() const {
    if (kind_ == Kind::geometric) return std::nullopt;
    return table_.size();
}

double apply_to_weight(const DiscreteKernel& kernel, const WeightSequence& V,
                       StateIndex i) {
    double sum = 0.0;
    for (const auto& e : kernel.row(i)) {
        sum += e.p * V.value(e.col);
    }
    return sum;
}

DriftCertificate verify_drift(const DiscreteKernel& kernel, const WeightSequence& V,
                              double delta, double L, std::size_t rows,
                              const DriftOptions& opts) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw InvalidArgument("drift requires 0 < delta < 1");
    }
    if (!(L > 0.0)) {
        throw InvalidArgument("drift requires L > 0");
    }

    const bool analytic =
        kernel.homogeneous_tail() && V.kind() == WeightSequence::Kind::geometric;
    if (!analytic && (rows == 0 || !opts.allow_numeric_tail)) {
        throw TailUnverifiable("no analytic tail: kernel tail is not homogeneous or V is not geometric");
    }

    const std::size_t numeric_rows =
        analytic ? std::max(rows, kernel.boundary_rows()) : rows;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (StateIndex i = 0; i < numeric_rows; ++i) {
        const double pv = apply_to_weight(kernel, V, i);
        const double rhs = delta * V.value(i) + L;
        // Rounding allowance proportional to the magnitudes being compared.
        const double slack = opts.tol.drift_slack + 8.0 * eps * (pv + rhs);
        if (pv > rhs + slack) {
            throw DriftViolation(i, pv - rhs);
        }
    }

    if (analytic) {
        const double tail_ratio =
            laurent_eval(kernel.increments(), kernel.band().g, V.gamma());
        if (tail_ratio > delta) {
            // (tail_ratio - delta) V(i) > L + slack first happens at this row.
            const double bound = (L + opts.tol.drift_slack) / (tail_ratio - delta);
            const double x = std::log(bound) / std::log(V.gamma());
            StateIndex i = kernel.boundary_rows();
            if (x >= static_cast<double>(i)) {
                i = static_cast<StateIndex>(std::floor(x)) + 1;
            }
            throw DriftViolation(i, (tail_ratio - delta) * V.value(i) - L);
        }
    }

    return DriftCertificate{delta, L, numeric_rows, analytic};
}

double weighted_operator_norm(const Eigen::MatrixXd& M, const WeightSequence& V) {
    const auto n = static_cast<std::size_t>(M.rows());
    std::vector<double> logv(static_cast<std::size_t>(std::max(M.rows(), M.cols())));
    for (std::size_t j = 0; j < logv.size(); ++j) logv[j] = V.log_value(j);

    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < static_cast<std::size_t>(M.cols()); ++j) {
            const double m = M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            if (m != 0.0) s += std::abs(m) * std::exp(logv[j] - logv[i]);
        }
        best = std::max(best, s);
    }
    return best;
}

}  // namespace ergocert
