#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ergocert/tolerances.hpp"

namespace ergocert {

using StateIndex = std::size_t;

struct Entry {
    StateIndex col;
    double p;
};
using Row = std::vector<Entry>;

/// Maximal left/right jump of rows past the explicitly enumerated boundary.
struct TailBand {
    std::size_t g = 0;  ///< max left step
    std::size_t d = 0;  ///< max right step
};

/**
 * Infinite stochastic matrix on the nonnegative integers, represented lazily
 * by a row generator.
 *
 * Rows 0..boundary_rows-1 are stored explicitly. Rows i >= boundary_rows are
 * either produced by a homogeneous increment law a_{-g..d}
 * (P(i, i+m) = a_m) or by a caller-supplied generator that must respect the
 * declared band [i-g, i+d].
 */
class DiscreteKernel {
public:
    using RowGenerator = std::function<Row(StateIndex)>;

    /// Explicit boundary rows followed by the homogeneous increment law.
    /// `increments[m]` is a_{m-g}; requires boundary.size() >= g.
    static DiscreteKernel homogeneous(std::vector<Row> boundary, std::size_t g,
                                      std::vector<double> increments,
                                      const Tolerances& tol = {});

    /// Fully general kernel: explicit boundary plus a banded tail generator.
    static DiscreteKernel banded(std::vector<Row> boundary, TailBand band,
                                 RowGenerator tail, const Tolerances& tol = {});

    Row row(StateIndex i) const;

    /// P(i, j) by scanning row i.
    double entry(StateIndex i, StateIndex j) const;

    TailBand band() const noexcept { return band_; }
    std::size_t boundary_rows() const noexcept { return boundary_.size(); }
    bool homogeneous_tail() const noexcept { return increments_.has_value(); }

    /// a_{-g..d} when the tail is homogeneous.
    std::span<const double> increments() const;

    /// Check the stochasticity and band invariants on rows 0..rows-1.
    void check_rows(std::size_t rows, const Tolerances& tol = {}) const;

private:
    DiscreteKernel() = default;

    std::vector<Row> boundary_;
    TailBand band_;
    std::optional<std::vector<double>> increments_;
    RowGenerator tail_;
};

/**
 * Weight function V on the state space: V(0) = 1, strictly increasing and
 * unbounded. Geometric weights V(j) = gamma^j are evaluated through logs so
 * that ratios V(j)/V(i) stay finite for large indices.
 */
class WeightSequence {
public:
    enum class Kind { geometric, tabulated };

    static WeightSequence geometric(double gamma);
    /// Values beyond the table are not extrapolated; lookups past the end throw.
    static WeightSequence tabulated(std::vector<double> values);

    Kind kind() const noexcept { return kind_; }
    /// Growth factor of a geometric weight.
    double gamma() const;

    double value(StateIndex j) const;
    double log_value(StateIndex j) const;
    /// V(j) / V(i)
    double ratio(StateIndex j, StateIndex i) const;
    /// V(0..n-1)
    std::vector<double> prefix(std::size_t n) const;
    /// Number of tabulated entries; unbounded for geometric weights.
    std::optional<std::size_t> table_size() const;

private:
    WeightSequence() = default;

    Kind kind_ = Kind::geometric;
    double gamma_ = 2.0;
    double log_gamma_ = 0.0;
    std::vector<double> table_;
};

/// Verified drift inequality PV <= delta V + L 1.
struct DriftCertificate {
    double delta = 0.0;
    double L = 0.0;
    std::size_t rows_checked = 0;
    bool analytic_tail = false;
};

struct DriftOptions {
    /// When false, kernels without an analytic tail raise TailUnverifiable.
    bool allow_numeric_tail = true;
    Tolerances tol{};
};

/// sum_m a_m gamma^m over m = -g..d, with increments[idx] = a_{idx-g}.
double laurent_eval(std::span<const double> increments, std::size_t g, double gamma);

/// (PV)(i) = sum_j P(i,j) V(j).
double apply_to_weight(const DiscreteKernel& kernel, const WeightSequence& V,
                       StateIndex i);

/**
 * Check PV <= delta V + L on rows 0..rows-1 and, when V is geometric and the
 * tail homogeneous, on all tail rows at once through the constant ratio
 * (PV)(i)/V(i) = sum_m a_m gamma^m.
 */
DriftCertificate verify_drift(const DiscreteKernel& kernel,
                              const WeightSequence& V, double delta, double L,
                              std::size_t rows, const DriftOptions& opts = {});

/// max_i sum_j |M(i,j)| V(j)/V(i), the operator norm on sup |h(i)|/V(i).
double weighted_operator_norm(const Eigen::MatrixXd& M, const WeightSequence& V);

}  // namespace ergocert
