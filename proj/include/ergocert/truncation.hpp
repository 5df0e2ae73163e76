#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "ergocert/kernel.hpp"

namespace ergocert {

/**
 * (k+1)x(k+1) northwest corner of P with the mass of columns >= k lumped
 * into column k, so every row stays stochastic.
 */
struct FiniteTruncation {
    std::size_t k = 0;
    std::vector<Row> rows;      ///< sparse rows, columns in 0..k, sorted, column k holds the lump
    std::vector<double> lump;   ///< sum_{j>=k} P(i,j)

    std::size_t size() const noexcept { return k + 1; }
    Eigen::MatrixXd dense() const;
};

FiniteTruncation truncate(const DiscreteKernel& kernel, std::size_t k);

/// K / V(k), the certified bound on the truncation error in the weak norm.
double delta_bound(std::size_t k, double K_const, const WeightSequence& V);

/// Exact weak-norm distance: max(max_{i<=k} 2 sum_{j>k} P(i,j)/V(i), 1/V(k+1)).
double delta_exact(const DiscreteKernel& kernel, std::size_t k, const WeightSequence& V);

/// Dense CSV dump, one matrix row per line, %.17g.
void write_truncation_csv(const FiniteTruncation& t, std::ostream& out);

}  // namespace ergocert
