#pragma once

namespace ergocert {

/**
 * Numerical slack used wherever exact arithmetic would be assumed.
 *
 * Passed by value into every checking routine; there is no process-wide
 * mutable instance.
 */
struct Tolerances {
    double row_sum = 1e-12;          ///< |sum_j P(i,j) - 1|
    double drift_slack = 1e-10;      ///< (PV)(i) <= delta V(i) + L + slack
    double unit_eigenvalue = 1e-8;   ///< |lambda - 1| identifying the Perron eigenvalue
    double peripheral = 1e-10;       ///< other eigenvalues must satisfy |lambda| < 1 - peripheral
    double stationary_residual = 1e-12;  ///< ||pi P - pi||_inf
};

}  // namespace ergocert
