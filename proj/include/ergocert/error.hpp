#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ergocert {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A configuration or argument outside the documented domain.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Row `row` of the kernel violates PV <= delta V + L by `excess`.
class DriftViolation : public Error {
public:
    DriftViolation(std::size_t row, double excess);
    std::size_t row() const noexcept { return row_; }
    double excess() const noexcept { return excess_; }

private:
    std::size_t row_;
    double excess_;
};

/// No analytic tail argument exists and the numeric check cannot conclude.
class TailUnverifiable : public Error {
public:
    using Error::Error;
};

/// min over gamma > 1 of the increment generating function is not below 1.
class NoContraction : public Error {
public:
    using Error::Error;
};

/// Multiple recurrent classes or a periodic recurrent class.
class NotErgodic : public Error {
public:
    using Error::Error;
};

/// Eigenvalue 1 is not simple, or another eigenvalue lies on the unit circle.
class PeripheralSpectrum : public Error {
public:
    using Error::Error;
};

/// No power n <= s_cap contracts below rho_k^n.
class SCapExceeded : public Error {
public:
    using Error::Error;
};

/// (r, vartheta) outside the admissible window.
class InvalidWindow : public Error {
public:
    using Error::Error;
};

/// Rate-based TV bound requested below n_K.
class BelowNK : public Error {
public:
    using Error::Error;
};

/// n(eps) search exceeded its cap.
class NotReached : public Error {
public:
    using Error::Error;
};

/// Certification loop passed k_cap without meeting the k >= k1 gate.
class Exhausted : public Error {
public:
    using Error::Error;
};

/// A certified bound fell below the oracle measurement.
class SoundnessViolation : public Error {
public:
    using Error::Error;
};

}  // namespace ergocert
