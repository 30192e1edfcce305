#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace lrdoa {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Invalid argument or precondition violation.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A denominator or matrix that must be invertible is not.
class SingularityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Counts complex multiply-accumulates in estimator inner loops.
struct OpCounter {
    std::uint64_t macs = 0;

    void add(std::uint64_t n) noexcept { macs += n; }
};

inline void count(OpCounter* ops, std::uint64_t n) noexcept
{
    if (ops != nullptr)
        ops->add(n);
}

inline double deg2rad(double deg) noexcept { return deg * kPi / 180.0; }
inline double rad2deg(double rad) noexcept { return rad * 180.0 / kPi; }

} // namespace lrdoa
