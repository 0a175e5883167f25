#pragma once

#include <Eigen/Core>

#include <complex>

namespace mgrit {

using complex = std::complex<double>;
using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Real part of a complex value when Scalar is real; identity otherwise.
template <typename Scalar>
Scalar from_complex(complex z)
{
    if constexpr (Eigen::NumTraits<Scalar>::IsComplex)
        return z;
    else
        return z.real();
}

// x^n by binary exponentiation.
template <typename Scalar>
Scalar ipow(Scalar x, long n)
{
    Scalar result(1);
    while (n > 0) {
        if (n & 1) result *= x;
        x *= x;
        n >>= 1;
    }
    return result;
}

} // namespace mgrit
