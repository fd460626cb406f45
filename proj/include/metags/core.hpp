#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace metags {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// malformed input: bad ids, shapes, non-Hermitian terms, broken files
struct InvalidInput : Error {
    using Error::Error;
};
// a documented precondition of an operation does not hold
struct PreconditionError : Error {
    using Error::Error;
};
// dense dimension or time budget exceeded
struct BudgetExceeded : Error {
    using Error::Error;
};
struct NumericalError : Error {
    using Error::Error;
};

inline std::size_t ipow(std::size_t base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

} // namespace metags
