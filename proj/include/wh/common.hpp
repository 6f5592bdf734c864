#ifndef WH_COMMON_HPP
#define WH_COMMON_HPP

#include <Eigen/Core>

#include <complex>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace wh {

using Index = Eigen::Index;

template <typename Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using CVecX = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// A one-sided square-summable coefficient sequence, indexed j = 0..L.
template <typename Scalar>
using CausalSeq = VecX<Scalar>;

/// Invalid input: violated precondition, non-positive-definite model, ...
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

class NonPositiveDefiniteError : public DomainError {
public:
    explicit NonPositiveDefiniteError(const std::string& what) : DomainError(what) {}
};

/// Spectral factorization did not reproduce the density to the requested accuracy.
class FactorizationError : public DomainError {
public:
    FactorizationError(const std::string& what, double residual)
        : DomainError(what), residual(residual) {}
    double residual;
};

/// Two routes to the same quantity disagreed beyond tolerance, or a truncated
/// sum left a tail above tolerance.
class NumericalConsistencyError : public std::runtime_error {
public:
    explicit NumericalConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

class TruncationError : public NumericalConsistencyError {
public:
    TruncationError(const std::string& what, double tail)
        : NumericalConsistencyError(what), tail(tail) {}
    double tail;
};

namespace detail {

template <typename Scalar>
constexpr void static_assert_real_scalar() {
    static_assert(std::is_floating_point_v<Scalar>,
                  "wh expects a real floating-point scalar type");
}

}  // namespace detail

}  // namespace wh

#endif  // WH_COMMON_HPP
