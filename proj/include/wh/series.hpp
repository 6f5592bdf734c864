#ifndef WH_SERIES_HPP
#define WH_SERIES_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "wh/common.hpp"

// Coefficient-sequence utilities and uniform frequency grids.
//
// A causal sequence (a_0, a_1, ...) stands for the power series
// A(w) = sum_j a_j e^{ijw}.  All coefficient operations here are exact linear
// convolutions; the grid is only used to *sample* transfer functions, never to
// manipulate coefficients.

namespace wh {

/// Full linear convolution, length a.size() + b.size() - 1.
template <typename Scalar>
VecX<Scalar> convolve(const VecX<Scalar>& a, const VecX<Scalar>& b) {
    if (a.size() == 0 || b.size() == 0) return VecX<Scalar>();
    VecX<Scalar> out = VecX<Scalar>::Zero(a.size() + b.size() - 1);
    for (Index i = 0; i < a.size(); ++i) {
        out.segment(i, b.size()) += a[i] * b;
    }
    return out;
}

/// Lagged self-products c_r = sum_j a_j a_{j+r}, r = 0..max_lag.
template <typename Scalar>
VecX<Scalar> correlate(const VecX<Scalar>& a, Index max_lag) {
    VecX<Scalar> out = VecX<Scalar>::Zero(max_lag + 1);
    for (Index r = 0; r <= max_lag; ++r) {
        const Index n = a.size() - r;
        if (n > 0) out[r] = a.head(n).dot(a.segment(r, n));
    }
    return out;
}

/// Reciprocal power series: b with (a * b) = (1, 0, ..., 0) over out_len terms.
/// Requires a_0 = 1; the recursion is then exact long division.
template <typename Scalar>
VecX<Scalar> invert_power_series(const VecX<Scalar>& a, Index out_len) {
    detail::static_assert_real_scalar<Scalar>();
    if (a.size() == 0 || a[0] != Scalar(1))
        throw DomainError("invert_power_series: leading coefficient must be 1");
    VecX<Scalar> b = VecX<Scalar>::Zero(out_len);
    if (out_len == 0) return b;
    b[0] = Scalar(1);
    for (Index n = 1; n < out_len; ++n) {
        Scalar acc = 0;
        const Index kmax = std::min<Index>(n, a.size() - 1);
        for (Index k = 1; k <= kmax; ++k) acc += a[k] * b[n - k];
        b[n] = -acc;
    }
    return b;
}

/// Uniform frequency grid w_k = 2*pi*k/n, k = 0..n-1, with n a power of two.
template <typename Scalar>
struct SpectralGrid {
    Index n = 0;

    SpectralGrid() = default;
    explicit SpectralGrid(Index n_grid) : n(n_grid) {
        if (n < 2 || (n & (n - 1)) != 0)
            throw DomainError("SpectralGrid: size must be a power of two >= 2, got " +
                              std::to_string(n));
    }

    Scalar omega(Index k) const {
        return Scalar(2) * std::numbers::pi_v<Scalar> * Scalar(k) / Scalar(n);
    }

    CVecX<Scalar> unit_circle() const {
        CVecX<Scalar> z(n);
        for (Index k = 0; k < n; ++k)
            z[k] = std::polar(Scalar(1), omega(k));
        return z;
    }

    /// Smallest admissible power of two resolving sequences up to `longest`
    /// coefficients (oversampled 8x to keep circular aliasing negligible).
    static Index auto_size(Index longest) {
        Index want = std::max<Index>(Index(16), 8 * longest);
        Index n = 16;
        while (n < want) n *= 2;
        return n;
    }
};

/// Samples of the causal transfer function A(w_k) = sum_j a_j e^{ijw_k}.
/// Horner evaluation in e^{iw}; sequential, hence bit-reproducible.
template <typename Scalar>
CVecX<Scalar> evaluate_causal(const VecX<Scalar>& coeffs, const SpectralGrid<Scalar>& grid) {
    using C = std::complex<Scalar>;
    Eigen::Array<C, Eigen::Dynamic, 1> z = grid.unit_circle().array();
    Eigen::Array<C, Eigen::Dynamic, 1> acc =
        Eigen::Array<C, Eigen::Dynamic, 1>::Zero(grid.n);
    for (Index j = coeffs.size() - 1; j >= 0; --j) {
        acc = acc * z + C(coeffs[j], 0);
    }
    return acc.matrix();
}

/// Coefficients a_j = n^{-1} sum_k A(w_k) e^{-ijw_k}, j = 0..out_len-1 (real part).
/// This is the grid inverse transform; it carries the usual wrap-around of
/// whatever mass A has beyond index n.
template <typename Scalar>
VecX<Scalar> inverse_transform_causal(const CVecX<Scalar>& samples,
                                      const SpectralGrid<Scalar>& grid,
                                      Index out_len) {
    using C = std::complex<Scalar>;
    VecX<Scalar> out(out_len);
    const Eigen::Array<C, Eigen::Dynamic, 1> samp = samples.array();
    Eigen::Array<C, Eigen::Dynamic, 1> zbar(grid.n);
    for (Index k = 0; k < grid.n; ++k)
        zbar[k] = std::polar(Scalar(1), -grid.omega(k));
    Eigen::Array<C, Eigen::Dynamic, 1> w =
        Eigen::Array<C, Eigen::Dynamic, 1>::Constant(grid.n, C(1, 0));
    for (Index j = 0; j < out_len; ++j) {
        out[j] = (samp * w).sum().real() / Scalar(grid.n);
        w *= zbar;
    }
    return out;
}

}  // namespace wh

#endif  // WH_SERIES_HPP
