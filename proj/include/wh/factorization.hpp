#ifndef WH_FACTORIZATION_HPP
#define WH_FACTORIZATION_HPP

#include <cmath>
#include <string>

#include "wh/common.hpp"
#include "wh/covariance.hpp"
#include "wh/series.hpp"

// Spectral factorization f(w) = sigma2 |psi(w)|^2 = sigma2 |phi(w)|^{-2} with
//   psi(w) = 1 + sum_{j>=1} psi_j e^{ijw},
//   phi(w) = 1 - sum_{j>=1} phi_j e^{ijw} = psi(w)^{-1},
// obtained from a high-order Yule-Walker fit.

namespace wh {

/// Best-fitting AR(p) model for a covariance sequence.
template <typename Scalar>
struct ARFit {
    Index p = 0;
    VecX<Scalar> coeffs;      ///< phi_{p,1} .. phi_{p,p}
    Scalar sigma2 = 0;        ///< innovation variance of the fit
    VecX<Scalar> reflection;  ///< partial autocorrelations kappa_1 .. kappa_p
    Scalar yw_residual = 0;   ///< relative residual of the normal equations
};

/// Levinson-Durbin recursion on the Yule-Walker equations
///   sum_j phi_{p,j} c(l-j) = c(l),  l = 1..p.
template <typename Scalar>
ARFit<Scalar> levinson_durbin(const CovarianceSequence<Scalar>& cov, Index p) {
    detail::static_assert_real_scalar<Scalar>();
    if (p < 0 || p > cov.max_lag())
        throw DomainError("levinson_durbin: order must satisfy 0 <= p <= L_c");

    ARFit<Scalar> fit;
    fit.p = p;
    fit.coeffs = VecX<Scalar>::Zero(p);
    fit.reflection = VecX<Scalar>::Zero(p);
    fit.sigma2 = cov.values[0];

    VecX<Scalar> prev(p);
    for (Index m = 1; m <= p; ++m) {
        Scalar acc = cov.values[m];
        for (Index j = 1; j < m; ++j) acc -= fit.coeffs[j - 1] * cov.values[m - j];
        const Scalar kappa = acc / fit.sigma2;
        if (!(std::abs(kappa) < Scalar(1)))
            throw NonPositiveDefiniteError(
                "levinson_durbin: |reflection| >= 1 at order " + std::to_string(m) +
                "; input sequence is not positive definite");
        prev.head(m - 1) = fit.coeffs.head(m - 1);
        for (Index j = 1; j < m; ++j)
            fit.coeffs[j - 1] = prev[j - 1] - kappa * prev[m - j - 1];
        fit.coeffs[m - 1] = kappa;
        fit.reflection[m - 1] = kappa;
        fit.sigma2 *= (Scalar(1) - kappa * kappa);
    }

    // residual of the normal equations, relative to c(0)
    Scalar res = 0;
    for (Index l = 1; l <= p; ++l) {
        Scalar lhs = 0;
        for (Index j = 1; j <= p; ++j) lhs += fit.coeffs[j - 1] * cov.at(l - j);
        res = std::max(res, std::abs(lhs - cov.values[l]));
    }
    fit.yw_residual = res / cov.values[0];
    return fit;
}

/// Truncated Wold factorization (sigma2, psi, phi).
template <typename Scalar>
struct WoldFactorization {
    Scalar sigma2 = 0;
    VecX<Scalar> psi;  ///< psi_0 = 1, psi_1, ..., psi_L
    VecX<Scalar> phi;  ///< phi_1, ..., phi_L
    Scalar factorization_residual = 0;  ///< max_k |sigma2 |psi|^2 - f| / f, when checked

    Index truncation_length() const { return phi.size(); }

    /// Coefficients of phi(w): (1, -phi_1, ..., -phi_L).
    VecX<Scalar> ar_polynomial() const {
        VecX<Scalar> a(phi.size() + 1);
        a[0] = Scalar(1);
        a.tail(phi.size()) = -phi;
        return a;
    }
};

/// Default truncation length for the "infinite" coefficient sequences.
inline Index default_series_length(Index cov_max_lag, Index order) {
    Index L = std::max<Index>(Index(64), 4 * cov_max_lag);
    return std::max(L, order);
}

/// Promote an AR(p) fit to a truncated Wold factorization:
/// phi := fitted coefficients (zero-padded), psi := phi(w)^{-1} power series.
/// No density check is performed; use wold_from_covariance for that.
template <typename Scalar>
WoldFactorization<Scalar> wold_from_ar_fit(const ARFit<Scalar>& fit, Index series_length) {
    if (series_length < fit.p)
        throw DomainError("wold_from_ar_fit: series_length must be >= fit order");
    WoldFactorization<Scalar> w;
    w.sigma2 = fit.sigma2;
    w.phi = VecX<Scalar>::Zero(series_length);
    w.phi.head(fit.p) = fit.coeffs;
    w.psi = invert_power_series(w.ar_polynomial(), series_length + 1);
    return w;
}

template <typename Scalar>
struct WoldOptions {
    Index series_length = 0;    ///< 0 = default_series_length(L_c, order)
    Index n_grid = 0;           ///< 0 = SpectralGrid::auto_size(series length)
    Scalar residual_tol = Scalar(1e-6);
};

/// Factor a validated covariance sequence through an AR(order) fit and power
/// series inversion.  The residual max_k |sigma2 |psi(w_k)|^2 - f(w_k)| / f(w_k)
/// is recorded on the result and must pass residual_tol; raising the order is
/// the only remedy when it does not.
template <typename Scalar>
WoldFactorization<Scalar> wold_from_covariance(const CovarianceSequence<Scalar>& cov,
                                               Index order,
                                               const WoldOptions<Scalar>& opt = {}) {
    const Index L = opt.series_length > 0 ? opt.series_length
                                          : default_series_length(cov.max_lag(), order);
    const Index n_grid = opt.n_grid > 0
                             ? opt.n_grid
                             : std::max(SpectralGrid<Scalar>::auto_size(L),
                                        SpectralGrid<Scalar>::auto_size(cov.max_lag() + 1));
    // positivity validation first: it names the offending frequency
    DensitySamples<Scalar> f = eval_spectral_density(cov, n_grid);

    ARFit<Scalar> fit = levinson_durbin(cov, order);
    WoldFactorization<Scalar> w = wold_from_ar_fit(fit, L);
    CVecX<Scalar> psi_w = evaluate_causal(w.psi, f.grid);
    Scalar res = 0;
    for (Index k = 0; k < n_grid; ++k) {
        const Scalar model = w.sigma2 * std::norm(psi_w[k]);
        res = std::max(res, std::abs(model - f.values[k]) / f.values[k]);
    }
    w.factorization_residual = res;
    if (!(res <= opt.residual_tol))
        throw FactorizationError(
            "wold_from_covariance: factorization residual " + std::to_string(res) +
                " exceeds tolerance; increase the AR order",
            static_cast<double>(res));
    return w;
}

}  // namespace wh

#endif  // WH_FACTORIZATION_HPP
