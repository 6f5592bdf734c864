#ifndef WH_COVARIANCE_HPP
#define WH_COVARIANCE_HPP

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>
#include <string>

#include "wh/common.hpp"
#include "wh/series.hpp"

// Symmetric positive-definite covariance sequences c(r) and their spectral
// densities f(w) = sum_r c(r) e^{irw}.  The sequence is stored one-sided,
// c(-r) = c(r) implied; lags beyond the truncation length read as zero.

namespace wh {

template <typename Scalar>
struct CovarianceSequence {
    /// c(0), c(1), ..., c(L_c)
    VecX<Scalar> values;

    CovarianceSequence() = default;
    explicit CovarianceSequence(VecX<Scalar> v) : values(std::move(v)) {
        if (values.size() == 0 || !(values[0] > Scalar(0)))
            throw DomainError("CovarianceSequence: c(0) must be positive");
        for (Index r = 1; r < values.size(); ++r) {
            if (std::abs(values[r]) > values[0])
                throw DomainError("CovarianceSequence: |c(" + std::to_string(r) +
                                  ")| exceeds c(0)");
        }
    }

    Index max_lag() const { return values.size() - 1; }

    Scalar at(Index r) const {
        r = r < 0 ? -r : r;
        return r < values.size() ? values[r] : Scalar(0);
    }
};

template <typename Scalar>
struct DensitySamples {
    SpectralGrid<Scalar> grid;
    VecX<Scalar> values;
    Scalar min = 0;
    Scalar max = 0;
};

/// f(w_k) = c(0) + 2 sum_{r>=1} c(r) cos(r w_k) on an n_grid-point grid.
/// Throws if any sample is non-positive, naming the offending frequency.
template <typename Scalar>
DensitySamples<Scalar> eval_spectral_density(const CovarianceSequence<Scalar>& cov,
                                             Index n_grid) {
    if (n_grid < 2 * cov.max_lag() + 2)
        throw DomainError("eval_spectral_density: n_grid must be >= 2*L_c + 2");
    SpectralGrid<Scalar> grid(n_grid);
    CVecX<Scalar> causal = evaluate_causal(cov.values, grid);
    DensitySamples<Scalar> out;
    out.grid = grid;
    out.values = (Scalar(2) * causal.real().array() - cov.values[0]).matrix();
    out.min = out.values.minCoeff();
    out.max = out.values.maxCoeff();
    if (!(out.min > Scalar(0))) {
        Index k_bad = 0;
        out.values.minCoeff(&k_bad);
        char msg[160];
        std::snprintf(msg, sizeof(msg),
                      "spectral density not positive: f(omega_%lld = %.6g) = %.6g",
                      static_cast<long long>(k_bad),
                      static_cast<double>(grid.omega(k_bad)),
                      static_cast<double>(out.values[k_bad]));
        throw NonPositiveDefiniteError(msg);
    }
    return out;
}

/// Autocovariance of the finite MA kernel: c(r) = sigma2 * sum_j psi_j psi_{j+r}.
template <typename Scalar>
CovarianceSequence<Scalar> acf_from_ma_kernel(const VecX<Scalar>& psi, Scalar sigma2,
                                              Index max_lag) {
    if (!(sigma2 > Scalar(0)))
        throw DomainError("acf_from_ma_kernel: sigma2 must be positive");
    if (psi.size() == 0 || psi[0] != Scalar(1))
        throw DomainError("acf_from_ma_kernel: psi_0 must be 1");
    VecX<Scalar> c = correlate(psi, max_lag);
    c *= sigma2;
    return CovarianceSequence<Scalar>(std::move(c));
}

namespace detail {

/// Largest root modulus of the companion matrix of 1 - sum a_j z^j must be < 1.
template <typename Scalar>
bool ar_polynomial_is_causal(const VecX<Scalar>& ar) {
    Index p = ar.size();
    while (p > 0 && ar[p - 1] == Scalar(0)) --p;
    if (p == 0) return true;
    MatX<Scalar> companion = MatX<Scalar>::Zero(p, p);
    companion.row(0) = ar.head(p).transpose();
    if (p > 1) companion.block(1, 0, p - 1, p - 1).diagonal().setOnes();
    Eigen::EigenSolver<MatX<Scalar>> eig(companion, /*computeEigenvectors=*/false);
    return eig.eigenvalues().cwiseAbs().maxCoeff() < Scalar(1);
}

/// MA(inf) expansion psi = (1 + sum b_j z^j) / (1 - sum a_j z^j).
template <typename Scalar>
VecX<Scalar> arma_ma_expansion(const VecX<Scalar>& ar, const VecX<Scalar>& ma, Index len) {
    VecX<Scalar> psi = VecX<Scalar>::Zero(len);
    psi[0] = Scalar(1);
    for (Index j = 1; j < len; ++j) {
        Scalar v = j <= ma.size() ? ma[j - 1] : Scalar(0);
        const Index imax = std::min<Index>(j, ar.size());
        for (Index i = 1; i <= imax; ++i) v += ar[i - 1] * psi[j - i];
        psi[j] = v;
    }
    return psi;
}

}  // namespace detail

/// Autocovariance of the causal ARMA model
///   X_t = sum_i ar_i X_{t-i} + e_t + sum_j ma_j e_{t-j},  var(e_t) = sigma2,
/// computed by expanding the MA(inf) kernel until its tail is negligible.
template <typename Scalar>
CovarianceSequence<Scalar> acf_from_arma(const VecX<Scalar>& ar, const VecX<Scalar>& ma,
                                         Scalar sigma2, Index max_lag) {
    if (!(sigma2 > Scalar(0)))
        throw DomainError("acf_from_arma: sigma2 must be positive");
    if (!detail::ar_polynomial_is_causal(ar))
        throw DomainError("acf_from_arma: AR polynomial has a root inside the "
                          "closed unit disk (non-causal)");

    const Scalar tail_tol = Scalar(1e-15);
    Index len = std::max<Index>(max_lag + 1, 64);
    const Index len_cap = 1 << 20;
    VecX<Scalar> psi;
    for (;;) {
        psi = detail::arma_ma_expansion(ar, ma, len + 1);
        const Scalar scale = psi.cwiseAbs().maxCoeff();
        if (psi.tail(16).cwiseAbs().maxCoeff() <= tail_tol * scale || len >= len_cap)
            break;
        len *= 2;
    }
    return acf_from_ma_kernel(psi, sigma2, max_lag);
}

}  // namespace wh

#endif  // WH_COVARIANCE_HPP
