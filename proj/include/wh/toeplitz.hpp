#ifndef WH_TOEPLITZ_HPP
#define WH_TOEPLITZ_HPP

#include <Eigen/Cholesky>

#include <cmath>
#include <string>

#include "wh/common.hpp"
#include "wh/covariance.hpp"
#include "wh/factorization.hpp"
#include "wh/series.hpp"

// Finite and truncated Toeplitz machinery: the dense oracle solver, rows of
// the semi-infinite inverse, the inverse autocovariance, the finite-matrix
// inverse through multistep finite predictors, and the identity
// T(f)^{-1} = sigma^{-2} T(phi) T(phi)*.
//
// The dense paths factor with a Cholesky decomposition on purpose: the oracle
// must stay algorithmically independent of the Levinson recursion used by the
// factorization module.

namespace wh {

template <typename Scalar>
struct ToeplitzSpec {
    CovarianceSequence<Scalar> cov;
    Index n = 0;

    ToeplitzSpec(CovarianceSequence<Scalar> c, Index dim) : cov(std::move(c)), n(dim) {
        if (n < 1) throw DomainError("ToeplitzSpec: dimension must be >= 1");
    }
};

template <typename Scalar>
MatX<Scalar> dense_matrix(const ToeplitzSpec<Scalar>& spec) {
    MatX<Scalar> T(spec.n, spec.n);
    for (Index s = 0; s < spec.n; ++s)
        for (Index t = 0; t < spec.n; ++t) T(s, t) = spec.cov.at(s - t);
    return T;
}

namespace detail {

template <typename Scalar>
Eigen::LLT<MatX<Scalar>> factor_spd(const ToeplitzSpec<Scalar>& spec) {
    Eigen::LLT<MatX<Scalar>> llt(dense_matrix(spec));
    if (llt.info() != Eigen::Success)
        throw NonPositiveDefiniteError(
            "Toeplitz matrix of dimension " + std::to_string(spec.n) +
            " is not positive definite (Cholesky failed)");
    return llt;
}

template <typename Scalar>
Scalar condition_estimate(const Eigen::LLT<MatX<Scalar>>& llt) {
    const auto d = llt.matrixLLT().diagonal();
    const Scalar lo = d.minCoeff(), hi = d.maxCoeff();
    return (hi / lo) * (hi / lo);
}

}  // namespace detail

template <typename Scalar>
struct ToeplitzSolveResult {
    CausalSeq<Scalar> h;
    Scalar condition_estimate = 0;
};

/// Dense truncated solve of T_n(f) h = g by Cholesky factorization.
/// This is the brute-force oracle the analytic solvers are checked against.
template <typename Scalar>
ToeplitzSolveResult<Scalar> toeplitz_solve_truncated(const ToeplitzSpec<Scalar>& spec,
                                                     const CausalSeq<Scalar>& g) {
    if (g.size() > spec.n)
        throw DomainError("toeplitz_solve_truncated: len(g) exceeds truncation dimension");
    auto llt = detail::factor_spd(spec);
    VecX<Scalar> rhs = VecX<Scalar>::Zero(spec.n);
    rhs.head(g.size()) = g;
    ToeplitzSolveResult<Scalar> out;
    out.h = llt.solve(rhs);
    out.condition_estimate = detail::condition_estimate(llt);
    return out;
}

template <typename Scalar>
MatX<Scalar> dense_inverse(const ToeplitzSpec<Scalar>& spec) {
    auto llt = detail::factor_spd(spec);
    return llt.solve(MatX<Scalar>::Identity(spec.n, spec.n));
}

/// kth row of the semi-infinite inverse,
///   D_k(w) = sigma^{-2} phi(w) (e^{ikw} - sum_{s=1}^{k} phi_s e^{i(k-s)w}),
/// by exact coefficient convolution.
template <typename Scalar>
struct InverseRow {
    Index k = 0;
    VecX<Scalar> values;  ///< d_{k,j}, j = 0..out_len-1
};

template <typename Scalar>
InverseRow<Scalar> inverse_row(const WoldFactorization<Scalar>& w, Index k, Index out_len) {
    if (k < 0) throw DomainError("inverse_row: row index must be >= 0");
    VecX<Scalar> v = VecX<Scalar>::Zero(k + 1);
    v[k] = Scalar(1);
    const Index smax = std::min<Index>(k, w.phi.size());
    for (Index s = 1; s <= smax; ++s) v[k - s] = -w.phi[s - 1];
    VecX<Scalar> d = convolve(w.ar_polynomial(), v);
    d /= w.sigma2;
    InverseRow<Scalar> out;
    out.k = k;
    out.values = VecX<Scalar>::Zero(out_len);
    const Index m = std::min(out_len, d.size());
    out.values.head(m) = d.head(m);
    return out;
}

/// Inverse autocovariance gamma(k), the Fourier coefficients of 1/f:
/// gamma(k) = sigma^{-2} sum_s phit_s phit_{s+|k|} with phit = (1, -phi_1, ...).
template <typename Scalar>
struct InverseACF {
    VecX<Scalar> gamma;  ///< gamma(0..max_lag)

    Scalar at(Index k) const {
        k = k < 0 ? -k : k;
        return k < gamma.size() ? gamma[k] : Scalar(0);
    }
};

template <typename Scalar>
InverseACF<Scalar> inverse_acf(const WoldFactorization<Scalar>& w, Index max_lag) {
    InverseACF<Scalar> out;
    out.gamma = correlate(w.ar_polynomial(), max_lag);
    out.gamma /= w.sigma2;
    return out;
}

template <typename Scalar>
struct FiniteInverseOptions {
    Index window = 0;        ///< 0 = min(4 * truncation_length, L_c) beyond each edge
    Scalar tail_tol = Scalar(1e-8);
};

/// Entries of the finite inverse T_n(f)^{-1} through multistep finite
/// predictors:  d_{k,j}^{(n)} = sum_l beta_k(l) gamma(j - l), where beta(l)
/// solves T_n beta = (c(l - u))_u, the projection of X_l onto X_0..X_{n-1}.
/// The l-sum runs over l in [-M, n-1+M]; beta(l) vanishes exactly once |l|
/// leaves the covariance support, so M is capped by L_c.  The reported tail
/// is the change when the window is halved.
template <typename Scalar>
class FiniteToeplitzInverse {
public:
    FiniteToeplitzInverse(const ToeplitzSpec<Scalar>& spec,
                          const WoldFactorization<Scalar>& w,
                          const FiniteInverseOptions<Scalar>& opt = {})
        : n_(spec.n), tail_tol_(opt.tail_tol) {
        const Index requested =
            opt.window > 0 ? opt.window : 4 * w.truncation_length();
        margin_ = std::min<Index>(requested, spec.cov.max_lag());
        auto llt = detail::factor_spd(spec);
        gamma_ = inverse_acf(w, n_ - 1 + 2 * margin_ + 1);
        const Index rows = n_ + 2 * margin_;
        beta_ = MatX<Scalar>::Zero(rows, n_);
        VecX<Scalar> rhs(n_);
        for (Index r = 0; r < rows; ++r) {
            const Index l = r - margin_;  // predicted index
            if (l >= 0 && l < n_) {
                beta_(r, l) = Scalar(1);  // in-window target: projection is exact
                continue;
            }
            for (Index u = 0; u < n_; ++u) rhs[u] = spec.cov.at(l - u);
            beta_.row(r) = llt.solve(rhs).transpose();
        }
    }

    Index dim() const { return n_; }
    Index margin() const { return margin_; }

    Scalar entry(Index k, Index j) const {
        Scalar tail = 0;
        return entry_with_tail(k, j, tail);
    }

    /// Value of d_{k,j}^{(n)}; throws TruncationError when halving the window
    /// moves the value by more than tail_tol.
    Scalar entry_checked(Index k, Index j) const {
        Scalar tail = 0;
        const Scalar v = entry_with_tail(k, j, tail);
        if (!(tail <= tail_tol_))
            throw TruncationError(
                "finite inverse entry: window tail " + std::to_string(tail) +
                    " above tolerance; widen the summation window",
                static_cast<double>(tail));
        return v;
    }

    MatX<Scalar> full() const {
        MatX<Scalar> D(n_, n_);
        for (Index k = 0; k < n_; ++k)
            for (Index j = 0; j < n_; ++j) D(k, j) = entry(k, j);
        return D;
    }

private:
    Scalar entry_with_tail(Index k, Index j, Scalar& tail) const {
        if (k < 0 || k >= n_ || j < 0 || j >= n_)
            throw DomainError("finite inverse entry: indices must lie in [0, n)");
        Scalar full = 0, inner = 0;
        const Index half = margin_ / 2;
        for (Index r = 0; r < beta_.rows(); ++r) {
            const Index l = r - margin_;
            const Scalar term = beta_(r, k) * gamma_.at(j - l);
            full += term;
            if (l >= -half && l <= n_ - 1 + half) inner += term;
        }
        tail = std::abs(full - inner);
        return full;
    }

    Index n_ = 0;
    Index margin_ = 0;
    Scalar tail_tol_ = 0;
    InverseACF<Scalar> gamma_;
    MatX<Scalar> beta_;  ///< beta_(r, s): coefficient of X_s predicting X_{r - margin}
};

/// Convenience single-entry form of the class above.
template <typename Scalar>
Scalar finite_inverse_entry(const ToeplitzSpec<Scalar>& spec,
                            const WoldFactorization<Scalar>& w, Index k, Index j,
                            const FiniteInverseOptions<Scalar>& opt = {}) {
    return FiniteToeplitzInverse<Scalar>(spec, w, opt).entry_checked(k, j);
}

/// Max-norm gap between T_n(f)^{-1} and sigma^{-2} L L^T on the interior block
/// [band, n - band), where L is the lower-triangular Toeplitz matrix of
/// (1, -phi_1, ...).  band < 0 selects the factorization truncation length.
template <typename Scalar>
Scalar cholesky_identity_residual(const ToeplitzSpec<Scalar>& spec,
                                  const WoldFactorization<Scalar>& w, Index band = -1) {
    const Index n = spec.n;
    const Index b = band >= 0 ? band : w.truncation_length();
    if (2 * b >= n)
        throw DomainError("cholesky_identity_residual: interior block is empty; "
                          "need n > 2 * band");
    MatX<Scalar> Tinv = dense_inverse(spec);
    const VecX<Scalar> arp = w.ar_polynomial();
    MatX<Scalar> L = MatX<Scalar>::Zero(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = std::max<Index>(0, i - arp.size() + 1); j <= i; ++j)
            L(i, j) = arp[i - j];
    MatX<Scalar> A = (L * L.transpose()) / w.sigma2;
    const Index m = n - 2 * b;
    return (Tinv.block(b, b, m, m) - A.block(b, b, m, m)).cwiseAbs().maxCoeff();
}

}  // namespace wh

#endif  // WH_TOEPLITZ_HPP
