#ifndef WH_WIENER_HOPF_HPP
#define WH_WIENER_HOPF_HPP

#include <cmath>
#include <string>

#include "wh/common.hpp"
#include "wh/covariance.hpp"
#include "wh/factorization.hpp"
#include "wh/series.hpp"

// Solvers for the semi-infinite Toeplitz (Wiener-Hopf) system
//     g_l = sum_{j>=0} h_j c(l-j),   l >= 0,
// by the classical causal-part formula
//     H(w) = sigma^{-2} phi(w) [phi(w)* G_+(w)]_+
// and by the prediction form
//     H(w) = sigma^{-2} phi(w) sum_l g_l (e^{ilw} - sum_{s=1}^{l} phi_s e^{i(l-s)w}),
// plus the multistep prediction machinery both formulas rest on.
//
// Causal-part extraction is always done in the coefficient domain by exact
// linear convolution; the grid only ever samples finished transfer functions.
// The one exception is the deconvolution cross-check inside
// solve_wh_prediction, which divides by f(w) on the grid and inverse
// transforms; it must agree with the coefficient route to route_tol.

namespace wh {

/// A two-sided sequence split at zero: neg[i] is the value at index -(i+1),
/// pos[j] the value at index j.
template <typename Scalar>
struct BiSeq {
    VecX<Scalar> neg;
    CausalSeq<Scalar> pos;
};

template <typename Scalar>
CausalSeq<Scalar> causal_part(const BiSeq<Scalar>& seq) {
    return seq.pos;
}

template <typename Scalar>
VecX<Scalar> anticausal_part(const BiSeq<Scalar>& seq) {
    return seq.neg;
}

enum class Method { classical, prediction, oracle, ar_p };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::classical: return "classical";
        case Method::prediction: return "prediction";
        case Method::oracle: return "oracle";
        case Method::ar_p: return "ar_p";
    }
    return "?";
}

template <typename Scalar>
struct FilterSolution {
    CausalSeq<Scalar> h;
    CVecX<Scalar> H_grid;      ///< samples of H on the grid, the transform of h
    Method method = Method::classical;
    Scalar residual = std::numeric_limits<Scalar>::quiet_NaN();  ///< max normal-equation residual
    Scalar tail_energy = 0;    ///< sum |h_j| over the trailing 16 coefficients
    Scalar route_gap = 0;      ///< prediction only: coefficient vs grid route
};

template <typename Scalar>
struct ResidualReport {
    VecX<Scalar> residuals;  ///< r_l = g_l - sum_j h_j c(l-j), l = 0..check_len
    Scalar max_abs = 0;
};

/// Independent check of the normal equations; pure reporting.
template <typename Scalar>
ResidualReport<Scalar> verify_normal_equations(const CovarianceSequence<Scalar>& cov,
                                               const CausalSeq<Scalar>& h,
                                               const CausalSeq<Scalar>& g,
                                               Index check_len) {
    ResidualReport<Scalar> rep;
    rep.residuals = VecX<Scalar>::Zero(check_len + 1);
    for (Index l = 0; l <= check_len; ++l) {
        Scalar acc = l < g.size() ? g[l] : Scalar(0);
        const Index j_lo = std::max<Index>(0, l - cov.max_lag());
        const Index j_hi = std::min<Index>(h.size() - 1, l + cov.max_lag());
        for (Index j = j_lo; j <= j_hi; ++j) acc -= h[j] * cov.at(l - j);
        rep.residuals[l] = acc;
    }
    rep.max_abs = rep.residuals.cwiseAbs().maxCoeff();
    return rep;
}

/// l-step ahead prediction coefficients phi_j(l) = sum_{s=1}^{l} phi_{j+s} psi_{l-s}.
template <typename Scalar>
struct MultistepCoeffs {
    Index ell = 0;
    VecX<Scalar> values;  ///< phi_j(ell), j = 0..out_len-1
};

template <typename Scalar>
MultistepCoeffs<Scalar> multistep_coeffs(const WoldFactorization<Scalar>& w, Index ell,
                                         Index out_len) {
    if (ell < 1) throw DomainError("multistep_coeffs: horizon must be >= 1");
    MultistepCoeffs<Scalar> out;
    out.ell = ell;
    out.values = VecX<Scalar>::Zero(out_len);
    const Index L = w.phi.size();
    for (Index j = 0; j < out_len; ++j) {
        Scalar acc = 0;
        for (Index s = 1; s <= ell; ++s) {
            const Index pj = j + s;           // index into phi_1..phi_L
            const Index qj = ell - s;         // index into psi_0..psi_L
            if (pj <= L && qj < w.psi.size()) acc += w.phi[pj - 1] * w.psi[qj];
        }
        out.values[j] = acc;
    }
    return out;
}

/// Grid samples of the AR tail transform phi_l(w) = sum_{s>=1} phi_{l+s} e^{isw}.
template <typename Scalar>
CVecX<Scalar> phi_tail(const WoldFactorization<Scalar>& w, Index ell,
                       const SpectralGrid<Scalar>& grid) {
    const Index L = w.phi.size();
    const Index nterm = std::max<Index>(0, L - ell);  // s = 1..L-ell
    VecX<Scalar> coeffs = VecX<Scalar>::Zero(nterm + 1);
    for (Index s = 1; s <= nterm; ++s) coeffs[s] = w.phi[ell + s - 1];
    return evaluate_causal(coeffs, grid);
}

template <typename Scalar>
struct SolveOptions {
    Index h_len = 0;              ///< 0 = truncation length + len(g)
    Index residual_check_len = -1;  ///< -1 = len(g) + 20
    Scalar route_tol = Scalar(1e-8);  ///< prediction: max coefficient gap between routes
    bool cross_check_routes = true;   ///< prediction: run the grid deconvolution route
};

namespace detail {

/// u_m = g_m - sum_{j>=1} phi_j g_{m+j}: the causal part of phi(w)* G_+(w).
/// (The anticausal part lives at m < 0 and is discarded here.)
template <typename Scalar>
VecX<Scalar> causal_part_of_whitened_rhs(const VecX<Scalar>& g, const VecX<Scalar>& phi) {
    VecX<Scalar> u = g;
    for (Index m = 0; m < g.size(); ++m) {
        const Index jmax = std::min<Index>(phi.size(), g.size() - 1 - m);
        Scalar acc = 0;
        for (Index j = 1; j <= jmax; ++j) acc += phi[j - 1] * g[m + j];
        u[m] -= acc;
    }
    return u;
}

template <typename Scalar>
FilterSolution<Scalar> finish_solution(VecX<Scalar> h_full, Method method,
                                       const CovarianceSequence<Scalar>& cov,
                                       const CausalSeq<Scalar>& g,
                                       const SpectralGrid<Scalar>& grid,
                                       const SolveOptions<Scalar>& opt) {
    FilterSolution<Scalar> sol;
    sol.method = method;
    const Index want = opt.h_len > 0 ? opt.h_len : h_full.size();
    sol.h = VecX<Scalar>::Zero(want);
    sol.h.head(std::min(want, h_full.size())) = h_full.head(std::min(want, h_full.size()));
    const Index tail = std::min<Index>(16, sol.h.size());
    sol.tail_energy = sol.h.tail(tail).cwiseAbs().sum();
    sol.H_grid = evaluate_causal(sol.h, grid);
    const Index check_len =
        opt.residual_check_len >= 0 ? opt.residual_check_len : g.size() + 20;
    sol.residual = verify_normal_equations(cov, sol.h, g, check_len).max_abs;
    return sol;
}

}  // namespace detail

/// Classical causal-part solution H = sigma^{-2} phi [phi* G_+]_+.
template <typename Scalar>
FilterSolution<Scalar> solve_wh_classical(const CausalSeq<Scalar>& g,
                                          const WoldFactorization<Scalar>& w,
                                          const CovarianceSequence<Scalar>& cov,
                                          const SpectralGrid<Scalar>& grid,
                                          const SolveOptions<Scalar>& opt = {}) {
    if (g.size() == 0) throw DomainError("solve_wh_classical: empty right-hand side");
    VecX<Scalar> u = detail::causal_part_of_whitened_rhs(g, w.phi);
    VecX<Scalar> h = convolve(w.ar_polynomial(), u);
    h /= w.sigma2;
    return detail::finish_solution(std::move(h), Method::classical, cov, g, grid, opt);
}

/// Prediction-form solution, assembled term by term from
///   sum_l g_l (e^{ilw} - sum_{s=1}^{l} phi_s e^{i(l-s)w})
/// (the inner sum is empty for l = 0).  When cross_check_routes is set, the
/// deconvolution route N(w)/f(w) -> inverse transform is run as well and the
/// two coefficient sets must agree to route_tol.
template <typename Scalar>
FilterSolution<Scalar> solve_wh_prediction(const CausalSeq<Scalar>& g,
                                           const WoldFactorization<Scalar>& w,
                                           const CovarianceSequence<Scalar>& cov,
                                           const SpectralGrid<Scalar>& grid,
                                           const SolveOptions<Scalar>& opt = {}) {
    if (g.size() == 0) throw DomainError("solve_wh_prediction: empty right-hand side");
    VecX<Scalar> u = g;
    for (Index l = 0; l < g.size(); ++l) {
        const Index smax = std::min<Index>(l, w.phi.size());
        for (Index s = 1; s <= smax; ++s) u[l - s] -= g[l] * w.phi[s - 1];
    }
    VecX<Scalar> h = convolve(w.ar_polynomial(), u);
    h /= w.sigma2;
    FilterSolution<Scalar> sol =
        detail::finish_solution(std::move(h), Method::prediction, cov, g, grid, opt);

    if (opt.cross_check_routes) {
        // w_s = sum_l g_l phi_{l+s} packs the double sum sum_l g_l phi_l(w)*
        // into one anticausal series.
        const Index L = w.phi.size();
        VecX<Scalar> corr = VecX<Scalar>::Zero(L + 1);
        for (Index s = 1; s <= L; ++s) {
            Scalar acc = 0;
            const Index lmax = std::min<Index>(g.size() - 1, L - s);
            for (Index l = 0; l <= lmax; ++l) acc += g[l] * w.phi[l + s - 1];
            corr[s] = acc;
        }
        DensitySamples<Scalar> f = eval_spectral_density(cov, grid.n);
        CVecX<Scalar> G = evaluate_causal(g, grid);
        CVecX<Scalar> Psi = evaluate_causal(w.psi, grid);
        CVecX<Scalar> W = evaluate_causal(corr, grid);
        CVecX<Scalar> H2(grid.n);
        for (Index k = 0; k < grid.n; ++k)
            H2[k] = (G[k] + std::conj(Psi[k]) * std::conj(W[k])) / f.values[k];
        const Index cmp = std::min<Index>(sol.h.size(), grid.n / 2);
        VecX<Scalar> h2 = inverse_transform_causal(H2, grid, cmp);
        sol.route_gap = (sol.h.head(cmp) - h2).cwiseAbs().maxCoeff();
        if (!(sol.route_gap <= opt.route_tol))
            throw NumericalConsistencyError(
                "solve_wh_prediction: coefficient and deconvolution routes disagree "
                "by " + std::to_string(sol.route_gap));
    }
    return sol;
}

/// Extension of the right-hand side to negative indices,
///   G_-(w) = -psi(w)* [phi(w)* G_+(w)]_-,
/// returned together with the original g as a two-sided sequence.
template <typename Scalar>
BiSeq<Scalar> g_minus(const CausalSeq<Scalar>& g, const WoldFactorization<Scalar>& w,
                      Index out_len) {
    const VecX<Scalar> arp = w.ar_polynomial();
    const Index L = w.phi.size();
    // v_t = sum_j arp_j g_{t+j} for t = -1..-L (anticausal part of phi* G_+)
    VecX<Scalar> v = VecX<Scalar>::Zero(L);  // v[i] = v_{-(i+1)}
    for (Index i = 0; i < L; ++i) {
        const Index t = -(i + 1);
        Scalar acc = 0;
        for (Index j = -t; j < arp.size(); ++j) {
            const Index gi = t + j;
            if (gi < g.size()) acc += arp[j] * g[gi];
        }
        v[i] = acc;
    }
    BiSeq<Scalar> out;
    out.pos = g;
    out.neg = VecX<Scalar>::Zero(out_len);
    // g_l = -sum_j psi_j v_{l+j} for l = -1..-out_len, with l+j kept in [-L, -1]
    for (Index i = 0; i < out_len; ++i) {
        const Index l = -(i + 1);
        Scalar acc = 0;
        const Index jmin = std::max<Index>(0, -L - l);
        const Index jmax = std::min<Index>(w.psi.size() - 1, -1 - l);
        for (Index j = jmin; j <= jmax; ++j) acc += w.psi[j] * v[-(l + j) - 1];
        out.neg[i] = -acc;
    }
    return out;
}

/// m-step prediction filter H_m(w) = phi(w) [psi(w) e^{-imw}]_+.
/// Its coefficients coincide with multistep_coeffs(w, m, .).
template <typename Scalar>
FilterSolution<Scalar> m_step_filter(const WoldFactorization<Scalar>& w, Index m,
                                     const SpectralGrid<Scalar>& grid, Index h_len = 0) {
    if (m < 1) throw DomainError("m_step_filter: m must be >= 1");
    const Index nshift = std::max<Index>(w.psi.size() - m, 1);
    VecX<Scalar> shifted = VecX<Scalar>::Zero(nshift);
    for (Index j = 0; j < nshift; ++j) {
        const Index src = m + j;
        if (src < w.psi.size()) shifted[j] = w.psi[src];
    }
    VecX<Scalar> h = convolve(w.ar_polynomial(), shifted);
    FilterSolution<Scalar> sol;
    sol.method = Method::classical;
    const Index want = h_len > 0 ? h_len : h.size();
    sol.h = VecX<Scalar>::Zero(want);
    sol.h.head(std::min(want, h.size())) = h.head(std::min(want, h.size()));
    const Index tail = std::min<Index>(16, sol.h.size());
    sol.tail_energy = sol.h.tail(tail).cwiseAbs().sum();
    sol.H_grid = evaluate_causal(sol.h, grid);
    return sol;
}

/// Causal filter from a two-sided one: the input weights a_k multiply X_k
/// (k > 0 are future values), and h_j = a_{-j} + sum_{l>=1} a_l phi_j(l).
template <typename Scalar>
CausalSeq<Scalar> concurrent_from_twosided(const BiSeq<Scalar>& a,
                                           const WoldFactorization<Scalar>& w,
                                           Index out_len) {
    CausalSeq<Scalar> h = VecX<Scalar>::Zero(out_len);
    if (a.pos.size() > 0 && out_len > 0) h[0] = a.pos[0];
    for (Index j = 1; j < out_len; ++j)
        if (j - 1 < a.neg.size()) h[j] = a.neg[j - 1];
    for (Index l = 1; l < a.pos.size(); ++l) {
        if (a.pos[l] == Scalar(0)) continue;
        MultistepCoeffs<Scalar> pc = multistep_coeffs(w, l, out_len);
        h += a.pos[l] * pc.values;
    }
    return h;
}

}  // namespace wh

#endif  // WH_WIENER_HOPF_HPP
