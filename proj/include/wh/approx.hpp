#ifndef WH_APPROX_HPP
#define WH_APPROX_HPP

#include <cmath>
#include <vector>

#include "wh/common.hpp"
#include "wh/covariance.hpp"
#include "wh/factorization.hpp"
#include "wh/wiener_hopf.hpp"

// Rational approximation of the Wiener-Hopf solution: replace the infinite
// factorization by the best-fitting AR(p) one,
//   H_p(w) = sigma_p^{-2} phi^(p)(w) [phi^(p)(w)* G_+(w)]_+,
// and measure how fast H_p approaches H as p grows, together with the
// coefficient-error terms that drive the decay:
//   baxter_lhs = sum_{j<=p} |phi_{p,j} - phi_j|,  ar_tail = sum_{j>p} |phi_j|.

namespace wh {

/// AR(p) approximate solution.  The solution's residual is measured against
/// the AR(p) model's own autocovariance (it solves T(f_p) h = g, not T(f) h = g).
template <typename Scalar>
FilterSolution<Scalar> fit_Hp(const CausalSeq<Scalar>& g,
                              const CovarianceSequence<Scalar>& cov, Index p,
                              const SpectralGrid<Scalar>& grid,
                              Index series_length = 0) {
    if (p < 1) throw DomainError("fit_Hp: order must be >= 1");
    ARFit<Scalar> fit = levinson_durbin(cov, p);
    const Index L = series_length > 0 ? series_length
                                      : default_series_length(cov.max_lag(), p);
    WoldFactorization<Scalar> pseudo = wold_from_ar_fit(fit, L);
    CovarianceSequence<Scalar> cov_p =
        acf_from_arma<Scalar>(fit.coeffs, VecX<Scalar>(), fit.sigma2, L);
    FilterSolution<Scalar> sol = solve_wh_classical(g, pseudo, cov_p, grid);
    sol.method = Method::ar_p;
    return sol;
}

template <typename Scalar>
struct BaxterTerms {
    Scalar lhs = 0;      ///< sum_{j=1}^{p} |phi_{p,j} - phi_j|
    Scalar ar_tail = 0;  ///< sum_{j=p+1}^{reference_order} |phi_j|
};

/// Both sides of Baxter's inequality, with the infinite-order coefficients
/// taken from a reference fit of much higher order (enforced >= 4p).
template <typename Scalar>
BaxterTerms<Scalar> baxter_terms(const CovarianceSequence<Scalar>& cov, Index p,
                                 Index reference_order) {
    if (reference_order < 4 * p)
        throw DomainError("baxter_terms: reference_order must be >= 4p");
    ARFit<Scalar> ref = levinson_durbin(cov, reference_order);
    ARFit<Scalar> fit = levinson_durbin(cov, p);
    BaxterTerms<Scalar> out;
    for (Index j = 0; j < p; ++j) out.lhs += std::abs(fit.coeffs[j] - ref.coeffs[j]);
    out.ar_tail = ref.coeffs.tail(reference_order - p).cwiseAbs().sum();
    return out;
}

template <typename Scalar>
struct ApproxConfig {
    CovarianceSequence<Scalar> cov;
    CausalSeq<Scalar> g;
    std::vector<Index> p_list;     ///< strictly increasing orders
    Index reference_order = 0;     ///< "truth" factorization order, >= 4 max(p_list)
    Index n_grid = 0;              ///< 0 = auto
    Index series_length = 0;       ///< 0 = auto
    Scalar smoothness_K = Scalar(4);  ///< exponent in the p^{-K+1}, p^{-K} envelope
};

template <typename Scalar>
struct DecayRow {
    Index p = 0;
    Scalar sup_err = 0;     ///< sup_k |H(w_k) - H_p(w_k)|
    Scalar baxter_lhs = 0;
    Scalar ar_tail = 0;
    Scalar sup_g = 0;
    Scalar sup_Gplus = 0;
};

template <typename Scalar>
struct DecayStudy {
    std::vector<DecayRow<Scalar>> rows;
    Scalar slope_loglog = std::numeric_limits<Scalar>::quiet_NaN();
    Scalar slope_semilog = std::numeric_limits<Scalar>::quiet_NaN();
    Scalar c_fit = std::numeric_limits<Scalar>::quiet_NaN();
    Scalar reference_residual = 0;  ///< factorization residual of the "truth" fit

    /// Envelope value C * (p^{-K+1} sup_g + p^{-K} sup_Gplus) at order p.
    static Scalar envelope(Scalar C, Scalar K, Scalar p, Scalar sup_g, Scalar sup_G) {
        return C * (std::pow(p, -K + 1) * sup_g + std::pow(p, -K) * sup_G);
    }
};

namespace detail {

template <typename Scalar>
Scalar least_squares_slope(const std::vector<Scalar>& x, const std::vector<Scalar>& y) {
    const Index n = static_cast<Index>(x.size());
    if (n < 2) return std::numeric_limits<Scalar>::quiet_NaN();
    Scalar mx = 0, my = 0;
    for (Index i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= Scalar(n);
    my /= Scalar(n);
    Scalar sxy = 0, sxx = 0;
    for (Index i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

}  // namespace detail

/// Error-decay study: one row per order in p_list, measured against a
/// reference solution of order reference_order.  Rows are ordered by p.
template <typename Scalar>
DecayStudy<Scalar> decay_study(const ApproxConfig<Scalar>& config) {
    if (config.p_list.empty()) throw DomainError("decay_study: empty p_list");
    for (size_t i = 0; i < config.p_list.size(); ++i) {
        if (config.p_list[i] < 1 ||
            (i > 0 && config.p_list[i] <= config.p_list[i - 1]))
            throw DomainError("decay_study: p_list must be strictly increasing, >= 1");
    }
    const Index pmax = config.p_list.back();
    if (config.reference_order < 4 * pmax)
        throw DomainError("decay_study: reference_order must be >= 4 max(p_list)");

    const Index L = config.series_length > 0
                        ? config.series_length
                        : default_series_length(config.cov.max_lag(), config.reference_order);
    WoldOptions<Scalar> wopt;
    wopt.series_length = L;
    const Index n_grid = config.n_grid > 0
                             ? config.n_grid
                             : std::max(SpectralGrid<Scalar>::auto_size(L),
                                        SpectralGrid<Scalar>::auto_size(config.cov.max_lag() + 1));
    wopt.n_grid = n_grid;
    SpectralGrid<Scalar> grid(n_grid);

    WoldFactorization<Scalar> ref = wold_from_covariance(config.cov, config.reference_order, wopt);
    FilterSolution<Scalar> truth = solve_wh_classical(config.g, ref, config.cov, grid);

    ARFit<Scalar> ref_fit = levinson_durbin(config.cov, config.reference_order);
    const Scalar sup_g = config.g.cwiseAbs().maxCoeff();
    const Scalar sup_G = evaluate_causal(config.g, grid).cwiseAbs().maxCoeff();

    DecayStudy<Scalar> study;
    study.reference_residual = ref.factorization_residual;
    for (Index p : config.p_list) {
        FilterSolution<Scalar> hp = fit_Hp(config.g, config.cov, p, grid, L);
        DecayRow<Scalar> row;
        row.p = p;
        row.sup_err = (truth.H_grid - hp.H_grid).cwiseAbs().maxCoeff();
        ARFit<Scalar> fit = levinson_durbin(config.cov, p);
        for (Index j = 0; j < p; ++j)
            row.baxter_lhs += std::abs(fit.coeffs[j] - ref_fit.coeffs[j]);
        row.ar_tail = ref_fit.coeffs.tail(config.reference_order - p).cwiseAbs().sum();
        row.sup_g = sup_g;
        row.sup_Gplus = sup_G;
        study.rows.push_back(row);
    }

    std::vector<Scalar> ps, logp, logerr;
    for (const auto& row : study.rows) {
        if (row.sup_err > Scalar(1e-300)) {
            ps.push_back(Scalar(row.p));
            logp.push_back(std::log(Scalar(row.p)));
            logerr.push_back(std::log(row.sup_err));
        }
    }
    study.slope_loglog = detail::least_squares_slope(logp, logerr);
    study.slope_semilog = detail::least_squares_slope(ps, logerr);

    for (const auto& row : study.rows) {
        if (row.p >= 8) {
            const Scalar shape =
                DecayStudy<Scalar>::envelope(Scalar(1), config.smoothness_K,
                                             Scalar(row.p), sup_g, sup_G);
            study.c_fit = row.sup_err / shape;
            break;
        }
    }
    return study;
}

}  // namespace wh

#endif  // WH_APPROX_HPP
