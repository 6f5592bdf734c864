#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "fixtures.hpp"
#include "wh/toeplitz.hpp"
#include "wh/wiener_hopf.hpp"

using wh::Index;
using wh::VecX;
using whtest::Fixture;

namespace {

VecX<double> vec(std::initializer_list<double> v) {
    VecX<double> out(static_cast<Index>(v.size()));
    Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

// phi_j for MA(1) with parameter b: phi(w) = (1 + b e^{iw})^{-1} gives
// phi_j = -(-b)^j for j >= 1.
double ma1_phi(double b, Index j) { return -std::pow(-b, double(j)); }

}  // namespace

TEST_CASE("multistep_coeffs: AR(1), white noise, MA(1) with projection oracle") {
    Fixture ar1 = whtest::ar1();
    auto pc = wh::multistep_coeffs(ar1.wold, 3, 8);
    CHECK(pc.values[0] == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(pc.values.tail(7).cwiseAbs().maxCoeff() <= 1e-12);

    Fixture white = whtest::white_noise();
    CHECK(wh::multistep_coeffs(white.wold, 5, 8).values.cwiseAbs().maxCoeff() == 0.0);

    Fixture ma1 = whtest::ma1();
    auto pm = wh::multistep_coeffs(ma1.wold, 1, 8);
    for (Index j = 0; j < 8; ++j)
        CHECK(pm.values[j] == doctest::Approx(ma1_phi(0.4, j + 1)).epsilon(1e-10));

    // oracle: coefficients of the projection of X_1 onto X_0..X_{-(n-1)},
    // from the truncated Toeplitz system with right-hand side c(1+s)
    const Index n = 200;
    wh::ToeplitzSpec<double> spec(ma1.cov, n);
    VecX<double> rhs(n);
    for (Index s = 0; s < n; ++s) rhs[s] = ma1.cov.at(1 + s);
    VecX<double> beta = wh::toeplitz_solve_truncated(spec, rhs).h;
    CHECK((beta.head(8) - pm.values).cwiseAbs().maxCoeff() <= 1e-8);

    CHECK_THROWS_AS(wh::multistep_coeffs(ar1.wold, 0, 4), wh::DomainError);
}

TEST_CASE("phi_tail: closed forms") {
    Fixture ar1 = whtest::ar1();
    auto t0 = wh::phi_tail(ar1.wold, 0, ar1.grid);
    for (Index k : {0, 5, 100}) {
        std::complex<double> want = 0.5 * std::polar(1.0, ar1.grid.omega(k));
        CHECK(std::abs(t0[k] - want) <= 1e-12);
    }
    auto t1 = wh::phi_tail(ar1.wold, 1, ar1.grid);
    CHECK(t1.cwiseAbs().maxCoeff() <= 1e-12);
    // beyond the truncation length the tail is identically zero
    auto tL = wh::phi_tail(ar1.wold, ar1.wold.truncation_length(), ar1.grid);
    CHECK(tL.cwiseAbs().maxCoeff() == 0.0);

    Fixture ma1 = whtest::ma1();
    auto tm = wh::phi_tail(ma1.wold, 1, ma1.grid);
    CHECK(std::abs(tm[0] - std::complex<double>(-0.16 / 1.4, 0)) <= 1e-10);
}

TEST_CASE("causal_part / anticausal_part partition the sequence") {
    wh::BiSeq<double> s{vec({2}), vec({1, 3})};
    CHECK((wh::causal_part(s).array() == vec({1, 3}).array()).all());
    CHECK((wh::anticausal_part(s).array() == vec({2}).array()).all());

    wh::BiSeq<double> z{VecX<double>::Zero(4), VecX<double>::Zero(3)};
    CHECK(wh::causal_part(z).cwiseAbs().maxCoeff() == 0.0);
    CHECK(wh::anticausal_part(z).cwiseAbs().maxCoeff() == 0.0);

    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-2, 2);
    wh::BiSeq<double> r{VecX<double>(6), VecX<double>(9)};
    for (Index i = 0; i < 6; ++i) r.neg[i] = u(rng);
    for (Index i = 0; i < 9; ++i) r.pos[i] = u(rng);
    CHECK((wh::causal_part(r).array() == r.pos.array()).all());  // bit exact
    CHECK((wh::anticausal_part(r).array() == r.neg.array()).all());
}

TEST_CASE("solve_wh_classical: white noise, prediction rhs, unit rhs") {
    Fixture white = whtest::white_noise();
    VecX<double> g = vec({3, 1, -0.5});
    auto sol = wh::solve_wh_classical(g, white.wold, white.cov, white.grid);
    CHECK((sol.h.head(3) - g).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(sol.h.tail(sol.h.size() - 3).cwiseAbs().maxCoeff() == 0.0);
    CHECK(sol.residual <= 1e-14);

    Fixture ar1 = whtest::ar1();
    auto sol1 = wh::solve_wh_classical(whtest::g_shifted_acf(ar1.cov), ar1.wold, ar1.cov,
                                       ar1.grid);
    CHECK(sol1.h[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sol1.h.tail(sol1.h.size() - 1).cwiseAbs().maxCoeff() <= 1e-12);

    auto sol2 = wh::solve_wh_classical(whtest::g_unit(0), ar1.wold, ar1.cov, ar1.grid);
    CHECK(sol2.h[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sol2.h[1] == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(sol2.h.tail(sol2.h.size() - 2).cwiseAbs().maxCoeff() <= 1e-12);
    // dense-solve oracle
    wh::ToeplitzSpec<double> spec(ar1.cov, 200);
    VecX<double> oracle = wh::toeplitz_solve_truncated(spec, whtest::g_unit(0)).h;
    CHECK((sol2.h.head(50) - oracle.head(50)).cwiseAbs().maxCoeff() <= 1e-8);

    CHECK_THROWS_AS(
        wh::solve_wh_classical(VecX<double>(), ar1.wold, ar1.cov, ar1.grid),
        wh::DomainError);
}

TEST_CASE("solve_wh_prediction: examples, dense oracle, route cross-check") {
    Fixture white = whtest::white_noise();
    VecX<double> g = vec({1, 0, 2});
    auto sol = wh::solve_wh_prediction(g, white.wold, white.cov, white.grid);
    CHECK((sol.h.head(3) - g).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(sol.route_gap <= 1e-10);

    Fixture ar1 = whtest::ar1();
    auto sol1 = wh::solve_wh_prediction(whtest::g_shifted_acf(ar1.cov), ar1.wold,
                                        ar1.cov, ar1.grid);
    CHECK(sol1.h[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sol1.h.tail(sol1.h.size() - 1).cwiseAbs().maxCoeff() <= 1e-12);

    Fixture ma1 = whtest::ma1();
    auto sol2 = wh::solve_wh_prediction(whtest::g_unit(0), ma1.wold, ma1.cov, ma1.grid);
    wh::ToeplitzSpec<double> spec(ma1.cov, 400);
    VecX<double> oracle = wh::toeplitz_solve_truncated(spec, whtest::g_unit(0)).h;
    CHECK((sol2.h.head(100) - oracle.head(100)).cwiseAbs().maxCoeff() <= 1e-8);
    // agreement holds out to half the truncation length
    const Index half = std::min<Index>(200, sol2.h.size());
    CHECK((sol2.h.head(half) - oracle.head(half)).cwiseAbs().maxCoeff() <= 1e-6);

    // an unreachable route tolerance must raise the consistency error
    wh::SolveOptions<double> opt;
    opt.route_tol = -1.0;
    CHECK_THROWS_AS(
        wh::solve_wh_prediction(whtest::g_unit(0), ma1.wold, ma1.cov, ma1.grid, opt),
        wh::NumericalConsistencyError);
}

TEST_CASE("method agreement: classical and prediction coincide on all fixtures") {
    for (const auto& f : whtest::all_fixtures()) {
        CAPTURE(f.name);
        for (const auto& g : {whtest::g_unit(0), whtest::g_shifted_acf(f.cov),
                              whtest::g_random_sparse()}) {
            auto a = wh::solve_wh_classical(g, f.wold, f.cov, f.grid);
            auto b = wh::solve_wh_prediction(g, f.wold, f.cov, f.grid);
            const double scale = std::max(1.0, a.h.cwiseAbs().maxCoeff());
            CHECK((a.h - b.h).cwiseAbs().maxCoeff() <= 1e-8 * scale);
        }
    }
}

TEST_CASE("g_minus: white noise, AR(1) covariance extension, Fourier identity") {
    Fixture white = whtest::white_noise();
    auto ext0 = wh::g_minus(vec({1, 2, 3}), white.wold, 10);
    CHECK(ext0.neg.cwiseAbs().maxCoeff() == 0.0);
    CHECK((ext0.pos.array() == vec({1, 2, 3}).array()).all());

    Fixture ar1 = whtest::ar1();
    VecX<double> g = whtest::g_shifted_acf(ar1.cov);
    auto ext = wh::g_minus(g, ar1.wold, 8);
    // g_{-l} extends the covariance: a^l c(1), so g_{-1} = 0.5 * 2/3 = 1/3
    CHECK(ext.neg[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    for (Index l = 1; l <= 8; ++l)
        CHECK(ext.neg[l - 1] ==
              doctest::Approx(std::pow(0.5, double(l)) * (2.0 / 3.0)).epsilon(1e-11));

    // time-domain definition: g_l = sum_j h_j c(l - j) for l < 0
    auto sol = wh::solve_wh_classical(g, ar1.wold, ar1.cov, ar1.grid);
    for (Index l = -8; l < 0; ++l) {
        double acc = 0;
        for (Index j = 0; j < sol.h.size(); ++j) acc += sol.h[j] * ar1.cov.at(l - j);
        CHECK(std::abs(acc - ext.neg[-l - 1]) <= 1e-10);
    }
}

TEST_CASE("g_minus: F(g_pm) = f H on the grid for every fixture") {
    for (const auto& f : whtest::all_fixtures()) {
        CAPTURE(f.name);
        VecX<double> g = whtest::g_random_sparse();
        auto sol = wh::solve_wh_classical(g, f.wold, f.cov, f.grid);
        auto ext = wh::g_minus(g, f.wold, f.wold.truncation_length());
        auto fdens = wh::eval_spectral_density(f.cov, f.grid.n);
        auto Gp = wh::evaluate_causal(g, f.grid);
        // negative part: sum_{l<0} g_l e^{ilw} = conj-transform of the neg block
        VecX<double> neg_padded(ext.neg.size() + 1);
        neg_padded[0] = 0;
        neg_padded.tail(ext.neg.size()) = ext.neg;
        auto Gn = wh::evaluate_causal(neg_padded, f.grid);
        double worst = 0;
        for (Index k = 0; k < f.grid.n; ++k) {
            std::complex<double> lhs = Gp[k] + std::conj(Gn[k]);
            std::complex<double> rhs = fdens.values[k] * sol.H_grid[k];
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        CHECK(worst <= 1e-8);
    }
}

TEST_CASE("m_step_filter: examples and equality with multistep_coeffs") {
    Fixture ar1 = whtest::ar1();
    auto m2 = wh::m_step_filter(ar1.wold, 2, ar1.grid);
    CHECK(m2.h[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(m2.h.tail(m2.h.size() - 1).cwiseAbs().maxCoeff() <= 1e-12);

    Fixture white = whtest::white_noise();
    CHECK(wh::m_step_filter(white.wold, 1, white.grid).h.cwiseAbs().maxCoeff() == 0.0);

    Fixture ma1 = whtest::ma1();
    auto m1 = wh::m_step_filter(ma1.wold, 1, ma1.grid);
    for (Index j = 0; j < 8; ++j)
        CHECK(m1.h[j] == doctest::Approx(ma1_phi(0.4, j + 1)).epsilon(1e-10));

    for (const auto& f : whtest::all_fixtures()) {
        CAPTURE(f.name);
        for (Index m : {Index(1), Index(2), Index(5)}) {
            auto filt = wh::m_step_filter(f.wold, m, f.grid);
            auto pc = wh::multistep_coeffs(f.wold, m, filt.h.size());
            CHECK((filt.h - pc.values).cwiseAbs().maxCoeff() <= 1e-10);
        }
    }
    CHECK_THROWS_AS(wh::m_step_filter(ar1.wold, 0, ar1.grid), wh::DomainError);
}

TEST_CASE("concurrent_from_twosided: delta filters") {
    Fixture ar1 = whtest::ar1();
    wh::BiSeq<double> id{VecX<double>(), vec({1})};
    VecX<double> h0 = wh::concurrent_from_twosided(id, ar1.wold, 6);
    CHECK(h0[0] == 1.0);
    CHECK(h0.tail(5).cwiseAbs().maxCoeff() == 0.0);

    wh::BiSeq<double> future{VecX<double>(), vec({0, 1})};  // weight on X_1
    VecX<double> h1 = wh::concurrent_from_twosided(future, ar1.wold, 6);
    CHECK(h1[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(h1.tail(5).cwiseAbs().maxCoeff() <= 1e-12);

    wh::BiSeq<double> past{vec({1}), vec({0})};  // weight on X_{-1}
    VecX<double> h2 = wh::concurrent_from_twosided(past, ar1.wold, 6);
    CHECK(h2[0] == 0.0);
    CHECK(h2[1] == 1.0);
    CHECK(h2.tail(4).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("concurrent filter agrees with the direct solve of its normal equations") {
    // Y = sum_k a_k X_k with mixed past/future weights; then
    // g_l = cov(Y, X_{-l}) = sum_k a_k c(k + l) and the causal filter for Y
    // must solve those Wiener-Hopf equations.
    for (const auto& f : {whtest::ma1(), whtest::arma11()}) {
        CAPTURE(f.name);
        wh::BiSeq<double> a{vec({0.3, -0.1}), vec({1.0, 0, 0.7, -0.25})};
        const Index L = f.wold.truncation_length();
        VecX<double> h = wh::concurrent_from_twosided(a, f.wold, L);
        VecX<double> g(f.cov.max_lag() - 3);
        for (Index l = 0; l < g.size(); ++l) {
            double acc = 0;
            for (Index k = 0; k < a.pos.size(); ++k) acc += a.pos[k] * f.cov.at(k + l);
            for (Index k = 1; k <= a.neg.size(); ++k) acc += a.neg[k - 1] * f.cov.at(l - k);
            g[l] = acc;
        }
        auto sol = wh::solve_wh_classical(g, f.wold, f.cov, f.grid);
        const Index cmp = std::min(h.size(), sol.h.size());
        CHECK((h.head(cmp) - sol.h.head(cmp)).cwiseAbs().maxCoeff() <= 1e-8);
    }
}

TEST_CASE("verify_normal_equations: exactness and sensitivity") {
    Fixture white = whtest::white_noise();
    VecX<double> g = vec({2, -1});
    auto rep = wh::verify_normal_equations(white.cov, g, g, 10);
    CHECK(rep.max_abs == 0.0);

    Fixture ar1 = whtest::ar1();
    VecX<double> g1 = whtest::g_shifted_acf(ar1.cov);
    auto sol = wh::solve_wh_classical(g1, ar1.wold, ar1.cov, ar1.grid);
    CHECK(wh::verify_normal_equations(ar1.cov, sol.h, g1, 40).max_abs <= 1e-10);

    VecX<double> bumped = sol.h;
    bumped[0] += 0.1;
    auto rep2 = wh::verify_normal_equations(ar1.cov, bumped, g1, 10);
    CHECK(std::abs(rep2.residuals[0]) >= 0.1 * ar1.cov.values[0] - 1e-6);
}

TEST_CASE("identity: e^{ilw} + psi* phi_l* = e^{ilw} psi* (1 - sum phi_s e^{-isw})") {
    for (const auto& f : whtest::all_fixtures()) {
        CAPTURE(f.name);
        auto psi_w = wh::evaluate_causal(f.wold.psi, f.grid);
        double worst = 0;
        for (Index l = 0; l <= 20; ++l) {
            auto tail = wh::phi_tail(f.wold, l, f.grid);
            for (Index k = 0; k < f.grid.n; k += 3) {
                const std::complex<double> eil = std::polar(1.0, double(l) * f.grid.omega(k));
                const std::complex<double> lhs = eil + std::conj(psi_w[k] * tail[k]);
                std::complex<double> trunc(1, 0);
                for (Index s = 1; s <= l; ++s)
                    trunc -= f.wold.phi[s - 1] * std::polar(1.0, -double(s) * f.grid.omega(k));
                const std::complex<double> rhs = eil * std::conj(psi_w[k]) * trunc;
                worst = std::max(worst, std::abs(lhs - rhs));
            }
        }
        CHECK(worst <= 1e-10);
    }
}

TEST_CASE("identity: generating function of multistep coefficients is psi(w) phi_j(w)") {
    for (const auto& f : {whtest::ma1(), whtest::arma11()}) {
        CAPTURE(f.name);
        const Index L = f.wold.truncation_length();
        // cumulative psi tails give a computable truncation bound for the l-sum
        VecX<double> abs_psi_tail(L + 2);
        abs_psi_tail[L + 1] = 0;
        for (Index t = L; t >= 0; --t)
            abs_psi_tail[t] = abs_psi_tail[t + 1] + std::abs(f.wold.psi[t]);
        auto psi_w = wh::evaluate_causal(f.wold.psi, f.grid);
        for (Index j = 0; j < 4; ++j) {
            VecX<double> series = VecX<double>::Zero(L + 1);
            for (Index l = 1; l <= L; ++l)
                series[l] = wh::multistep_coeffs(f.wold, l, j + 1).values[j];
            auto lhs = wh::evaluate_causal(series, f.grid);
            auto rhs_tail = wh::phi_tail(f.wold, j, f.grid);
            double tail_bound = 0;
            for (Index s = 1; s + j <= L; ++s)
                tail_bound += std::abs(f.wold.phi[j + s - 1]) *
                              abs_psi_tail[std::max<Index>(0, L - s + 1)];
            double worst = 0;
            for (Index k = 0; k < f.grid.n; ++k)
                worst = std::max(worst, std::abs(lhs[k] - psi_w[k] * rhs_tail[k]));
            CHECK(worst <= 1e-8 + tail_bound);
        }
    }
}
