#ifndef WH_TESTS_FIXTURES_HPP
#define WH_TESTS_FIXTURES_HPP

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "wh/wh.hpp"

// Shared test processes.  Five exponential-decay models plus one
// polynomial-decay MA kernel psi_j = 0.5 (1+j)^{-5}, which is minimum phase
// because sum_{j>=1} |psi_j| = 0.5 (zeta(5) - 1) < 1.

namespace whtest {

using Scalar = double;
using wh::Index;

struct Fixture {
    std::string name;
    wh::CovarianceSequence<Scalar> cov;
    wh::WoldFactorization<Scalar> wold;
    wh::SpectralGrid<Scalar> grid;
    Index order = 0;
};

inline Fixture make_fixture(std::string name, wh::CovarianceSequence<Scalar> cov,
                            Index order, Index series_length, Index n_grid) {
    wh::WoldOptions<Scalar> opt;
    opt.series_length = series_length;
    opt.n_grid = n_grid;
    Fixture f{std::move(name), cov, wh::wold_from_covariance(cov, order, opt),
              wh::SpectralGrid<Scalar>(n_grid), order};
    return f;
}

inline Fixture white_noise() {
    wh::VecX<Scalar> c = wh::VecX<Scalar>::Zero(129);
    c[0] = 1.0;
    return make_fixture("white", wh::CovarianceSequence<Scalar>(c), 48, 128, 2048);
}

inline Fixture ar1() {
    wh::VecX<Scalar> ar(1);
    ar << 0.5;
    return make_fixture("ar1", wh::acf_from_arma<Scalar>(ar, {}, 1.0, 128), 48, 128, 2048);
}

inline Fixture ar2() {
    wh::VecX<Scalar> ar(2);
    ar << 0.5, -0.3;
    return make_fixture("ar2", wh::acf_from_arma<Scalar>(ar, {}, 1.0, 128), 48, 128, 2048);
}

inline Fixture ma1() {
    wh::VecX<Scalar> ma(1);
    ma << 0.4;
    return make_fixture("ma1", wh::acf_from_arma<Scalar>({}, ma, 1.0, 128), 48, 128, 2048);
}

inline Fixture arma11() {
    wh::VecX<Scalar> ar(1), ma(1);
    ar << 0.5;
    ma << 0.4;
    return make_fixture("arma11", wh::acf_from_arma<Scalar>(ar, ma, 1.0, 128), 48, 128,
                        2048);
}

inline wh::VecX<Scalar> poly_kernel(Index len, Scalar gamma = 5.0) {
    wh::VecX<Scalar> psi(len + 1);
    psi[0] = 1.0;
    for (Index j = 1; j <= len; ++j) psi[j] = 0.5 * std::pow(Scalar(1 + j), -gamma);
    return psi;
}

inline Fixture poly5() {
    return make_fixture("poly5",
                        wh::acf_from_ma_kernel<Scalar>(poly_kernel(768), 1.0, 768), 256,
                        1024, 8192);
}

inline std::vector<Fixture> all_fixtures() {
    std::vector<Fixture> out;
    out.push_back(white_noise());
    out.push_back(ar1());
    out.push_back(ar2());
    out.push_back(ma1());
    out.push_back(arma11());
    out.push_back(poly5());
    return out;
}

// --- right-hand sides -------------------------------------------------------

inline wh::VecX<Scalar> g_unit(Index k = 0) {
    wh::VecX<Scalar> g = wh::VecX<Scalar>::Zero(k + 1);
    g[k] = 1.0;
    return g;
}

/// g_l = c(l + 1): the one-step prediction right-hand side.
inline wh::VecX<Scalar> g_shifted_acf(const wh::CovarianceSequence<Scalar>& cov) {
    wh::VecX<Scalar> g(cov.max_lag());
    for (Index l = 0; l < g.size(); ++l) g[l] = cov.at(l + 1);
    return g;
}

/// Sparse deterministic right-hand side (fixed seed).
inline wh::VecX<Scalar> g_random_sparse(unsigned seed = 42, Index len = 40,
                                        Index nonzeros = 5) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<Index> pick(0, len - 1);
    std::uniform_real_distribution<Scalar> val(-1.0, 1.0);
    wh::VecX<Scalar> g = wh::VecX<Scalar>::Zero(len);
    for (Index i = 0; i < nonzeros; ++i) g[pick(rng)] = val(rng);
    if (g.cwiseAbs().maxCoeff() == 0.0) g[0] = 1.0;
    return g;
}

}  // namespace whtest

#endif  // WH_TESTS_FIXTURES_HPP
