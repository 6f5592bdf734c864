#ifndef WH_WH_HPP
#define WH_WH_HPP

#include "wh/approx.hpp"
#include "wh/common.hpp"
#include "wh/covariance.hpp"
#include "wh/factorization.hpp"
#include "wh/series.hpp"
#include "wh/toeplitz.hpp"
#include "wh/wiener_hopf.hpp"

#endif  // WH_WH_HPP
