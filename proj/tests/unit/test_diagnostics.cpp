#include "dtdr/diagnostics.hpp"
#include "dtdr/error.hpp"
#include "dtdr/seed.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace dtdr;

TEST_CASE("white noise has unit correlation width", "[diagnostics]")
{
    state_matrix m(400, {200});
    rng_t rng(42);
    std::normal_distribution<double> g;
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index k = 0; k < m.cols(); ++k)
            m.entries()(r, k) = g(rng);
    const auto w = spatial_autocorr_width(m, 0);
    REQUIRE_FALSE(w.degenerate);
    REQUIRE(w.width >= 0.0);
    REQUIRE(w.width <= 2.0);
}

TEST_CASE("constant layer is degenerate with maximal width", "[diagnostics]")
{
    state_matrix m(150, {30, 40});
    m.entries().setConstant(0.3);
    const auto w = spatial_autocorr_width(m, 1);
    REQUIRE(w.degenerate);
    REQUIRE(w.width == 40.0);
}

TEST_CASE("AR(1) rows recover their correlation length", "[diagnostics]")
{
    // correlation 0.9^k crosses 1/e at k = 9.49; long rows keep the downward bias of the
    // mean-centred estimator (about (1 + a) / ((1 - a) n)) small
    const double a = 0.9;
    const int n = 2000;
    state_matrix m(100, {5, n});
    rng_t rng(7);
    std::normal_distribution<double> g;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        double v = g(rng);
        for (int k = 0; k < n; ++k) {
            v = a * v + std::sqrt(1 - a * a) * g(rng);
            m.entries()(r, m.column(1, k)) = v;
        }
    }
    const double expected = -1.0 / std::log(a);
    const auto w = spatial_autocorr_width(m, 1);
    REQUIRE(std::abs(w.width - expected) <= 0.5);
}

TEST_CASE("width interpolates between integer lags", "[diagnostics]")
{
    // rows (1, 1, 0, 0, 1, 1, 0, 0, ...) have autocorrelation 1, 0, -1 at lags 0, 1, 2 after
    // centring, so the 1/e crossing lies at lag 1 - 1/e
    state_matrix m(100, {64});
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (int k = 0; k < 64; ++k)
            m.entries()(r, k) = ((k + r) / 2) % 2 == 0 ? 1.0 : 0.0;
    const auto w = spatial_autocorr_width(m, 0);
    REQUIRE_FALSE(w.degenerate);
    REQUIRE(std::abs(w.width - (1.0 - std::exp(-1.0))) < 0.02);
}

TEST_CASE("too few rows or a bad layer index are argument errors", "[diagnostics]")
{
    state_matrix m(50, {10});
    REQUIRE_THROWS_AS(spatial_autocorr_width(m, 0), argument_error);
    state_matrix big(120, {10});
    REQUIRE_THROWS_AS(spatial_autocorr_width(big, 1), argument_error);
}
