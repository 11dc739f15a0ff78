#include "dtdr/error.hpp"
#include "dtdr/readout.hpp"

#include "helpers.hpp"

#include <catch_amalgamated.hpp>

#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <random>

using namespace dtdr;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

using dense = std::vector<std::vector<double>>;

/// Gaussian elimination with partial pivoting; independent of the library's Cholesky path.
std::vector<double> solve_dense(dense a, std::vector<double> b)
{
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a[i][k]) > std::abs(a[piv][k]))
                piv = i;
        std::swap(a[k], a[piv]);
        std::swap(b[k], b[piv]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j)
                a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t k = n; k-- > 0;) {
        double s = b[k];
        for (std::size_t j = k + 1; j < n; ++j)
            s -= a[k][j] * x[j];
        x[k] = s / a[k][k];
    }
    return x;
}

/// (X'X + R)^-1 X'y where R is ridge on the first `regularized` diagonal entries.
std::vector<double> normal_equations(const dense& x, const std::vector<double>& y, double ridge, std::size_t regularized)
{
    const std::size_t p = x.front().size();
    dense a(p, std::vector<double>(p, 0.0));
    std::vector<double> b(p, 0.0);
    for (std::size_t r = 0; r < x.size(); ++r)
        for (std::size_t i = 0; i < p; ++i) {
            b[i] += x[r][i] * y[r];
            for (std::size_t j = 0; j < p; ++j)
                a[i][j] += x[r][i] * x[r][j];
        }
    for (std::size_t i = 0; i < regularized; ++i)
        a[i][i] += ridge;
    return solve_dense(a, b);
}

state_matrix random_states(Eigen::Index rows, int cols, std::uint64_t seed)
{
    state_matrix m(rows, {cols});
    rng_t rng(seed);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c)
            m.entries()(r, c) = uniform(rng, -1.0, 1.0);
    return m;
}

train_spec single_ridge(int n_train, double ridge, bool bias)
{
    train_spec s;
    s.n_train = n_train;
    s.delta_n = 0;
    s.ridge_grid = {ridge};
    s.include_bias = bias;
    return s;
}

} // namespace

TEST_CASE("identity states interpolate their targets exactly", "[readout]")
{
    state_matrix m(2, {2});
    m.entries() << 1.0, 0.0, 0.0, 1.0;
    const auto target = timeseries::scalar({1.0, 2.0});
    const auto w = train_ridge(m, target, single_ridge(2, 0.0, false));
    const auto p = predict(m, w);
    REQUIRE(p(0) == 1.0);
    REQUIRE(p(1) == 2.0);
}

TEST_CASE("huge ridge leaves only the bias: the mean predictor", "[readout]")
{
    const auto m = random_states(200, 6, 3);
    const auto y = test::random_input(200, 4, 2.0, 5.0);
    const auto target = timeseries::scalar(y);
    const auto w = train_ridge(m, target, single_ridge(200, 1e12, true));
    REQUIRE(w.matrix.topRows(6).cwiseAbs().maxCoeff() < 1e-8);
    const auto p = predict(m, w);
    const double mu = mean(y);
    for (std::size_t n = 0; n < p.size(); ++n)
        REQUIRE_THAT(p(n), WithinAbs(mu, 1e-8));
    REQUIRE_THAT(nmse(p, target), WithinAbs(1.0, 1e-6));
}

TEST_CASE("ridge weights match the normal equations", "[readout][oracle]")
{
    const auto m = random_states(50, 8, 10);
    const auto y = test::random_input(50, 11);
    const auto target = timeseries::scalar(y);
    dense x(50, std::vector<double>(8));
    for (int r = 0; r < 50; ++r)
        for (int c = 0; c < 8; ++c)
            x[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = m.entries()(r, c);

    SECTION("without bias")
    {
        const auto w = train_ridge(m, target, single_ridge(50, 1e-3, false));
        const auto oracle = normal_equations(x, y, 1e-3, 8);
        for (int c = 0; c < 8; ++c)
            REQUIRE_THAT(w.matrix(c, 0), WithinRel(oracle[static_cast<std::size_t>(c)], 1e-8));
    }
    SECTION("with an unregularized bias column")
    {
        auto xb = x;
        for (auto& row : xb)
            row.push_back(1.0);
        const auto w = train_ridge(m, target, single_ridge(50, 1e-3, true));
        const auto oracle = normal_equations(xb, y, 1e-3, 8);
        for (int c = 0; c < 9; ++c)
            REQUIRE_THAT(w.matrix(c, 0), WithinRel(oracle[static_cast<std::size_t>(c)], 1e-8));
    }
}

TEST_CASE("delta_n aligns state row n with target sample n + delta_n", "[readout]")
{
    const auto m = random_states(120, 3, 5);
    timeseries target(1, 1.0);
    for (int n = 0; n < 4; ++n)
        target.push_back(0.0);
    for (Eigen::Index r = 0; r < 120; ++r)
        target.push_back(2.0 * m.entries()(r, 0) - m.entries()(r, 2) + 0.5);
    auto spec = single_ridge(100, 0.0, true);
    spec.delta_n = 4;
    const auto w = train_ridge(m, target, spec);
    REQUIRE_THAT(w.matrix(0, 0), WithinAbs(2.0, 1e-10));
    REQUIRE_THAT(w.matrix(1, 0), WithinAbs(0.0, 1e-10));
    REQUIRE_THAT(w.matrix(2, 0), WithinAbs(-1.0, 1e-10));
    REQUIRE_THAT(w.matrix(3, 0), WithinAbs(0.5, 1e-10));
    const auto rep = evaluate_readout(m, target, w, spec);
    REQUIRE(rep.nmse_test < 1e-18);
    REQUIRE(rep.n_test == 20);
}

TEST_CASE("the validation tail picks the ridge and singular points are skipped", "[readout]")
{
    // more features than fit rows: ridge 0 is singular
    const auto m = random_states(40, 60, 2);
    const auto target = timeseries::scalar(test::random_input(40, 3));
    train_spec s;
    s.n_train = 40;
    s.delta_n = 0;
    s.ridge_grid = {0.0, 1e-3, 1e-1, 10.0};
    const auto w = train_ridge(m, target, s);
    REQUIRE(w.scores.size() == 4);
    REQUIRE(w.scores[0].singular);
    double best = 1e300;
    double best_ridge = -1;
    for (const auto& sc : w.scores)
        if (!sc.singular && sc.validation_nmse < best) {
            best = sc.validation_nmse;
            best_ridge = sc.ridge;
        }
    REQUIRE(w.ridge == best_ridge);

    s.ridge_grid = {0.0};
    s.validation_fraction = 0.1;
    REQUIRE_THROWS_AS(train_ridge(m, target, s), training_error);
}

TEST_CASE("training residual grows with the ridge", "[readout][property]")
{
    const auto m = random_states(300, 20, 8);
    const auto target = timeseries::scalar(test::random_input(300, 9));
    double prev = -1.0;
    for (double ridge : {0.0, 1e-6, 1e-3, 1e-1, 1.0, 10.0, 1e3}) {
        const auto w = train_ridge(m, target, single_ridge(300, ridge, true));
        const auto p = predict(m, w);
        double rss = 0.0;
        for (std::size_t n = 0; n < p.size(); ++n)
            rss += std::pow(p(n) - target(n), 2);
        REQUIRE(rss >= prev * (1 - 1e-12));
        prev = rss;
    }
}

TEST_CASE("predict: zero weights, one-hot weights and the naive sum", "[readout][oracle]")
{
    const auto m = random_states(30, 7, 12);
    readout_weights w;
    w.include_bias = false;
    w.matrix = Eigen::MatrixXd::Zero(7, 2);
    auto p = predict(m, w);
    REQUIRE(p.dim() == 2);
    for (double v : p.data())
        REQUIRE(v == 0.0);

    w.matrix(4, 1) = 1.0;
    p = predict(m, w);
    for (Eigen::Index r = 0; r < 30; ++r)
        REQUIRE(p(static_cast<std::size_t>(r), 1) == m.entries()(r, 4));

    rng_t rng(99);
    w.include_bias = true;
    w.matrix.resize(8, 3);
    for (Eigen::Index i = 0; i < w.matrix.size(); ++i)
        w.matrix.data()[i] = uniform(rng, -2.0, 2.0);
    p = predict(m, w);
    for (Eigen::Index r = 0; r < 30; ++r)
        for (Eigen::Index j = 0; j < 3; ++j) {
            double s = w.matrix(7, j);
            for (Eigen::Index c = 0; c < 7; ++c)
                s += w.matrix(c, j) * m.entries()(r, c);
            REQUIRE_THAT(p(static_cast<std::size_t>(r), static_cast<std::size_t>(j)), WithinAbs(s, 1e-12));
        }

    w.matrix.resize(5, 1);
    REQUIRE_THROWS_AS(predict(m, w), argument_error);
}

TEST_CASE("predict is linear in the weights", "[readout][property]")
{
    const auto m = random_states(40, 5, 13);
    readout_weights w1;
    readout_weights w2;
    w1.matrix = Eigen::MatrixXd::Random(6, 1);
    w2.matrix = Eigen::MatrixXd::Random(6, 1);
    readout_weights mix;
    mix.matrix = 0.7 * w1.matrix - 1.3 * w2.matrix;
    const auto p1 = predict(m, w1);
    const auto p2 = predict(m, w2);
    const auto pm = predict(m, mix);
    for (std::size_t n = 0; n < pm.size(); ++n)
        REQUIRE_THAT(pm(n), WithinAbs(0.7 * p1(n) - 1.3 * p2(n), 1e-12));
}

TEST_CASE("nmse definitions", "[readout]")
{
    const auto y = test::random_input(500, 21, -3.0, 1.0);
    const auto target = timeseries::scalar(y);
    REQUIRE(nmse(target, target) == 0.0);
    const double mu = mean(y);
    const double sd = stddev(y);
    REQUIRE_THAT(nmse(timeseries::scalar(std::vector<double>(500, mu)), target), WithinAbs(1.0, 1e-12));
    auto shifted = y;
    for (auto& v : shifted)
        v += sd;
    REQUIRE_THAT(nmse(timeseries::scalar(shifted), target), WithinAbs(1.0, 1e-12));
    REQUIRE_THROWS_AS(nmse(target, timeseries::scalar(std::vector<double>(500, 2.0))), degenerate_error);
    REQUIRE_THROWS_AS(nmse(target.slice(0, 10), target), argument_error);
}

TEST_CASE("nmse is invariant under a common affine map", "[readout][property]")
{
    const auto y = test::random_input(300, 1);
    const auto p = test::random_input(300, 2);
    const double base = nmse(timeseries::scalar(p), timeseries::scalar(y));
    for (const auto& [shift, scale] : std::vector<std::pair<double, double>>{{3.0, 2.0}, {-100.0, 0.01}, {0.5, 1e3}}) {
        auto ya = y;
        auto pa = p;
        for (std::size_t n = 0; n < y.size(); ++n) {
            ya[n] = shift + scale * y[n];
            pa[n] = shift + scale * p[n];
        }
        REQUIRE_THAT(nmse(timeseries::scalar(pa), timeseries::scalar(ya)), WithinRel(base, 1e-12));
    }
}

TEST_CASE("test NMSE uses only rows after the training block", "[readout][property]")
{
    auto m = random_states(150, 4, 30);
    const auto target = timeseries::scalar(test::random_input(150, 31));
    const auto spec = single_ridge(100, 1e-2, true);
    const auto w = train_ridge(m, target, spec);
    const auto rep = evaluate_readout(m, target, w, spec);
    REQUIRE(rep.n_test == 50);
    const auto test_pred = predict(m.row_slice(100, 50), w);
    REQUIRE(rep.nmse_test == nmse(test_pred, target.slice(100, 50)));
    // corrupting the test rows leaves the training score alone
    m.entries().bottomRows(50).setConstant(9.0);
    const auto rep2 = evaluate_readout(m, target, w, spec);
    REQUIRE(rep2.nmse_train == rep.nmse_train);
    REQUIRE(rep2.nmse_test != rep.nmse_test);
}

TEST_CASE("weights round-trip through the binary format", "[readout][io]")
{
    const auto m = random_states(80, 5, 40);
    const auto target = timeseries::scalar(test::random_input(80, 41));
    auto spec = single_ridge(60, 1e-4, true);
    spec.seed = 77;
    const auto w = train_ridge(m, target, spec);
    const auto dir = std::filesystem::temp_directory_path() / "dtdr_test_readout";
    std::filesystem::create_directories(dir);
    write_binary(w, dir / "w.bin");
    const auto back = read_weights(dir / "w.bin");
    REQUIRE(back.matrix == w.matrix);
    REQUIRE(back.include_bias);
    REQUIRE(back.ridge == 1e-4);
    REQUIRE(back.seed == 77);
    REQUIRE(back.n_train == 60);

    const auto j = nlohmann::json::parse(weights_summary_json(w, evaluate_readout(m, target, w, spec, 0)));
    REQUIRE(j["chosen_ridge"] == 1e-4);
    REQUIRE(j["n_features"] == 5);
}

TEST_CASE("train spec validation", "[readout][validation]")
{
    train_spec s;
    REQUIRE(s.validation_errors().empty());
    s.n_train = 5;
    s.ridge_grid = {1.0, 0.1};
    s.validation_fraction = 1.0;
    REQUIRE(s.validation_errors().size() == 3);
}
