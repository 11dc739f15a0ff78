#include "dtdr/readout.hpp"

#include "dtdr/error.hpp"
#include "dtdr/io_util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace dtdr {

std::vector<double> default_ridge_grid()
{
    std::vector<double> g{0.0};
    for (int k = -12; k <= -2; ++k)
        g.push_back(std::pow(10.0, k));
    return g;
}

std::vector<std::string> train_spec::validation_errors() const
{
    std::vector<std::string> errs;
    if (n_train < 10)
        errs.emplace_back("train.n_train: must be >= 10");
    if (delta_n < 0)
        errs.emplace_back("task.delta_n: must be >= 0");
    if (ridge_grid.empty())
        errs.emplace_back("train.ridge_grid: must be non-empty");
    for (std::size_t i = 0; i < ridge_grid.size(); ++i) {
        if (!(ridge_grid[i] >= 0.0))
            errs.emplace_back("train.ridge_grid: values must be >= 0");
        if (i && ridge_grid[i] < ridge_grid[i - 1])
            errs.emplace_back("train.ridge_grid: must be sorted ascending");
    }
    if (!(validation_fraction >= 0.0 && validation_fraction < 1.0))
        errs.emplace_back("train.validation_fraction: must lie in [0, 1)");
    return errs;
}

namespace {

Eigen::MatrixXd target_block(const timeseries& target, std::size_t first, Eigen::Index rows)
{
    Eigen::MatrixXd y(rows, static_cast<Eigen::Index>(target.dim()));
    for (Eigen::Index r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < target.dim(); ++c)
            y(r, static_cast<Eigen::Index>(c)) = target(first + static_cast<std::size_t>(r), c);
    return y;
}

double block_nmse(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& target)
{
    double acc = 0.0;
    for (Eigen::Index c = 0; c < target.cols(); ++c) {
        const double var = (target.col(c).array() - target.col(c).mean()).square().mean();
        if (!(var > 0.0))
            throw degenerate_error("nmse: target has zero variance");
        acc += (pred.col(c) - target.col(c)).squaredNorm() / static_cast<double>(target.rows()) / var;
    }
    return acc / static_cast<double>(target.cols());
}

struct solve_result {
    Eigen::MatrixXd w;
    bool ok = false;
};

solve_result solve_regularized(const Eigen::MatrixXd& gram, const Eigen::MatrixXd& rhs, double ridge)
{
    Eigen::MatrixXd a = gram;
    a.diagonal().array() += ridge;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-15))
        return {};
    solve_result r{llt.solve(rhs), true};
    r.ok = r.w.allFinite();
    return r;
}

Eigen::MatrixXd gram_of(const Eigen::Ref<const Eigen::MatrixXd>& x)
{
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(x.cols(), x.cols());
    g.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose());
    g.triangularView<Eigen::StrictlyUpper>() = g.transpose();
    return g;
}

} // namespace

readout_weights train_ridge(const state_matrix& states, const timeseries& target, const train_spec& spec)
{
    if (spec.n_train < 1 || spec.delta_n < 0 || spec.ridge_grid.empty())
        throw argument_error("train_ridge: invalid train spec");
    const Eigen::Index n = spec.n_train;
    if (states.rows() < n)
        throw argument_error("train_ridge: fewer state rows than n_train");
    if (target.size() < static_cast<std::size_t>(n + spec.delta_n))
        throw argument_error("train_ridge: target shorter than n_train + delta_n");

    const Eigen::Index p = states.cols();
    const Eigen::Index n_val = spec.ridge_grid.size() > 1
                                   ? static_cast<Eigen::Index>(std::floor(spec.validation_fraction * static_cast<double>(n)))
                                   : 0;
    if (spec.ridge_grid.size() > 1 && n_val < 1)
        throw argument_error("train_ridge: a ridge grid needs a non-empty validation tail");
    const Eigen::Index n_fit = n - n_val;
    if (n_fit < 1)
        throw argument_error("train_ridge: validation tail leaves no rows to fit");

    Eigen::MatrixXd x = states.entries().topRows(n);
    const Eigen::MatrixXd y = target_block(target, static_cast<std::size_t>(spec.delta_n), n);

    Eigen::RowVectorXd mu = Eigen::RowVectorXd::Zero(p);
    if (spec.include_bias) {
        mu = x.topRows(n_fit).colwise().mean();
        x.rowwise() -= mu;
    }

    readout_weights out;
    out.include_bias = spec.include_bias;
    out.seed = spec.seed;
    out.n_train = spec.n_train;

    const Eigen::MatrixXd gram_fit = gram_of(x.topRows(n_fit));
    double chosen = spec.ridge_grid.front();
    if (n_val > 0) {
        Eigen::RowVectorXd y_fit_mean = y.topRows(n_fit).colwise().mean();
        Eigen::MatrixXd yc = y.topRows(n_fit);
        if (spec.include_bias)
            yc.rowwise() -= y_fit_mean;
        const Eigen::MatrixXd rhs = x.topRows(n_fit).transpose() * yc;
        double best = std::numeric_limits<double>::infinity();
        bool any = false;
        for (double ridge : spec.ridge_grid) {
            auto s = solve_regularized(gram_fit, rhs, ridge);
            ridge_score score{ridge, std::numeric_limits<double>::quiet_NaN(), !s.ok};
            if (s.ok) {
                Eigen::MatrixXd pred = x.bottomRows(n_val) * s.w;
                if (spec.include_bias)
                    pred.rowwise() += y_fit_mean;
                score.validation_nmse = block_nmse(pred, y.bottomRows(n_val));
                if (score.validation_nmse < best) {
                    best = score.validation_nmse;
                    chosen = ridge;
                    any = true;
                }
            }
            out.scores.push_back(score);
        }
        if (!any)
            throw training_error("train_ridge: every ridge grid point was singular or non-finite");
    }

    // refit on the whole training block
    Eigen::MatrixXd gram = gram_fit;
    Eigen::RowVectorXd y_mean = Eigen::RowVectorXd::Zero(y.cols());
    Eigen::MatrixXd yc = y;
    if (n_val > 0)
        gram += gram_of(x.bottomRows(n_val));
    Eigen::RowVectorXd shift = Eigen::RowVectorXd::Zero(p);
    if (spec.include_bias) {
        shift = x.colwise().mean();
        gram.noalias() -= static_cast<double>(n) * shift.transpose() * shift;
        y_mean = y.colwise().mean();
        yc.rowwise() -= y_mean;
    }
    const Eigen::MatrixXd rhs = x.transpose() * yc;
    // candidates in order of validation score; a refit may still be singular on the full block
    std::vector<double> order{chosen};
    if (n_val > 0) {
        std::vector<ridge_score> ranked;
        for (const auto& sc : out.scores)
            if (!sc.singular && sc.ridge != chosen)
                ranked.push_back(sc);
        std::stable_sort(ranked.begin(), ranked.end(),
                         [](const ridge_score& a, const ridge_score& b) { return a.validation_nmse < b.validation_nmse; });
        for (const auto& sc : ranked)
            order.push_back(sc.ridge);
    }
    solve_result s;
    for (double ridge : order) {
        s = solve_regularized(gram, rhs, ridge);
        if (s.ok) {
            chosen = ridge;
            break;
        }
    }
    if (!s.ok) {
        if (n_val == 0)
            out.scores.push_back({chosen, std::numeric_limits<double>::quiet_NaN(), true});
        throw training_error("train_ridge: the regularized system is singular for every candidate ridge");
    }

    out.ridge = chosen;
    out.matrix.resize(p + (spec.include_bias ? 1 : 0), y.cols());
    out.matrix.topRows(p) = s.w;
    if (spec.include_bias)
        out.matrix.row(p) = y_mean - (mu + shift) * s.w;
    if (!out.matrix.allFinite())
        throw training_error("train_ridge: non-finite weights");
    return out;
}

timeseries predict(const state_matrix& states, const readout_weights& weights, double sample_interval)
{
    if (states.cols() != weights.n_features())
        throw argument_error("predict: state columns (" + std::to_string(states.cols()) +
                             ") do not match weight rows (" + std::to_string(weights.n_features()) + ")");
    Eigen::MatrixXd y = states.entries() * weights.matrix.topRows(weights.n_features());
    if (weights.include_bias)
        y.rowwise() += weights.matrix.row(weights.n_features());
    timeseries out(static_cast<std::size_t>(y.cols()), sample_interval);
    out.reserve(static_cast<std::size_t>(y.rows()));
    std::vector<double> buf(static_cast<std::size_t>(y.cols()));
    for (Eigen::Index r = 0; r < y.rows(); ++r) {
        for (Eigen::Index c = 0; c < y.cols(); ++c)
            buf[static_cast<std::size_t>(c)] = y(r, c);
        out.push_back(buf);
    }
    return out;
}

double nmse(const timeseries& prediction, const timeseries& target)
{
    if (prediction.size() != target.size() || prediction.dim() != target.dim())
        throw argument_error("nmse: prediction and target shapes differ");
    if (target.size() < 2)
        throw argument_error("nmse: needs at least two samples");
    double acc = 0.0;
    for (std::size_t c = 0; c < target.dim(); ++c) {
        const auto t = target.column(c);
        const double sd = stddev(t);
        if (!(sd > 0.0))
            throw degenerate_error("nmse: target has zero variance");
        double se = 0.0;
        for (std::size_t n = 0; n < t.size(); ++n) {
            const double e = t[n] - prediction(n, c);
            se += e * e;
        }
        acc += se / static_cast<double>(t.size()) / (sd * sd);
    }
    return acc / static_cast<double>(target.dim());
}

eval_report evaluate_readout(const state_matrix& states, const timeseries& target, const readout_weights& weights,
                             const train_spec& spec, int n_test)
{
    const auto dn = static_cast<std::size_t>(spec.delta_n);
    const auto n_train = static_cast<std::size_t>(spec.n_train);
    const std::size_t rows_with_target =
        std::min(static_cast<std::size_t>(states.rows()), target.size() > dn ? target.size() - dn : 0);
    if (rows_with_target <= n_train + 1)
        throw argument_error("evaluate_readout: no test rows after the training block");
    std::size_t test = rows_with_target - n_train;
    if (n_test > 0)
        test = std::min(test, static_cast<std::size_t>(n_test));

    eval_report r;
    r.chosen_ridge = weights.ridge;
    r.n_test = static_cast<int>(test);
    const auto pred_train = predict(states.row_slice(0, static_cast<Eigen::Index>(n_train)), weights);
    const auto pred_test = predict(
        states.row_slice(static_cast<Eigen::Index>(n_train), static_cast<Eigen::Index>(test)), weights);
    r.nmse_train = nmse(pred_train, target.slice(dn, n_train));
    r.nmse_test = nmse(pred_test, target.slice(dn + n_train, test));
    return r;
}

void write_binary(const readout_weights& w, const std::filesystem::path& path)
{
    atomic_file f(path, true);
    auto& out = f.stream();
    out.write("DTDRWT01", 8);
    binio::put<std::uint64_t>(out, static_cast<std::uint64_t>(w.matrix.rows()));
    binio::put<std::uint64_t>(out, static_cast<std::uint64_t>(w.matrix.cols()));
    binio::put<std::uint8_t>(out, w.include_bias ? 1 : 0);
    binio::put<double>(out, w.ridge);
    binio::put<std::uint64_t>(out, w.seed);
    binio::put<std::uint64_t>(out, static_cast<std::uint64_t>(w.n_train));
    for (Eigen::Index r = 0; r < w.matrix.rows(); ++r)
        for (Eigen::Index c = 0; c < w.matrix.cols(); ++c)
            binio::put<double>(out, w.matrix(r, c));
    f.commit();
}

readout_weights read_weights(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw io_error("cannot open " + path.string());
    binio::expect_magic(in, "DTDRWT01", path);
    readout_weights w;
    const auto rows = binio::get<std::uint64_t>(in);
    const auto cols = binio::get<std::uint64_t>(in);
    w.include_bias = binio::get<std::uint8_t>(in) != 0;
    w.ridge = binio::get<double>(in);
    w.seed = binio::get<std::uint64_t>(in);
    w.n_train = static_cast<int>(binio::get<std::uint64_t>(in));
    binio::check_stream(in, path);
    if (rows > (1u << 24) || cols > (1u << 16))
        throw io_error(path.string() + ": implausible weight shape");
    w.matrix.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index r = 0; r < w.matrix.rows(); ++r)
        for (Eigen::Index c = 0; c < w.matrix.cols(); ++c)
            w.matrix(r, c) = binio::get<double>(in);
    binio::check_stream(in, path);
    return w;
}

std::string weights_summary_json(const readout_weights& w, const eval_report& report)
{
    nlohmann::json j;
    j["chosen_ridge"] = w.ridge;
    j["n_features"] = w.n_features();
    j["n_outputs"] = w.n_outputs();
    j["include_bias"] = w.include_bias;
    j["n_train"] = w.n_train;
    j["seed"] = w.seed;
    j["nmse_train"] = report.nmse_train;
    j["nmse_test"] = report.nmse_test;
    j["n_test"] = report.n_test;
    auto& scores = j["ridge_scores"] = nlohmann::json::array();
    for (const auto& s : w.scores)
        scores.push_back({{"ridge", s.ridge},
                          {"validation_nmse", s.singular ? nlohmann::json(nullptr) : nlohmann::json(s.validation_nmse)},
                          {"singular", s.singular}});
    return j.dump(2) + "\n";
}

} // namespace dtdr
