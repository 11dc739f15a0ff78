#include "dtdr/autonomy.hpp"

#include "dtdr/error.hpp"
#include "dtdr/io_util.hpp"
#include "dtdr/simulate.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

namespace dtdr {

embedding_spec default_embedding(chaos_system system)
{
    return system == chaos_system::mackey_glass ? embedding_spec{3, 17} : embedding_spec{3, 3};
}

autonomous_run run_autonomous(const network_config& config, const readout_weights& weights,
                              const timeseries& warmup, int n_steps, const autonomous_options& opts)
{
    if (weights.n_outputs() != 1)
        throw argument_error("run_autonomous: the readout must have exactly one output");
    if (warmup.dim() != 1 || warmup.empty())
        throw argument_error("run_autonomous: warmup must be a non-empty scalar series");
    if (n_steps < 1)
        throw argument_error("run_autonomous: n_steps must be >= 1");

    simulator sim(config);
    if (weights.n_features() != sim.total_nodes())
        throw argument_error("run_autonomous: readout does not match the network size");

    const Eigen::VectorXd w = weights.matrix.col(0).head(weights.n_features());
    const double bias = weights.include_bias ? weights.matrix(weights.n_features(), 0) : 0.0;
    Eigen::VectorXd row(sim.total_nodes());
    auto readout = [&](double in) {
        sim.step(in, std::span<double>(row.data(), static_cast<std::size_t>(row.size())));
        return w.dot(row) + bias;
    };

    const auto wu = warmup.column(0);
    const auto [lo, hi] = std::minmax_element(wu.begin(), wu.end());
    const double centre = 0.5 * (*lo + *hi);
    const double bound = opts.escape_factor * std::max(*hi - *lo, 1e-12);

    double y = 0.0;
    for (double s : wu)
        y = readout(s);

    autonomous_run out;
    out.output = timeseries(1, warmup.sample_interval());
    out.output.reserve(static_cast<std::size_t>(n_steps));
    out.output.push_back(y);
    for (int k = 1; k < n_steps; ++k) {
        if (!std::isfinite(y) || std::abs(y - centre) > bound) {
            out.escaped = true;
            break;
        }
        out.injected.push_back(y);
        y = readout(y);
        out.output.push_back(y);
    }
    if (!out.escaped && (!std::isfinite(y) || std::abs(y - centre) > bound))
        out.escaped = true;
    return out;
}

Eigen::MatrixXd takens_embed(const timeseries& series, const embedding_spec& spec)
{
    if (spec.dimension < 1 || spec.lag < 1)
        throw argument_error("takens_embed: dimension and lag must be >= 1");
    if (series.dim() != 1)
        throw argument_error("takens_embed: series must be scalar");
    const auto span = static_cast<std::size_t>((spec.dimension - 1) * spec.lag);
    if (series.size() < span + 1)
        throw argument_error("takens_embed: series shorter than (m - 1) * lag + 1");
    const auto n = static_cast<Eigen::Index>(series.size() - span);
    Eigen::MatrixXd out(n, spec.dimension);
    for (Eigen::Index r = 0; r < n; ++r)
        for (int c = 0; c < spec.dimension; ++c)
            out(r, c) = series(static_cast<std::size_t>(r) + span - static_cast<std::size_t>(c * spec.lag));
    return out;
}

divergence_curve_t divergence_curve(const timeseries& prediction, const timeseries& target,
                                    const embedding_spec& spec, double lyapunov_max)
{
    if (prediction.size() != target.size())
        throw argument_error("divergence_curve: prediction and target lengths differ");
    const auto a = takens_embed(prediction, spec);
    const auto b = takens_embed(target, spec);
    divergence_curve_t c;
    c.lyapunov_max = lyapunov_max;
    c.sample_interval = target.sample_interval();
    c.distance.resize(static_cast<std::size_t>(a.rows()));
    for (Eigen::Index r = 0; r < a.rows(); ++r)
        c.distance[static_cast<std::size_t>(r)] = (a.row(r) - b.row(r)).norm();
    c.attractor_diameter = (b.colwise().maxCoeff() - b.colwise().minCoeff()).maxCoeff();
    return c;
}

valid_time_result valid_time(const divergence_curve_t& curve, double threshold_fraction)
{
    const double threshold = threshold_fraction * curve.attractor_diameter;
    valid_time_result r;
    r.steps = curve.size();
    for (std::size_t k = 0; k < curve.size(); ++k)
        if (curve.distance[k] > threshold) {
            r.steps = k;
            r.exceeded = true;
            break;
        }
    r.lyapunov_times = static_cast<double>(r.steps) * curve.sample_interval * curve.lyapunov_max;
    return r;
}

saturation_result detect_saturation(const divergence_curve_t& curve, double threshold_fraction)
{
    saturation_result r;
    if (curve.size() < 2 || !(curve.attractor_diameter > 0.0))
        return r;
    const std::size_t half = curve.size() / 2;
    double acc = 0.0;
    for (std::size_t k = half; k < curve.size(); ++k)
        acc += curve.distance[k];
    r.late_mean_fraction = acc / static_cast<double>(curve.size() - half) / curve.attractor_diameter;
    r.saturated = r.late_mean_fraction >= threshold_fraction;
    return r;
}

autonomy_report evaluate_autonomy(const network_config& config, const prepared_task& task,
                                  const autonomy_options& opts)
{
    if (task.spec.train.delta_n != 1)
        throw argument_error("evaluate_autonomy: the readout must be trained with delta_n = 1");
    const auto start = static_cast<std::size_t>(task.washout_steps + task.spec.train.n_train);
    const auto warm = static_cast<std::size_t>(opts.warmup_steps);
    if (warm < 1 || warm > start)
        throw argument_error("evaluate_autonomy: warmup_steps must lie in [1, washout + n_train]");
    if (start + static_cast<std::size_t>(opts.n_steps) > task.input.size())
        throw argument_error("evaluate_autonomy: task series too short for n_steps (raise n_test)");

    autonomy_report r;
    r.threshold_fraction = opts.threshold_fraction;
    r.embedding = opts.embedding_set ? opts.embedding : default_embedding(task.spec.system);
    const auto trained = run_task(config, task);
    r.open_loop = trained.report;

    r.run = run_autonomous(config, trained.weights, task.input.slice(start - warm, warm), opts.n_steps, opts.run);
    const std::size_t produced = r.run.output.size();
    r.target = task.input.slice(start, static_cast<std::size_t>(opts.n_steps));

    // prefix both with the shared teacher samples so the first embedded point is step 1
    const auto span = static_cast<std::size_t>((r.embedding.dimension - 1) * r.embedding.lag);
    if (span > start)
        throw argument_error("evaluate_autonomy: embedding span exceeds available history");
    timeseries pred(1, task.input.sample_interval());
    timeseries targ(1, task.input.sample_interval());
    for (std::size_t k = start - span; k < start; ++k) {
        pred.push_back(task.input(k));
        targ.push_back(task.input(k));
    }
    for (std::size_t k = 0; k < static_cast<std::size_t>(opts.n_steps); ++k) {
        // an escaped run counts as maximally wrong for the rest of the horizon
        const double p = k < produced ? r.run.output(k) : std::numeric_limits<double>::quiet_NaN();
        pred.push_back(std::isfinite(p) ? p : 1e6);
        targ.push_back(r.target(k));
    }
    const double lyap = task.spec.system == chaos_system::mackey_glass ? lyapunov_mackey_glass : lyapunov_lorenz;
    r.curve = divergence_curve(pred, targ, r.embedding, lyap);
    r.valid = valid_time(r.curve, opts.threshold_fraction);
    r.saturation = detect_saturation(r.curve, opts.threshold_fraction);
    return r;
}

std::string autonomy_json(const autonomy_report& r)
{
    nlohmann::json j;
    j["lyapunov_max"] = r.curve.lyapunov_max;
    j["sample_interval"] = r.curve.sample_interval;
    j["threshold_fraction"] = r.threshold_fraction;
    j["attractor_diameter"] = r.curve.attractor_diameter;
    j["valid_time_steps"] = r.valid.steps;
    j["valid_time_lyapunov"] = r.valid.lyapunov_times;
    j["threshold_exceeded"] = r.valid.exceeded;
    j["saturated"] = r.saturation.saturated;
    j["late_mean_fraction"] = r.saturation.late_mean_fraction;
    j["escaped"] = r.run.escaped;
    j["embedding"] = {{"dimension", r.embedding.dimension}, {"lag", r.embedding.lag}};
    j["open_loop"] = {{"nmse_train", r.open_loop.nmse_train},
                      {"nmse_test", r.open_loop.nmse_test},
                      {"chosen_ridge", r.open_loop.chosen_ridge}};
    return j.dump(2) + "\n";
}

void write_divergence_csv(const divergence_curve_t& curve, const std::filesystem::path& path)
{
    atomic_file f(path);
    f.stream() << "n,distance\n";
    for (std::size_t k = 0; k < curve.size(); ++k)
        f.stream() << k + 1 << ',' << format_double(curve.distance[k]) << '\n';
    f.commit();
}

void write_autonomous_csv(const autonomy_report& r, const std::filesystem::path& path)
{
    atomic_file f(path);
    f.stream() << "n,prediction,target\n";
    for (std::size_t k = 0; k < r.target.size(); ++k) {
        f.stream() << k + 1 << ',';
        if (k < r.run.output.size())
            f.stream() << format_double(r.run.output(k));
        f.stream() << ',' << format_double(r.target(k)) << '\n';
    }
    f.commit();
}

} // namespace dtdr
