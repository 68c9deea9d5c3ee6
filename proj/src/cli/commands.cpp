#include "qtt/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <thread>

#include "qtt/cli/artifacts.hpp"
#include "qtt/constants.hpp"
#include "qtt/error.hpp"
#include "qtt/metrology.hpp"
#include "qtt/montecarlo.hpp"
#include "qtt/random.hpp"

namespace qtt::cli {

namespace {

constexpr double kDetectionTime = 1.0;

double photons_per_second(const RunConfig& cfg, double power_w) {
    return metrology::effective_photons(power_w, cfg.comb.lambda0_m, kDetectionTime, cfg.chain.eta_tot())
        .n_eff;
}

std::vector<double> axis_values(double from, double to, std::size_t points, bool log) {
    std::vector<double> v(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double t = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
        v[i] = log ? std::exp(std::log(from) + t * (std::log(to) - std::log(from)))
                   : from + t * (to - from);
    }
    return v;
}

void add(CommandResult& r, const RunConfig& cfg, const std::string& stem, const CsvTable* csv,
         const SvgPlot* svg) {
    if (cfg.emit_csv && csv) r.artifacts.push_back({stem + ".csv", csv->render()});
    if (cfg.emit_svg && svg) r.artifacts.push_back({stem + ".svg", svg->render()});
}

// Deterministic parallel map: f(i) for i in [0, n), result i stored at i.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, unsigned threads, F f) {
    std::vector<T> out(n);
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) out[i] = f(i);
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    return out;
}

std::string du_cell_or(const std::optional<double>& v) {
    return v ? format_number(*v) : std::string("unresolved");
}

}  // namespace

std::optional<SweepAxis> parse_sweep_axis(std::string_view name) {
    if (name == "power_uw") return SweepAxis::PowerUw;
    if (name == "squeeze_db") return SweepAxis::SqueezeDb;
    if (name == "pump_rate") return SweepAxis::PumpRate;
    if (name == "omega_rad_s") return SweepAxis::OmegaRadS;
    return std::nullopt;
}

CommandResult cmd_sql(const RunConfig& cfg) {
    const auto spectral = comb::derive_spectral(cfg.comb);
    const double applied = metrology::pzt_to_delay(cfg.experiment.applied_volts, cfg.experiment.pzt_coeff_s_per_v);
    // Measured coherent baseline at the configured signal power.
    std::optional<double> baseline;
    if (applied > 0.0) {
        baseline = metrology::du_min_from_experiment(applied, cfg.sql.reference_sigma, cfg.experiment.rbw_hz);
    }

    CsvTable table("sql",
                   {"power_W", "squeeze_dB", "eta_tot", "n_eff_per_s", "sql_tof_s_per_rtHz",
                    "sql_ph_s_per_rtHz", "sql_combined_s_per_rtHz", "min_detectable_du_s_per_rtHz",
                    "du_projected_s_per_rtHz"});
    for (double power : cfg.sql.powers_w) {
        const double n = photons_per_second(cfg, power);
        for (double db : cfg.sql.squeeze_db) {
            const double var_p0 = squeezing::squeezing_db_to_variance(db);
            const double du = metrology::min_detectable_du(n, spectral, var_p0, 1.0);
            CsvTable::Cell projected = std::string("n/a");
            if (baseline) {
                const double at_power = *baseline * std::sqrt(cfg.comb.power_w / power);
                projected = metrology::scale_to_squeezing(at_power, spectral.alpha, var_p0, 1.0);
            }
            table.add_row({power, db, cfg.chain.eta_tot(), n, metrology::sql_tof(n, spectral.domega),
                           metrology::sql_ph(n, spectral.omega0),
                           metrology::sql_combined(n, spectral.omega0, spectral.domega), du, projected});
        }
    }
    CommandResult r;
    r.stdout_text = table.render();
    add(r, cfg, "sql", &table, nullptr);
    return r;
}

CommandResult cmd_squeeze_spectrum(const RunConfig& cfg) {
    const auto spopo = cfg.spopo_params();
    const auto& q = cfg.squeeze_spectrum;
    const auto omegas = axis_values(q.omega_min_rad_s, q.omega_max_rad_s, q.points, true);

    CsvTable table("squeeze_spectrum",
                   {"mode_k", "omega_rad_s", "var_p", "var_q", "var_p_dB", "var_q_dB", "quadrature_swapped"});
    SvgPlot plot{"Quadrature variances vs analysis frequency", "analysis frequency (rad/s)",
                 "variance (dB re shot noise)", true, {}};
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    std::size_t c = 0;
    for (std::size_t k : q.modes) {
        SvgSeries sp{"k=" + std::to_string(k) + " P", omegas, {}, colors[c % 6], false};
        SvgSeries sq{"k=" + std::to_string(k) + " Q", omegas, {}, colors[c % 6], true};
        ++c;
        for (double w : omegas) {
            const auto pair = squeezing::quadrature_variances(k, w, spopo, cfg.chain);
            const double pdb = squeezing::variance_to_db(pair.var_p);
            const double qdb = squeezing::variance_to_db(pair.var_q);
            table.add_row({static_cast<long long>(k), w, pair.var_p, pair.var_q, pdb, qdb,
                           static_cast<long long>(pair.quadrature_swapped)});
            sp.y.push_back(pdb);
            sq.y.push_back(qdb);
        }
        plot.series.push_back(std::move(sp));
        plot.series.push_back(std::move(sq));
    }
    CommandResult r;
    r.stdout_text = table.render();
    add(r, cfg, "squeeze_spectrum", &table, &plot);
    return r;
}

CommandResult cmd_phase_scan(const RunConfig& cfg) {
    const auto pair = cfg.phase_scan_pair();
    const auto trace = montecarlo::phase_scan(pair, cfg.phase_scan.scan, cfg.seed);

    CsvTable table("phase_scan", {"time_s", "theta_rad", "variance", "variance_dB"});
    SvgPlot plot{"Quadrature variance during LO phase scan", "time (s)", "variance (dB re shot noise)",
                 false, {}};
    SvgSeries data{"measured", trace.time, {}, "#d62728", false};
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < trace.time.size(); ++i) {
        const double db = squeezing::variance_to_db(trace.variance[i]);
        table.add_row({trace.time[i], trace.theta[i], trace.variance[i], db});
        data.y.push_back(db);
        lo = std::min(lo, db);
        hi = std::max(hi, db);
    }
    SvgSeries shot{"shot noise", {trace.time.front(), trace.time.back()}, {0.0, 0.0}, "#000000", true};
    plot.series = {data, shot};

    CsvTable summary("phase_scan_summary",
                     {"var_p", "var_q", "var_p_dB", "var_q_dB", "trace_min_dB", "trace_max_dB", "seed"});
    summary.add_row({pair.var_p, pair.var_q, squeezing::variance_to_db(pair.var_p),
                     squeezing::variance_to_db(pair.var_q), lo, hi, std::to_string(cfg.seed)});

    CommandResult r;
    r.stdout_text = summary.render();
    add(r, cfg, "phase_scan", &table, &plot);
    add(r, cfg, "phase_scan_summary", &summary, nullptr);
    return r;
}

CommandResult cmd_timing(const RunConfig& cfg) {
    const auto scenario = cfg.scenario();
    const auto run = montecarlo::run_timing_detailed(scenario);
    const auto& res = run.result;

    CsvTable table("timing",
                   {"state", "var_p0", "var_q1", "applied_du_s", "sigma", "sa_improvement_dB",
                    "du_min_s_per_rtHz", "du_min_analytic_s_per_rtHz", "sigma_analytic", "sql_ref_s_per_rtHz",
                    "seed"});
    const bool coherent = scenario.state.kind == montecarlo::QuantumState::Kind::Coherent;
    table.add_row({std::string(coherent ? "coherent" : "squeezed"), scenario.state.var_p0, scenario.state.var_q1,
                   scenario.modulation.applied_du_s, res.sigma, res.sa_improvement_db, du_cell_or(res.du_min),
                   res.du_min_analytic, res.sigma_analytic, res.sql_ref, std::to_string(cfg.seed)});

    CsvTable spec_table("timing_spectrum", {"frequency_Hz", "power", "power_dB"});
    SvgPlot plot{"Homodyne spectrum (RBW " + format_number(scenario.sa.rbw_hz) + " Hz)", "frequency (Hz)",
                 "power (dB re shot noise)", false, {}};
    SvgSeries s{coherent ? "coherent" : "squeezed", {}, {}, coherent ? "#d62728" : "#1f77b4", false};
    for (std::size_t k = 1; k < run.spectrum.power.size(); ++k) {
        const double p = run.spectrum.power[k];
        const double db = p > 0.0 ? 10.0 * std::log10(p) : -std::numeric_limits<double>::infinity();
        spec_table.add_row({run.spectrum.frequencies[k], p, db});
        s.x.push_back(run.spectrum.frequencies[k]);
        s.y.push_back(db);
    }
    plot.series = {s, SvgSeries{"shot noise", {s.x.front(), s.x.back()}, {0.0, 0.0}, "#000000", true}};

    CommandResult r;
    r.stdout_text = table.render();
    add(r, cfg, "timing", &table, nullptr);
    add(r, cfg, "timing_spectrum", &spec_table, &plot);
    return r;
}

void validate_sweep(const RunConfig& cfg, const SweepSpec& sweep) {
    if (!sweep.axis) throw ConfigError("sweep: --axis is required (power_uw, squeeze_db, pump_rate, omega_rad_s)");
    if (sweep.points == 0) throw ConfigError("sweep: axis is empty (--points must be >= 1)");
    if (!std::isfinite(sweep.from) || !std::isfinite(sweep.to)) throw ConfigError("sweep: non-finite range");
    if (sweep.log && (sweep.from <= 0.0 || sweep.to <= 0.0)) {
        throw ConfigError("sweep: log spacing needs a positive range");
    }
    const double lo = std::min(sweep.from, sweep.to);
    const double hi = std::max(sweep.from, sweep.to);
    switch (*sweep.axis) {
        case SweepAxis::PowerUw:
            if (lo <= 0.0) throw ConfigError("sweep: power must be > 0");
            break;
        case SweepAxis::SqueezeDb:
            if (lo < 0.0) throw ConfigError("sweep: squeeze_db must be >= 0");
            break;
        case SweepAxis::PumpRate:
            if (lo < 0.0 || hi >= 1.0) throw ConfigError("sweep: pump_rate must be in [0,1)");
            break;
        case SweepAxis::OmegaRadS:
            if (lo < 0.0) throw ConfigError("sweep: omega must be >= 0");
            break;
    }
    if (sweep.threads == 0) throw ConfigError("sweep: --threads must be >= 1");
    (void)cfg;
}

CommandResult cmd_sweep(const RunConfig& cfg, const SweepSpec& sweep) {
    validate_sweep(cfg, sweep);
    const auto values = axis_values(sweep.from, sweep.to, sweep.points, sweep.log);
    const auto spectral = comb::derive_spectral(cfg.comb);
    const SweepAxis axis = *sweep.axis;

    struct Point {
        double power_w;
        double var_p0;
        double var_q1;
    };
    auto point_at = [&](double v) {
        Point p{cfg.comb.power_w, cfg.state().var_p0, cfg.state().var_q1};
        if (axis == SweepAxis::PowerUw) p.power_w = v * 1e-6;
        if (axis == SweepAxis::SqueezeDb) p.var_p0 = squeezing::squeezing_db_to_variance(v);
        if (axis == SweepAxis::PumpRate || axis == SweepAxis::OmegaRadS) {
            auto spopo = cfg.spopo_params();
            double omega = 2.0 * constants::pi * cfg.experiment.modulation_hz;
            if (axis == SweepAxis::PumpRate) spopo.r = v;
            if (axis == SweepAxis::OmegaRadS) omega = v;
            p.var_p0 = squeezing::quadrature_variances(0, omega, spopo, cfg.chain).var_p;
            p.var_q1 = spopo.lambda_ratios.size() > 1
                           ? squeezing::quadrature_variances(1, omega, spopo, cfg.chain).var_q
                           : 1.0;
        }
        return p;
    };

    static const char* names[] = {"power_W", "squeeze_dB", "pump_rate", "omega_rad_s"};
    std::vector<std::string> cols{names[static_cast<int>(axis)], "var_p0", "var_q1", "sql_combined_s_per_rtHz",
                                  "du_min_s_per_rtHz"};
    if (sweep.monte_carlo) {
        cols.insert(cols.end(), {"sigma", "du_min_mc_s_per_rtHz", "seed"});
    }
    CsvTable table("sweep", cols);

    std::vector<metrology::TimingResult> mc;
    std::vector<std::uint64_t> seeds(values.size());
    if (sweep.monte_carlo) {
        for (std::size_t i = 0; i < values.size(); ++i) seeds[i] = random::stream_seed(cfg.seed, i);
        mc = parallel_map<metrology::TimingResult>(values.size(), sweep.threads, [&](std::size_t i) {
            const Point p = point_at(values[i]);
            auto s = cfg.scenario();
            s.comb.power_w = p.power_w;
            s.state = montecarlo::QuantumState::squeezed(p.var_p0, p.var_q1);
            s.rng_seed = seeds[i];
            return montecarlo::run_timing_experiment(s);
        });
    }

    SvgPlot plot{"Minimum detectable delay", names[static_cast<int>(axis)], "log10 du_min (s/rtHz)",
                 axis == SweepAxis::PowerUw || axis == SweepAxis::OmegaRadS, {}};
    SvgSeries analytic{"analytic", {}, {}, "#1f77b4", false};
    for (std::size_t i = 0; i < values.size(); ++i) {
        const Point p = point_at(values[i]);
        const double n = photons_per_second(cfg, p.power_w);
        const double axis_si = axis == SweepAxis::PowerUw ? p.power_w : values[i];
        const double du = metrology::min_detectable_du(n, spectral, p.var_p0, p.var_q1);
        std::vector<CsvTable::Cell> row{axis_si, p.var_p0, p.var_q1,
                                        metrology::sql_combined(n, spectral.omega0, spectral.domega), du};
        if (sweep.monte_carlo) {
            row.emplace_back(mc[i].sigma);
            row.emplace_back(du_cell_or(mc[i].du_min));
            row.emplace_back(std::to_string(seeds[i]));
        }
        table.add_row(std::move(row));
        analytic.x.push_back(axis_si);
        analytic.y.push_back(std::log10(du));
    }
    plot.series.push_back(analytic);

    CommandResult r;
    r.stdout_text = table.render();
    add(r, cfg, "sweep", &table, &plot);
    return r;
}

void write_artifacts(const CommandResult& result, const RunConfig& cfg) {
    if (result.artifacts.empty()) return;
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    for (const auto& a : result.artifacts) {
        std::ofstream out(fs::path(cfg.out_dir) / a.filename, std::ios::binary);
        if (!out) throw Error("cannot write " + (fs::path(cfg.out_dir) / a.filename).string());
        out << a.content;
    }
}

}  // namespace qtt::cli
