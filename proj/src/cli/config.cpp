#include "qtt/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "qtt/error.hpp"
#include "qtt/metrology.hpp"
#include "qtt/constants.hpp"

namespace qtt::cli {

namespace detail {
struct EmbeddedPreset {
    const char* name;
    const char* text;
};
// Generated at configure time from presets/*.json.
extern const EmbeddedPreset kPresets[];
extern const std::size_t kPresetCount;
}  // namespace detail

namespace {

using nlohmann::json;

// Reads keys from one JSON object and remembers which were consumed so that
// typos surface as errors instead of silently falling back to defaults.
class Section {
public:
    Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
        if (!j_.is_object()) throw ConfigError("config: section '" + name_ + "' must be an object");
    }

    template <class T>
    bool get(const char* key, T& out) {
        auto it = j_.find(key);
        if (it == j_.end()) return false;
        seen_.insert(key);
        try {
            out = it->get<T>();
        } catch (const json::exception&) {
            throw ConfigError("config: " + name_ + "." + key + " has the wrong type");
        }
        return true;
    }

    /// Numeric key converted to SI by `scale`.
    bool get_scaled(const char* key, double& out, double scale) {
        double v = 0.0;
        if (!get(key, v)) return false;
        out = v * scale;
        return true;
    }

    bool get_scaled(const char* key, std::optional<double>& out, double scale) {
        double v = 0.0;
        if (!get_scaled(key, v, scale)) return false;
        out = v;
        return true;
    }

    bool has(const char* key) const { return j_.contains(key); }

    const json& sub(const char* key) {
        seen_.insert(key);
        return j_.at(key);
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.count(it.key())) {
                throw ConfigError("config: unknown key '" + name_ + "." + it.key() + "'");
            }
        }
    }

private:
    const json& j_;
    std::string name_;
    std::set<std::string> seen_;
};

void read_comb(Section s, comb::CombParams& c) {
    s.get_scaled("lambda0_nm", c.lambda0_m, 1e-9);
    s.get_scaled("dt_fwhm_fs", c.dt_fwhm_s, 1e-15);
    s.get_scaled("rep_rate_mhz", c.rep_rate_hz, 1e6);
    s.get_scaled("power_uw", c.power_w, 1e-6);
    s.finish();
}

void read_spopo(Section s, SpopoConfig& c) {
    s.get("zeta", c.zeta);
    s.get_scaled("gamma_s_rad_s", c.gamma_s_rad_s, 1.0);
    s.get("finesse", c.finesse);
    s.get_scaled("pump_rate", c.pump_rate, 1.0);
    s.get_scaled("pump_mw", c.pump_w, 1e-3);
    s.get_scaled("threshold_mw", c.threshold_w, 1e-3);
    s.get("lambda_ratios", c.lambda_ratios);
    s.finish();
}

void read_chain(Section s, squeezing::DetectionChain& c) {
    s.get("rho", c.rho);
    s.get("eta", c.eta);
    s.get("xi", c.xi);
    double total = 0.0;
    if (s.has("eta_tot") && s.sub("eta_tot").is_null()) {
        c.eta_tot_override.reset();
    } else if (s.get("eta_tot", total)) {
        c.eta_tot_override = total;
    }
    s.finish();
}

void read_experiment(Section s, ExperimentConfig& c) {
    std::string state;
    if (s.get("state", state)) {
        if (state == "coherent") {
            c.state = montecarlo::QuantumState::Kind::Coherent;
        } else if (state == "squeezed") {
            c.state = montecarlo::QuantumState::Kind::Squeezed;
        } else {
            throw ConfigError("config: experiment.state must be 'coherent' or 'squeezed'");
        }
    }
    s.get("squeeze_db", c.squeeze_db);
    s.get("var_q1", c.var_q1);
    s.get_scaled("modulation_mhz", c.modulation_hz, 1e6);
    s.get("applied_volts", c.applied_volts);
    s.get("pzt_coeff_s_per_v", c.pzt_coeff_s_per_v);
    s.get_scaled("rbw_khz", c.rbw_hz, 1e3);
    s.get("n_averages", c.n_averages);
    s.get_scaled("sample_rate_mhz", c.sample_rate_hz, 1e6);
    s.get("duration_s", c.duration_s);
    s.finish();
}

void read_phase_scan(Section s, PhaseScanConfig& c) {
    std::string source;
    if (s.get("source", source)) {
        if (source == "levels") {
            c.source = PhaseScanConfig::Source::Levels;
        } else if (source == "spopo") {
            c.source = PhaseScanConfig::Source::Spopo;
        } else {
            throw ConfigError("config: phase_scan.source must be 'levels' or 'spopo'");
        }
    }
    s.get("var_p_db", c.var_p_db);
    s.get("var_q_db", c.var_q_db);
    s.get_scaled("analysis_mhz", c.analysis_hz, 1e6);
    s.get("mode", c.mode);
    s.get("periods", c.scan.periods);
    s.get("points_per_period", c.scan.points_per_period);
    s.get("draws_per_point", c.scan.draws_per_point);
    s.get_scaled("period_ms", c.scan.period_s, 1e-3);
    s.finish();
}

void read_squeeze_spectrum(Section s, SqueezeSpectrumConfig& c) {
    s.get("omega_min_rad_s", c.omega_min_rad_s);
    s.get("omega_max_rad_s", c.omega_max_rad_s);
    s.get("points", c.points);
    s.get("modes", c.modes);
    s.finish();
}

void read_sql(Section s, SqlConfig& c) {
    std::vector<double> uw;
    if (s.get("powers_uw", uw)) {
        c.powers_w.clear();
        for (double p : uw) c.powers_w.push_back(p * 1e-6);
    }
    s.get("squeeze_db", c.squeeze_db);
    s.get("reference_sigma", c.reference_sigma);
    s.finish();
}

void read_output(Section s, RunConfig& cfg) {
    s.get("dir", cfg.out_dir);
    std::vector<std::string> emit;
    if (s.get("emit", emit)) {
        std::string joined;
        for (const auto& e : emit) joined += (joined.empty() ? "" : ",") + e;
        apply_emit_list(cfg, joined);
    }
    s.get("seed", cfg.seed);
    s.finish();
}

// Wraps module validation so every failure surfaces as a ConfigError.
template <class F>
void check(const char* section, F&& f) {
    try {
        f();
    } catch (const qtt::Error& e) {
        throw ConfigError(std::string("config [") + section + "]: " + e.what());
    }
}

}  // namespace

squeezing::SpopoParams RunConfig::spopo_params() const {
    squeezing::SpopoParams p;
    p.zeta = spopo.zeta;
    p.gamma_s = spopo.gamma_s_rad_s ? *spopo.gamma_s_rad_s
                                    : squeezing::cavity_decay_rate(comb.rep_rate_hz, spopo.finesse);
    p.r = spopo.pump_rate ? *spopo.pump_rate : squeezing::pump_rate(spopo.pump_w, spopo.threshold_w);
    p.lambda_ratios = spopo.lambda_ratios;
    return p;
}

montecarlo::QuantumState RunConfig::state() const {
    if (experiment.state == montecarlo::QuantumState::Kind::Coherent) {
        return montecarlo::QuantumState::coherent();
    }
    return montecarlo::QuantumState::squeezed(squeezing::squeezing_db_to_variance(experiment.squeeze_db),
                                              experiment.var_q1);
}

montecarlo::ExperimentScenario RunConfig::scenario() const {
    montecarlo::ExperimentScenario s;
    s.comb = comb;
    s.chain = chain;
    s.state = state();
    s.modulation.frequency_hz = experiment.modulation_hz;
    s.modulation.applied_du_s = metrology::pzt_to_delay(experiment.applied_volts,
                                                        experiment.pzt_coeff_s_per_v);
    s.sa.rbw_hz = experiment.rbw_hz;
    s.sa.n_averages = experiment.n_averages;
    s.sample_rate_hz = experiment.sample_rate_hz;
    s.duration_s = experiment.duration_s;
    s.rng_seed = seed;
    return s;
}

squeezing::QuadraturePair RunConfig::phase_scan_pair() const {
    if (phase_scan.source == PhaseScanConfig::Source::Spopo) {
        return squeezing::quadrature_variances(phase_scan.mode, 2.0 * constants::pi * phase_scan.analysis_hz,
                                               spopo_params(), chain);
    }
    squeezing::QuadraturePair pair;
    pair.var_p = squeezing::db_to_variance(phase_scan.var_p_db);
    pair.var_q = squeezing::db_to_variance(phase_scan.var_q_db);
    return pair;
}

void RunConfig::validate() const {
    check("comb", [&] { comb.validate(); });
    check("spopo", [&] { spopo_params().validate(); });
    check("chain", [&] { chain.validate(); });
    check("experiment", [&] {
        qtt::detail::require(experiment.squeeze_db >= 0.0, "squeeze_db must be >= 0");
        qtt::detail::require(experiment.applied_volts >= 0.0, "applied_volts must be >= 0");
        scenario().validate();
    });
    check("phase_scan", [&] {
        const auto& s = phase_scan.scan;
        qtt::detail::require(s.periods >= 1 && s.points_per_period >= 1 && s.draws_per_point >= 2,
                             "scan needs >= 1 period, >= 1 point, >= 2 draws");
        qtt::detail::require(s.period_s > 0.0, "period must be > 0");
        if (phase_scan.source == PhaseScanConfig::Source::Spopo) {
            qtt::detail::require(phase_scan.mode < spopo.lambda_ratios.size(), "mode has no eigenvalue ratio");
        }
        (void)phase_scan_pair();
    });
    check("squeeze_spectrum", [&] {
        const auto& q = squeeze_spectrum;
        qtt::detail::require(q.omega_min_rad_s > 0.0 && q.omega_max_rad_s > q.omega_min_rad_s,
                             "need 0 < omega_min < omega_max");
        qtt::detail::require(q.points >= 2, "need >= 2 points");
        qtt::detail::require(!q.modes.empty(), "modes must not be empty");
        for (auto k : q.modes) {
            if (k >= spopo.lambda_ratios.size()) {
                throw InvalidParameter("mode " + std::to_string(k) + " has no eigenvalue ratio");
            }
        }
    });
    check("sql", [&] {
        qtt::detail::require(!sql.powers_w.empty() && !sql.squeeze_db.empty(),
                             "powers and squeeze_db lists must be non-empty");
        for (double p : sql.powers_w) qtt::detail::require(p > 0.0, "powers must be > 0");
        for (double d : sql.squeeze_db) qtt::detail::require(d >= 0.0, "squeeze_db must be >= 0");
        qtt::detail::require(sql.reference_sigma > 0.0, "reference_sigma must be > 0");
    });
    if (out_dir.empty()) throw ConfigError("config [output]: dir must not be empty");
}

void apply_config_text(RunConfig& cfg, std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end(), nullptr, /*allow_exceptions=*/true,
                          /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: parse error: ") + e.what());
    }
    Section root(doc, "<root>");
    root.get("name", cfg.name);
    if (root.has("comb")) read_comb(Section(root.sub("comb"), "comb"), cfg.comb);
    if (root.has("spopo")) read_spopo(Section(root.sub("spopo"), "spopo"), cfg.spopo);
    if (root.has("chain")) read_chain(Section(root.sub("chain"), "chain"), cfg.chain);
    if (root.has("experiment")) read_experiment(Section(root.sub("experiment"), "experiment"), cfg.experiment);
    if (root.has("phase_scan")) read_phase_scan(Section(root.sub("phase_scan"), "phase_scan"), cfg.phase_scan);
    if (root.has("squeeze_spectrum")) {
        read_squeeze_spectrum(Section(root.sub("squeeze_spectrum"), "squeeze_spectrum"),
                              cfg.squeeze_spectrum);
    }
    if (root.has("sql")) read_sql(Section(root.sub("sql"), "sql"), cfg.sql);
    if (root.has("output")) read_output(Section(root.sub("output"), "output"), cfg);
    root.finish();
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    apply_config_text(cfg, ss.str());
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < detail::kPresetCount; ++i) names.emplace_back(detail::kPresets[i].name);
    return names;
}

std::string_view preset_text(std::string_view name) {
    if (name == "paper") name = "paper-coherent";
    for (std::size_t i = 0; i < detail::kPresetCount; ++i) {
        if (name == detail::kPresets[i].name) return detail::kPresets[i].text;
    }
    throw ConfigError("unknown preset '" + std::string(name) + "'");
}

RunConfig load_preset(std::string_view name) {
    RunConfig cfg;
    apply_config_text(cfg, preset_text(name));
    return cfg;
}

void apply_emit_list(RunConfig& cfg, std::string_view list) {
    cfg.emit_csv = false;
    cfg.emit_svg = false;
    std::size_t pos = 0;
    while (pos <= list.size()) {
        const std::size_t end = std::min(list.find(',', pos), list.size());
        const std::string_view item = list.substr(pos, end - pos);
        if (item == "csv") {
            cfg.emit_csv = true;
        } else if (item == "svg") {
            cfg.emit_svg = true;
        } else if (!item.empty()) {
            throw ConfigError("--emit: unknown format '" + std::string(item) + "'");
        }
        pos = end + 1;
    }
}

}  // namespace qtt::cli
