#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "qtt/cli/artifacts.hpp"
#include "qtt/cli/commands.hpp"
#include "qtt/cli/config.hpp"

using namespace qtt::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("qtt_test_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run_tool(const std::string& args, const fs::path& out_file) {
    const std::string cmd = std::string("\"") + QTT_BINARY + "\" " + args + " > \"" + out_file.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SweepSpec sweep_of(SweepAxis axis, double from, double to, std::size_t points, bool log = false) {
    SweepSpec s;
    s.axis = axis;
    s.from = from;
    s.to = to;
    s.points = points;
    s.log = log;
    return s;
}

}  // namespace

TEST_CASE("number formatting") {
    CHECK(format_number(9.158066894828987e-23) == "9.158066894829e-23");
    CHECK(format_number(0.0) == "0.000000000000e+00");
    CHECK(format_number(-1.5) == "-1.500000000000e+00");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(format_number(INFINITY) == "inf");
    CHECK(format_number(-INFINITY) == "-inf");
}

TEST_CASE("csv round trip") {
    CsvTable t("demo", {"a_s", "b", "c"});
    t.add_row({1.25e-20, 7LL, std::string("unresolved")});
    t.add_row({2.0, -3LL, std::string("x")});
    const auto text = t.render();
    CHECK(text.rfind("# qtt-csv v1 demo\n", 0) == 0);
    const auto doc = parse_csv(text);
    CHECK(doc.columns == std::vector<std::string>{"a_s", "b", "c"});
    REQUIRE(doc.rows.size() == 2);
    CHECK(doc.number(0, "a_s") == 1.25e-20);
    CHECK(doc.rows[0][1] == "7");
    CHECK(doc.rows[0][2] == "unresolved");
    CHECK(doc.column("c") == 2);
    CHECK_THROWS((void)doc.column("missing"));
    CHECK_THROWS(t.add_row({1.0}));
}

TEST_CASE("svg is self-contained") {
    SvgPlot p{"t", "x", "y", true, {SvgSeries{"s", {1.0, 10.0, 100.0}, {0.0, 1.0, 0.5}}}};
    const auto svg = p.render();
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("href") == std::string::npos);
    CHECK(svg.find("<script") == std::string::npos);
}

TEST_CASE("config overlays and validation") {
    RunConfig cfg;
    apply_config_text(cfg, R"({
        // comments are allowed
        "comb": {"power_uw": 5, "lambda0_nm": 800},
        "chain": {"eta_tot": 0.5},
        "experiment": {"rbw_khz": 50, "state": "squeezed", "squeeze_db": 3},
        "output": {"seed": 77, "emit": ["csv", "svg"]}
    })");
    CHECK(cfg.comb.power_w == doctest::Approx(5e-6));
    CHECK(cfg.comb.lambda0_m == doctest::Approx(800e-9));
    CHECK(cfg.chain.eta_tot() == 0.5);
    CHECK(cfg.experiment.rbw_hz == doctest::Approx(50e3));
    CHECK(cfg.seed == 77);
    CHECK(cfg.emit_svg);
    CHECK(cfg.state().var_p0 == doctest::Approx(std::pow(10.0, -0.3)));

    apply_config_text(cfg, R"({"chain": {"eta_tot": null}})");
    CHECK_FALSE(cfg.chain.eta_tot_override.has_value());

    RunConfig c2;
    CHECK_THROWS_AS(apply_config_text(c2, R"({"comb": {"power_w": 1}})"), ConfigError);
    CHECK_THROWS_AS(apply_config_text(c2, R"({"bogus": {}})"), ConfigError);
    CHECK_THROWS_AS(apply_config_text(c2, R"({"comb": 3})"), ConfigError);
    CHECK_THROWS_AS(apply_config_text(c2, "{not json"), ConfigError);
    CHECK_THROWS_AS(apply_config_text(c2, R"({"experiment": {"state": "thermal"}})"), ConfigError);
    CHECK_THROWS_AS(apply_config_file(c2, "/nonexistent/qtt.json"), ConfigError);

    RunConfig c3;
    apply_config_text(c3, R"({"chain": {"rho": 1.5}})");
    CHECK_THROWS_AS(c3.validate(), ConfigError);
    RunConfig c4;
    c4.squeeze_spectrum.modes = {0, 9};
    CHECK_THROWS_AS(c4.validate(), ConfigError);
    RunConfig c5;
    CHECK_THROWS_AS(apply_emit_list(c5, "csv,pdf"), ConfigError);
}

TEST_CASE("presets") {
    const auto names = preset_names();
    for (const char* n : {"paper-coherent", "paper-squeezed", "paper-vacuum"}) {
        CHECK(std::find(names.begin(), names.end(), n) != names.end());
        const auto cfg = load_preset(n);
        CHECK_NOTHROW(cfg.validate());
        CHECK(cfg.chain.eta_tot() == 0.68);
        CHECK(cfg.comb.power_w == doctest::Approx(2e-6));
    }
    CHECK(preset_text("paper") == preset_text("paper-coherent"));
    CHECK_THROWS_AS((void)preset_text("nope"), ConfigError);

    const auto sq = load_preset("paper-squeezed");
    CHECK(sq.state().var_p0 == doctest::Approx(std::pow(10.0, -0.15)));
    const auto vac = load_preset("paper-vacuum");
    const auto pair = vac.phase_scan_pair();
    CHECK(pair.var_p == doctest::Approx(std::pow(10.0, -0.3)));
    CHECK(pair.var_q == doctest::Approx(std::pow(10.0, 0.6)));
    // The preset's SPOPO parameters give the pump rate √(27/55).
    CHECK(vac.spopo_params().r == doctest::Approx(std::sqrt(27.0 / 55.0)));
}

TEST_CASE("sql command") {
    auto cfg = load_preset("paper");
    cfg.sql.squeeze_db = {0.0, 10.0};
    const auto doc = parse_csv(cmd_sql(cfg).stdout_text);
    REQUIRE(doc.rows.size() == 2);
    CHECK(doc.number(0, "sql_combined_s_per_rtHz") == doctest::Approx(9.15e-23).epsilon(0.01));
    CHECK(doc.number(0, "min_detectable_du_s_per_rtHz") == doctest::Approx(doc.number(0, "sql_combined_s_per_rtHz")));
    CHECK(doc.number(1, "du_projected_s_per_rtHz") == doctest::Approx(2.8057751781386365e-23).epsilon(1e-9));
    CHECK(doc.number(1, "min_detectable_du_s_per_rtHz") == doctest::Approx(2.8968353713870265e-23).epsilon(1e-9));
}

TEST_CASE("squeeze-spectrum command") {
    auto cfg = load_preset("paper-vacuum");
    cfg.squeeze_spectrum.points = 5;
    const auto doc = parse_csv(cmd_squeeze_spectrum(cfg).stdout_text);
    CHECK(doc.rows.size() == 5 * cfg.squeeze_spectrum.modes.size());
    for (std::size_t i = 0; i < doc.rows.size(); ++i) {
        CHECK(doc.number(i, "var_p") * doc.number(i, "var_q") >= 1.0 - 1e-12);
    }
    CHECK(doc.rows[5][doc.column("quadrature_swapped")] == "1");
}

TEST_CASE("sweep command") {
    auto cfg = load_preset("paper");

    SUBCASE("power axis follows N^-1/2") {
        const auto doc = parse_csv(cmd_sweep(cfg, sweep_of(SweepAxis::PowerUw, 0.5, 50.0, 9, true)).stdout_text);
        std::vector<double> p, du;
        for (std::size_t i = 0; i < doc.rows.size(); ++i) {
            p.push_back(doc.number(i, "power_W"));
            du.push_back(doc.number(i, "du_min_s_per_rtHz"));
        }
        CHECK(oracle::loglog_slope(p, du) == doctest::Approx(-0.5).epsilon(0.02));
    }

    SUBCASE("squeezing axis is monotone") {
        const auto doc = parse_csv(cmd_sweep(cfg, sweep_of(SweepAxis::SqueezeDb, 0.0, 12.0, 13)).stdout_text);
        for (std::size_t i = 1; i < doc.rows.size(); ++i) {
            CHECK(doc.number(i, "du_min_s_per_rtHz") < doc.number(i - 1, "du_min_s_per_rtHz"));
        }
    }

    SUBCASE("pump axis and omega axis evaluate the SPOPO model") {
        const auto pump = parse_csv(cmd_sweep(cfg, sweep_of(SweepAxis::PumpRate, 0.0, 0.9, 4)).stdout_text);
        CHECK(pump.number(0, "var_p0") == doctest::Approx(1.0));
        CHECK(pump.number(3, "var_p0") < 1.0);
        const auto om = parse_csv(cmd_sweep(cfg, sweep_of(SweepAxis::OmegaRadS, 1e4, 1e10, 4, true)).stdout_text);
        CHECK(om.number(3, "var_p0") == doctest::Approx(1.0).epsilon(1e-3));
    }

    SUBCASE("invalid sweeps") {
        CHECK_THROWS_AS(validate_sweep(cfg, sweep_of(SweepAxis::PowerUw, 1.0, 2.0, 0)), ConfigError);
        CHECK_THROWS_AS(validate_sweep(cfg, SweepSpec{}), ConfigError);
        CHECK_THROWS_AS(validate_sweep(cfg, sweep_of(SweepAxis::PumpRate, 0.0, 1.0, 3)), ConfigError);
        CHECK_THROWS_AS(validate_sweep(cfg, sweep_of(SweepAxis::PowerUw, 0.0, 1.0, 3, true)), ConfigError);
        CHECK_FALSE(parse_sweep_axis("volts").has_value());
        CHECK(parse_sweep_axis("omega_rad_s") == SweepAxis::OmegaRadS);
    }
}

TEST_CASE("monte-carlo sweep is identical across thread counts") {
    auto cfg = load_preset("paper");
    cfg.experiment.n_averages = 500;
    cfg.experiment.duration_s = 5e-3;
    auto spec = sweep_of(SweepAxis::SqueezeDb, 0.0, 3.0, 4);
    spec.monte_carlo = true;
    spec.threads = 1;
    const auto a = cmd_sweep(cfg, spec).stdout_text;
    spec.threads = 3;
    CHECK(cmd_sweep(cfg, spec).stdout_text == a);
}

TEST_CASE("qtt binary: exit codes and reproducible artifacts") {
    const auto dir = scratch("bin");
    const auto log = dir / "log.txt";

    CHECK(run_tool("sql --preset paper --out \"" + (dir / "sql").string() + "\"", log) == 0);
    CHECK(slurp(log).find("9.1580668948") != std::string::npos);
    CHECK(fs::exists(dir / "sql" / "sql.csv"));

    CHECK(run_tool("sql --preset nope", log) == 2);
    CHECK(run_tool("frobnicate", log) == 2);
    CHECK(run_tool("sweep --preset paper --axis power_uw --from 1 --to 2 --points 0", log) == 2);
    CHECK(run_tool("sweep --preset paper --axis volts --from 1 --to 2 --points 3", log) == 2);
    CHECK(run_tool("squeeze-spectrum --preset paper --modes 0 7", log) == 2);

    // A regular file where the output directory should be: runtime failure.
    std::ofstream(dir / "blocker") << "x";
    CHECK(run_tool("sql --preset paper --out \"" + (dir / "blocker").string() + "\"", log) == 3);

    // Identical seeds give byte-identical CSV.
    const auto cfg = dir / "short.json";
    std::ofstream(cfg) << R"({"experiment": {"duration_s": 0.02, "n_averages": 2000}})";
    const std::string common = "timing --preset paper --config \"" + cfg.string() + "\" --seed 314 --out ";
    REQUIRE(run_tool(common + "\"" + (dir / "a").string() + "\"", log) == 0);
    REQUIRE(run_tool(common + "\"" + (dir / "b").string() + "\"", log) == 0);
    const auto ta = slurp(dir / "a" / "timing.csv");
    CHECK_FALSE(ta.empty());
    CHECK(ta == slurp(dir / "b" / "timing.csv"));
    CHECK(slurp(dir / "a" / "timing_spectrum.csv") == slurp(dir / "b" / "timing_spectrum.csv"));
    REQUIRE(run_tool("timing --preset paper --config \"" + cfg.string() + "\" --seed 315 --out \"" +
                         (dir / "c").string() + "\"",
                     log) == 0);
    CHECK(ta != slurp(dir / "c" / "timing.csv"));
    fs::remove_all(dir);
}
