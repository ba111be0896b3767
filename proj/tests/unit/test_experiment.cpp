#include <doctest.h>

#include <filesystem>

#include "qmmsim/experiment.hpp"
#include "qmmsim/io.hpp"

using namespace qmm;
namespace fs = std::filesystem;

namespace {

ExperimentConfig tiny_custom() {
  auto cfg = ExperimentConfig::for_tag("custom");
  cfg.params.m_a = 4;
  cfg.params.m_b = 4;
  cfg.photons = {0, 1};
  cfg.duration_periods = 8;
  cfg.warmup_periods = 2;
  cfg.n_traj = 2;
  cfg.segments = 4;
  cfg.record_stride = 4;
  cfg.seed = 99;
  return cfg;
}

std::string slurp(const fs::path& p) { return read_text(p.string()); }

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("qmmsim_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("config files round-trip through the echo") {
  const auto cfg = ExperimentConfig::for_tag("fig2-resonant");
  const auto again = ExperimentConfig::from_key_values(parse_config_text(cfg.echo()));
  CHECK(again.echo() == cfg.echo());
  CHECK(again.params.omega_b == doctest::Approx(0.5));
  CHECK(again.photons.size() == 3);

  const auto mis = ExperimentConfig::for_tag("fig2-mismatch");
  CHECK(mis.params.omega_a == doctest::Approx(0.099));
  CHECK(mis.params.gamma_b == doctest::Approx(1e-4));
  CHECK(mis.readout_band_hi == doctest::Approx(0.12));

  CHECK_THROWS_AS(ExperimentConfig::for_tag("fig9"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(ExperimentConfig::from_key_values({{"not_a_key", "1"}}),
                       doctest::Contains("unknown config key"), std::invalid_argument);
}

TEST_CASE("experiment bundles are deterministic and self-describing") {
  const auto cfg = tiny_custom();
  const auto dir1 = fresh_dir("det1");
  const auto dir2 = fresh_dir("det2");
  const auto s1 = run_experiment(cfg, dir1.string());
  const auto s2 = run_experiment(cfg, dir2.string());
  CHECK(s1.ok);

  for (const char* rel :
       {"photons_0/mean_trajectory.csv", "photons_1/mean_trajectory.csv",
        "photons_0/spectrum_x.csv", "photons_1/spectrum_p.csv", "summary.txt"}) {
    CHECK(slurp(dir1 / rel) == slurp(dir2 / rel));
  }

  // re-running from the echoed config reproduces the bundle
  const auto echoed =
      ExperimentConfig::from_key_values(parse_config_text(slurp(dir1 / "config_echo.cfg")));
  const auto dir3 = fresh_dir("det3");
  run_experiment(echoed, dir3.string());
  CHECK(slurp(dir3 / "photons_1/mean_trajectory.csv") ==
        slurp(dir1 / "photons_1/mean_trajectory.csv"));

  // metrics exposed for both photon cases
  CHECK(s1.metric("photons_1", "band_power_p") > 0.0);
  CHECK_THROWS_AS(s1.metric("photons_7", "band_power_p"), std::invalid_argument);
}

TEST_CASE("trajectory binary dump round-trips exactly") {
  auto cfg = tiny_custom();
  const auto dir = fresh_dir("bin");
  run_experiment(cfg, dir.string());
  const TrajectoryRecord rec = trajectory_from_binary((dir / "photons_1/trajectory_0.bin").string());
  CHECK(rec.seed == cfg.seed);
  CHECK(rec.names.size() >= 8);

  const auto dir2 = fresh_dir("bin2");
  trajectory_to_binary(rec, (dir2 / "copy.bin").string());
  CHECK(slurp(dir / "photons_1/trajectory_0.bin") == slurp(dir2 / "copy.bin"));
}

TEST_CASE("sweep mechanics") {
  auto cfg = ExperimentConfig::for_tag("fig3-uncoupled");
  cfg.duration_periods = 30;
  cfg.warmup_periods = 6;
  cfg.noise_realizations = 2;
  cfg.segments = 4;
  cfg.seed = 7;

  SUBCASE("unknown parameter names the valid ones") {
    CHECK_THROWS_WITH_AS(sweep(cfg, "bogus", {1.0}, fresh_dir("sw0").string()),
                         doctest::Contains("valid parameters"), std::invalid_argument);
  }
  SUBCASE("empty value list rejected") {
    CHECK_THROWS_AS(sweep(cfg, "noise_d", {}, fresh_dir("sw1").string()),
                    std::invalid_argument);
  }
  SUBCASE("aggregate table written, one run per value") {
    const auto dir = fresh_dir("sw2");
    const SweepResult r = sweep(cfg, "n_qubits", {1, 2}, dir.string());
    CHECK(r.values.size() == 2);
    CHECK(r.runs.size() == 2);
    CHECK(fs::exists(dir / "sweep_n_qubits.csv"));
    CHECK(fs::exists(dir / "n_qubits_1/spectrum_sz.csv"));
    CHECK(fs::exists(dir / "n_qubits_2/snr_report.txt"));
    CHECK(r.snr[0] > 0.0);
  }
}

TEST_CASE("coupled run at g_qq = 0 matches the uncoupled ensemble") {
  auto uncoupled = ExperimentConfig::for_tag("fig3-uncoupled");
  uncoupled.params = [] {
    auto cfg = ExperimentConfig::for_tag("fig3-uncoupled");
    auto p = cfg.params;
    p.n_qubits = 2;
    p.eps.assign(2, 0.0);
    p.delta.assign(2, 1.0);
    p.g_a.assign(2, 0.01);
    p.g_b.assign(2, 0.01);
    return p;
  }();
  uncoupled.duration_periods = 40;
  uncoupled.warmup_periods = 8;
  uncoupled.noise_realizations = 3;
  uncoupled.segments = 4;
  uncoupled.steps_per_period = 400;
  uncoupled.seed = 21;

  auto coupled = uncoupled;
  coupled.experiment = "fig3-coupled";
  coupled.params.g_qq = 0.0;

  const auto d1 = fresh_dir("uncoupled");
  const auto d2 = fresh_dir("coupled0");
  const auto su = run_experiment(uncoupled, d1.string());
  const auto sc = run_experiment(coupled, d2.string());
  CHECK(su.metric("sz", "snr") ==
        doctest::Approx(sc.metric("sz", "snr")).epsilon(1e-6));
  CHECK(su.metric("sz", "signal_power") ==
        doctest::Approx(sc.metric("sz", "signal_power")).epsilon(1e-6));
}

TEST_CASE("multi-photon comparison bundle carries one spectra pair per case") {
  auto cfg = tiny_custom();
  cfg.params.m_a = 8;  // room for the 5-photon input
  cfg.photons = {0, 1, 5};
  cfg.duration_periods = 6;
  cfg.warmup_periods = 2;
  const auto dir = fresh_dir("threecase");
  const auto s = run_experiment(cfg, dir.string());
  for (int n : {0, 1, 5}) {
    const std::string sub = "photons_" + std::to_string(n);
    CHECK(fs::exists(dir / sub / "spectrum_x.csv"));
    CHECK(fs::exists(dir / sub / "spectrum_p.csv"));
  }
  CHECK(s.report.find("photons_5 / photons_0") != std::string::npos);
}

TEST_CASE("coherent-input case rides along the Fock cases") {
  auto cfg = tiny_custom();
  cfg.params.m_a = 12;  // keep the coherent-state truncation tail negligible
  cfg.photons = {0};
  cfg.alpha = 1.0;
  const auto dir = fresh_dir("alphacase");
  const auto s = run_experiment(cfg, dir.string());
  CHECK(fs::exists(dir / "alpha_1" / "spectrum_p.csv"));
  CHECK(s.metric("alpha_1", "band_power_p") >= 0.0);
  // mean input occupation of |alpha=1> is 1 photon
  const TrajectoryRecord rec =
      trajectory_from_binary((dir / "alpha_1" / "trajectory_0.bin").string());
  CHECK(rec.column("n_a").front() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("oracle-suite bundle") {
  auto cfg = ExperimentConfig::for_tag("oracle-suite");
  const auto dir = fresh_dir("oracle");
  const auto s = run_experiment(cfg, dir.string());
  CHECK(s.ok);
  CHECK(fs::exists(dir / "oracle_table.txt"));
  CHECK(s.metric("oracles", "all_passed") == doctest::Approx(1.0));
}
