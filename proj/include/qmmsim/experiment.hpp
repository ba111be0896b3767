#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qmmsim/model.hpp"
#include "qmmsim/qsd.hpp"
#include "qmmsim/spectral.hpp"

namespace qmm {

// Fully explicit experiment description. Every field has a default per
// experiment tag; the resolved set is echoed into each output bundle so a
// bundle can be reproduced from its own echo.
struct ExperimentConfig {
  std::string experiment = "custom";  // fig2-resonant | fig2-mismatch | fig3-uncoupled |
                                      // fig3-coupled | oracle-suite | custom

  ModelParams params = ModelParams::defaults();
  std::vector<int> photons{0, 1};     // input Fock occupations to compare (fig2/custom)
  double alpha = 0;                   // adds a coherent-input case when nonzero
  std::string initial_qubits = "plus";

  double duration_periods = 600;
  double warmup_periods = 300;
  int steps_per_period = 200;
  int record_stride = 8;
  int n_traj = 20;
  int noise_realizations = 100;
  std::uint64_t seed = 12345;
  unsigned threads = 0;  // 0 = hardware concurrency

  // analysis
  int segments = 8;
  std::string window = "hann";
  double snr_signal_freq = -1;  // -1 resolves to params.drive_freq
  int snr_halfwidth_bins = 2;
  double snr_baseline_lo = 0.25;
  double snr_baseline_hi = 0.55;
  double readout_band_lo = -1;  // -1 resolves to 0.8 * omega_b
  double readout_band_hi = -1;  // -1 resolves to 1.2 * omega_b
  double peak_lo = 0.5;
  double peak_hi = 2.0;
  double leakage_threshold = 1e-4;

  double dt() const { return kTwoPi / steps_per_period; }

  static ExperimentConfig for_tag(const std::string& tag);
  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_key_values(const std::map<std::string, std::string>& kv);
  std::map<std::string, std::string> to_key_values() const;
  std::string echo() const;  // config-file text with every default materialized
  void resolve();            // materialize -1 sentinels
};

std::map<std::string, std::string> parse_config_text(const std::string& text);

struct CaseMetrics {
  std::string label;
  std::map<std::string, double> values;
};

struct ExperimentSummary {
  std::string experiment;
  std::string outdir;
  std::vector<CaseMetrics> cases;
  bool any_flagged = false;
  bool ok = true;  // false when an oracle check or leakage monitor failed
  std::string report;

  double metric(const std::string& label, const std::string& key) const;
};

// Runs the configured experiment, writing the bundle (config echo, series
// CSVs, spectra CSVs, SNR/summary report, manifest) under outdir.
ExperimentSummary run_experiment(const ExperimentConfig& config, const std::string& outdir);

// Runs the experiment once per value of `parameter`, each in its own
// subdirectory, and writes an aggregate CSV (value, snr, signal_amplitude,
// peak_freq) at the top level.
struct SweepResult {
  std::vector<double> values;
  std::vector<ExperimentSummary> runs;
  std::vector<double> snr;
  std::vector<double> signal_amplitude;
  std::vector<double> peak_freq;
  bool ok = true;
};
SweepResult sweep(const ExperimentConfig& config, const std::string& parameter,
                  const std::vector<double>& values, const std::string& outdir);

std::vector<std::string> sweepable_parameters();

}  // namespace qmm
