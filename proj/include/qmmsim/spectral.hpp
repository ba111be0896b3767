#pragma once

#include <complex>
#include <string>
#include <vector>

namespace qmm {

// One-sided power spectral density on an angular-frequency grid (units of
// eps). Normalized so that sum(psd) * domega equals the time-domain variance.
struct Spectrum {
  std::vector<double> freqs;
  std::vector<double> psd;
  std::string window;
  int segments = 0;
  std::size_t record_length = 0;
  std::string observable;

  double domega() const { return freqs.size() > 1 ? freqs[1] - freqs[0] : 0.0; }
  // Integrated power over [lo, hi] (inclusive of bins whose center falls inside).
  double band_power(double lo, double hi) const;
};

enum class WindowKind { Hann, Rect };
WindowKind window_from_string(const std::string& tag);

// Welch-averaged one-sided periodogram: `segments` segments with 50% overlap,
// per-segment mean removal, Hann window by default.
Spectrum psd(const std::vector<double>& series, double dt, WindowKind window = WindowKind::Hann,
             int segments = 8);
Spectrum psd(const std::vector<double>& series, double dt, const std::string& window,
             int segments = 8);

// Biased autocorrelation estimate r[k] = (1/n) sum_t x[t] x[t+k] of the
// mean-removed series.
std::vector<double> autocorrelation(const std::vector<double>& series);

struct SnrReport {
  double signal_freq = 0;
  double signal_power = 0;    // integrated psd over the signal window
  double baseline_power = 0;  // median psd in the baseline band * window width
  double snr = 0;
  std::string method;
};

// Signal window: +/- halfwidth_bins around the grid bin nearest signal_freq.
// Baseline: median psd over [baseline_lo, baseline_hi], scaled to the same
// bandwidth as the signal window. The baseline band must not be empty and
// should exclude both the signal and any resonance feature.
SnrReport snr(const Spectrum& spectrum, double signal_freq, int signal_halfwidth_bins,
              double baseline_lo, double baseline_hi);

// Mean of several spectra on identical grids (used when averaging noise
// realizations at the spectrum level).
Spectrum average_spectra(const std::vector<Spectrum>& spectra);

// Discrete Fourier transform helper (arbitrary length), exposed for tests.
void dft_forward(const std::vector<std::complex<double>>& in,
                 std::vector<std::complex<double>>& out);

}  // namespace qmm
