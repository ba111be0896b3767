#include "qmmsim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

namespace qmm {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

double Spectrum::band_power(double lo, double hi) const {
  const double dw = domega();
  double acc = 0.0;
  for (std::size_t k = 0; k < freqs.size(); ++k)
    if (freqs[k] >= lo && freqs[k] <= hi) acc += psd[k] * dw;
  return acc;
}

WindowKind window_from_string(const std::string& tag) {
  if (tag == "hann") return WindowKind::Hann;
  if (tag == "rect" || tag == "rectangular" || tag == "none") return WindowKind::Rect;
  throw std::invalid_argument("psd: unknown window '" + tag + "'");
}

void dft_forward(const std::vector<std::complex<double>>& in,
                 std::vector<std::complex<double>>& out) {
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> tmp(in);
  fft.fwd(out, tmp);
}

Spectrum psd(const std::vector<double>& series, double dt, const std::string& window,
             int segments) {
  return psd(series, dt, window_from_string(window), segments);
}

Spectrum psd(const std::vector<double>& series, double dt, WindowKind window, int segments) {
  if (segments < 1) throw std::invalid_argument("psd: segments must be >= 1");
  const std::size_t n = series.size();
  if (n < 2 * static_cast<std::size_t>(segments))
    throw std::invalid_argument("psd: series too short for requested segment count");
  if (dt <= 0) throw std::invalid_argument("psd: dt must be > 0");

  // 50% overlap: L*(segments+1)/2 <= n
  std::size_t seg_len = 2 * n / (segments + 1);
  if (seg_len % 2 == 1) --seg_len;
  const std::size_t hop = seg_len / 2;
  const int n_seg = static_cast<int>((n - seg_len) / hop) + 1;

  std::vector<double> win(seg_len);
  double wss = 0.0;  // sum of squared window values
  for (std::size_t i = 0; i < seg_len; ++i) {
    win[i] = (window == WindowKind::Hann)
                 ? 0.5 * (1.0 - std::cos(2.0 * kPi * double(i) / double(seg_len)))
                 : 1.0;
    wss += win[i] * win[i];
  }

  const std::size_t n_bins = seg_len / 2 + 1;
  std::vector<double> acc(n_bins, 0.0);
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> seg(seg_len), spec;
  for (int s = 0; s < n_seg; ++s) {
    const std::size_t off = s * hop;
    double mean = 0.0;
    for (std::size_t i = 0; i < seg_len; ++i) mean += series[off + i];
    mean /= double(seg_len);
    for (std::size_t i = 0; i < seg_len; ++i) seg[i] = (series[off + i] - mean) * win[i];
    fft.fwd(spec, seg);
    for (std::size_t k = 0; k < n_bins; ++k) {
      const double one_sided = (k == 0 || 2 * k == seg_len) ? 1.0 : 2.0;
      acc[k] += one_sided * std::norm(spec[k]);
    }
  }

  // Angular-frequency density: sum(psd)*domega = variance, domega = 2*pi/(L*dt).
  Spectrum out;
  out.freqs.resize(n_bins);
  out.psd.resize(n_bins);
  const double domega = 2.0 * kPi / (double(seg_len) * dt);
  const double scale = dt / (2.0 * kPi * wss * double(n_seg));
  for (std::size_t k = 0; k < n_bins; ++k) {
    out.freqs[k] = domega * double(k);
    out.psd[k] = acc[k] * scale;
  }
  out.window = (window == WindowKind::Hann) ? "hann" : "rect";
  out.segments = n_seg;
  out.record_length = n;
  return out;
}

std::vector<double> autocorrelation(const std::vector<double>& series) {
  const std::size_t n = series.size();
  if (n == 0) return {};
  double mean = std::accumulate(series.begin(), series.end(), 0.0) / double(n);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = series[i] - mean;

  // biased estimator via zero-padded FFT
  std::size_t m = 1;
  while (m < 2 * n) m <<= 1;
  std::vector<std::complex<double>> buf(m, 0.0), spec;
  for (std::size_t i = 0; i < n; ++i) buf[i] = x[i];
  Eigen::FFT<double> fft;
  fft.fwd(spec, buf);
  for (auto& c : spec) c = std::norm(c);
  std::vector<std::complex<double>> corr;
  fft.inv(corr, spec);
  std::vector<double> r(n);
  for (std::size_t k = 0; k < n; ++k) r[k] = corr[k].real() / double(n);
  return r;
}

SnrReport snr(const Spectrum& spectrum, double signal_freq, int signal_halfwidth_bins,
              double baseline_lo, double baseline_hi) {
  if (spectrum.freqs.empty()) throw std::invalid_argument("snr: empty spectrum");
  if (signal_freq < spectrum.freqs.front() || signal_freq > spectrum.freqs.back())
    throw std::invalid_argument("snr: signal frequency outside the spectrum grid");
  const double dw = spectrum.domega();

  // nearest bin
  std::size_t k0 = static_cast<std::size_t>(std::llround(signal_freq / dw));
  k0 = std::min(k0, spectrum.freqs.size() - 1);
  const std::size_t klo = k0 > static_cast<std::size_t>(signal_halfwidth_bins)
                              ? k0 - signal_halfwidth_bins
                              : 0;
  const std::size_t khi = std::min(spectrum.freqs.size() - 1, k0 + signal_halfwidth_bins);

  double signal_power = 0.0;
  for (std::size_t k = klo; k <= khi; ++k) signal_power += spectrum.psd[k] * dw;

  std::vector<double> base;
  for (std::size_t k = 0; k < spectrum.freqs.size(); ++k) {
    if (spectrum.freqs[k] < baseline_lo || spectrum.freqs[k] > baseline_hi) continue;
    if (k >= klo && k <= khi) continue;
    base.push_back(spectrum.psd[k]);
  }
  if (base.empty()) throw std::invalid_argument("snr: baseline band is empty");
  std::nth_element(base.begin(), base.begin() + base.size() / 2, base.end());
  const double median_psd = base[base.size() / 2];
  const double width = double(khi - klo + 1) * dw;
  const double baseline_power = median_psd * width;

  SnrReport rep;
  rep.signal_freq = spectrum.freqs[k0];
  rep.signal_power = signal_power;
  rep.baseline_power = baseline_power;
  rep.snr = signal_power / baseline_power;
  rep.method = "window-sum over median baseline";
  return rep;
}

Spectrum average_spectra(const std::vector<Spectrum>& spectra) {
  if (spectra.empty()) throw std::invalid_argument("average_spectra: no spectra");
  Spectrum out = spectra.front();
  for (std::size_t s = 1; s < spectra.size(); ++s) {
    if (spectra[s].psd.size() != out.psd.size())
      throw std::invalid_argument("average_spectra: grid mismatch");
    for (std::size_t k = 0; k < out.psd.size(); ++k) out.psd[k] += spectra[s].psd[k];
  }
  for (auto& v : out.psd) v /= double(spectra.size());
  return out;
}

}  // namespace qmm
