#include "qmmsim/io.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace qmm {

namespace {

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream f(path, mode);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  return f;
}

template <typename T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("truncated binary trajectory file");
  return v;
}

constexpr char kMagic[8] = {'Q', 'M', 'M', 'B', 'I', 'N', '0', '1'};

}  // namespace

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size())
    throw std::invalid_argument("write_csv: header/column count mismatch");
  auto f = open_out(path);
  for (std::size_t c = 0; c < header.size(); ++c) f << (c ? "," : "") << header[c];
  f << "\n";
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& col : columns)
    if (col.size() != rows) throw std::invalid_argument("write_csv: ragged columns");
  char buf[32];  // shortest round-trip representation
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const auto res = std::to_chars(buf, buf + sizeof(buf), columns[c][r]);
      if (c) f << ',';
      f.write(buf, res.ptr - buf);
    }
    f << "\n";
  }
}

void trajectory_to_csv(const TrajectoryRecord& rec, const std::string& path) {
  std::vector<std::string> header{"time"};
  std::vector<std::vector<double>> cols{rec.times};
  for (std::size_t i = 0; i < rec.names.size(); ++i) {
    header.push_back(rec.names[i]);
    cols.push_back(rec.series[i]);
  }
  header.push_back("in_window");
  std::vector<double> win(rec.in_window.begin(), rec.in_window.end());
  cols.push_back(std::move(win));
  write_csv(path, header, cols);
}

void trajectory_to_binary(const TrajectoryRecord& rec, const std::string& path) {
  auto f = open_out(path, std::ios::binary);
  f.write(kMagic, sizeof(kMagic));
  put<std::uint64_t>(f, rec.seed);
  put<double>(f, rec.dt);
  put<std::int32_t>(f, rec.stride);
  put<std::uint8_t>(f, rec.flagged ? 1 : 0);
  put<double>(f, rec.max_leakage);
  put<double>(f, rec.max_norm_drift);
  put<std::uint32_t>(f, static_cast<std::uint32_t>(rec.names.size()));
  put<std::uint64_t>(f, static_cast<std::uint64_t>(rec.times.size()));
  for (const auto& name : rec.names) {
    put<std::uint32_t>(f, static_cast<std::uint32_t>(name.size()));
    f.write(name.data(), static_cast<std::streamsize>(name.size()));
  }
  f.write(reinterpret_cast<const char*>(rec.times.data()),
          static_cast<std::streamsize>(rec.times.size() * sizeof(double)));
  for (const auto& col : rec.series)
    f.write(reinterpret_cast<const char*>(col.data()),
            static_cast<std::streamsize>(col.size() * sizeof(double)));
  f.write(reinterpret_cast<const char*>(rec.in_window.data()),
          static_cast<std::streamsize>(rec.in_window.size()));
}

TrajectoryRecord trajectory_from_binary(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  char magic[8];
  f.read(magic, sizeof(magic));
  if (!f || std::string(magic, 8) != std::string(kMagic, 8))
    throw std::runtime_error("not a trajectory dump: " + path);
  TrajectoryRecord rec;
  rec.seed = get<std::uint64_t>(f);
  rec.dt = get<double>(f);
  rec.stride = get<std::int32_t>(f);
  rec.flagged = get<std::uint8_t>(f) != 0;
  rec.max_leakage = get<double>(f);
  rec.max_norm_drift = get<double>(f);
  const auto n_cols = get<std::uint32_t>(f);
  const auto n_samples = get<std::uint64_t>(f);
  rec.names.resize(n_cols);
  for (auto& name : rec.names) {
    const auto len = get<std::uint32_t>(f);
    name.resize(len);
    f.read(name.data(), len);
  }
  rec.times.resize(n_samples);
  f.read(reinterpret_cast<char*>(rec.times.data()),
         static_cast<std::streamsize>(n_samples * sizeof(double)));
  rec.series.assign(n_cols, std::vector<double>(n_samples));
  for (auto& col : rec.series)
    f.read(reinterpret_cast<char*>(col.data()),
           static_cast<std::streamsize>(n_samples * sizeof(double)));
  rec.in_window.resize(n_samples);
  f.read(reinterpret_cast<char*>(rec.in_window.data()), static_cast<std::streamsize>(n_samples));
  if (!f) throw std::runtime_error("truncated binary trajectory file: " + path);
  return rec;
}

void spectrum_to_csv(const Spectrum& spec, const std::string& path) {
  write_csv(path, {"freq", "psd"}, {spec.freqs, spec.psd});
}

void write_text(const std::string& path, const std::string& content) {
  auto f = open_out(path);
  f << content;
}

std::string read_text(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace qmm
