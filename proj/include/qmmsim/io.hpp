#pragma once

#include <string>
#include <vector>

#include "qmmsim/qsd.hpp"
#include "qmmsim/spectral.hpp"

namespace qmm {

// Generic CSV table; values printed with max_digits10 so re-reads are exact.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

// One row per sample: time, <observables...>, in_window.
void trajectory_to_csv(const TrajectoryRecord& rec, const std::string& path);

// Compact binary dump for re-analysis; round-trips exactly.
void trajectory_to_binary(const TrajectoryRecord& rec, const std::string& path);
TrajectoryRecord trajectory_from_binary(const std::string& path);

void spectrum_to_csv(const Spectrum& spec, const std::string& path);

void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

}  // namespace qmm
