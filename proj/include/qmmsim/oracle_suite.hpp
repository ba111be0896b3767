#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qmm {

struct OracleCheck {
  std::string name;
  double value = 0;       // measured
  double threshold = 0;
  bool greater_is_pass = true;  // pass iff value >= threshold (else value < threshold)
  bool pass = false;
  std::string detail;
};

// Every closed-form-vs-engine comparison in one table: vacuum Rabi state,
// Bell readout times, displacement operator identities, unitary reduction of
// the diffusion integrator, and the amplitude-damping ensemble law.
std::vector<OracleCheck> run_oracle_suite(std::uint64_t seed = 20250801,
                                          unsigned max_threads = 0);

bool all_passed(const std::vector<OracleCheck>& checks);
std::string format_oracle_table(const std::vector<OracleCheck>& checks);

}  // namespace qmm
