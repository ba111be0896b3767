#pragma once

#include <stdexcept>
#include <string>

namespace qmm {

// Numerical evolution left its validity envelope (norm collapse, positivity
// loss, truncation leakage treated as fatal by the caller, ...).
class IntegrationError : public std::runtime_error {
 public:
  explicit IntegrationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qmm
