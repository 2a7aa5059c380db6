#pragma once

#include <cmath>

#include "evinet/bba.hpp"
#include "evinet/errors.hpp"

namespace evinet {

// Deng entropy of a normalized BBA, in bits, split into its two components:
//   nonspecificity = sum m(A) * log2(2^|A| - 1)   (mass on large sets)
//   discord        = -sum m(A) * log2 m(A)        (competition among focals)
// On Bayesian BBAs nonspecificity is 0 and discord is the Shannon entropy.
struct EntropyReport {
  double nonspecificity = 0.0;
  double discord = 0.0;
  double total = 0.0;
};

inline EntropyReport deng_entropy(const Bba& bba) {
  if (bba.conflict() > kContractTol) {
    fail(Errc::InvalidMass, "deng_entropy requires a normalized BBA");
  }
  EntropyReport report;
  for (const auto& [subset, mass] : bba.masses()) {
    const double set_count = static_cast<double>((1u << subset_size(subset)) - 1u);
    report.nonspecificity += mass * std::log2(set_count);
    report.discord -= mass * std::log2(mass);
  }
  // m(A)=1 yields -0.0 discord, which would leak into serialized output.
  if (report.discord == 0.0) report.discord = 0.0;
  report.total = report.nonspecificity + report.discord;
  return report;
}

inline double shannon_entropy_bits(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h;
}

}  // namespace evinet
