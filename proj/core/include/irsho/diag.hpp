#pragma once

#include <atomic>

// Process-wide diagnostic counters for numeric guard rails. All guards keep
// the computation well-defined (clamp to the nearest valid value) and count
// how often they fired so tests can assert the defaults never need them.
namespace irsho {

struct Diagnostics {
  // Negative area differences clamped to zero (beyond rounding noise).
  std::atomic<long> negative_area_clamps{0};
  // Failure probability exceeded the trigger probability and was clamped.
  std::atomic<long> failure_prob_clamps{0};
  // Full-topology trials discarded for lacking a usable cell crossing.
  std::atomic<long> topology_resamples{0};

  void reset() {
    negative_area_clamps = 0;
    failure_prob_clamps = 0;
    topology_resamples = 0;
  }
};

inline Diagnostics& diagnostics() {
  static Diagnostics d;
  return d;
}

}  // namespace irsho
