#pragma once

#include <functional>
#include <string>
#include <vector>

namespace bernpairs {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

using CheckSink = std::function<void(const CheckResult&)>;

/// Reproduces the published tables and values: irregular pairs, the A(p)
/// sequence, exceptions, lifts, CRT instances, m_S and M_2. Each check is
/// reported to `sink` as soon as it finishes.
std::vector<CheckResult> verify_published_tables(unsigned jobs, const CheckSink& sink = {});

/// Randomized identities (Kummer congruences, CRT, numerator ratio) with a
/// fixed seed.
std::vector<CheckResult> verify_properties(unsigned jobs, const CheckSink& sink = {});

}  // namespace bernpairs
