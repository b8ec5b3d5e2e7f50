#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vcs/distributions.hpp"

namespace vcs {

/// One Monte-Carlo trial outcome; serialized as a single NDJSON line with
/// snake_case keys (N and B keep their upper-case names; lower-case n is the
/// measurement count). rel_error is null when the solver diverged.
struct TrialRecord {
  std::string algo;
  int N = 0;
  int B = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  int n = 0;
  NonzeroDistribution dist;
  int rep = 0;
  std::uint64_t seed = 0;
  bool success = false;
  std::optional<double> rel_error;  // empty <=> diverged
  bool diverged = false;
  int iters = 0;
  bool converged = false;
  double wall_ms = 0.0;
};

void to_json(nlohmann::json& j, const TrialRecord& r);
void from_json(const nlohmann::json& j, TrialRecord& r);

/// Parses NDJSON, reporting malformed lines with their 1-based number.
/// A trailing line without a newline that fails to parse is treated as a
/// partial write and discarded.
std::vector<TrialRecord> read_ndjson_records(std::istream& in);
std::vector<TrialRecord> read_ndjson_records(const std::string& path);

}  // namespace vcs
