#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bnlab {

struct CriterionInfo {
  int id;
  std::string name;
  std::vector<int> dims; // dimensions the criterion exercises, for filtering
};

struct CriterionResult {
  int id;
  std::string name;
  bool pass;
  std::string detail;
  double seconds;
};

struct AcceptanceOptions {
  // coarser u0 sweep for the N = 3 threshold and the short N = 4 grid;
  // tolerances are never relaxed
  bool fast = false;
  std::optional<int> dim;
  std::uint64_t seed = 20240611;
  int threads = 1;
};

const std::vector<CriterionInfo>& acceptance_criteria();

CriterionResult run_criterion(int id, const AcceptanceOptions& opts = {});

// Runs every criterion matching opts.dim, in parallel up to opts.threads,
// and returns results ordered by id.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});

std::string format_result_line(const CriterionResult& r, bool with_time = false);

} // namespace bnlab
