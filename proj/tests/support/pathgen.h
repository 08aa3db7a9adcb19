#pragma once

// Random loop-free, extern-free branch programs `int f(int a, int b)` and the
// engine-vs-interpreter path comparison run on them.

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace minisa::oracle {

struct BranchProgram {
  std::string source;
  int ifs = 0;
  /// Per parameter: values where some atom over it changes truth.
  std::map<std::string, std::set<int64_t>> boundaries;
};

BranchProgram randomBranchProgram(std::mt19937_64 &rng, int max_ifs = 4);

/// Boundary neighbourhoods plus the extremes; hits every truth region.
std::vector<int64_t> candidateValues(const std::set<int64_t> &boundaries);

struct SoundnessResult {
  bool ok = false;
  int leaves = 0; // feasible exploded-graph leaves
  int paths = 0;  // distinct decision sequences seen by the interpreter
  std::string detail;
};

SoundnessResult checkSoundness(const BranchProgram &p);

} // namespace minisa::oracle
