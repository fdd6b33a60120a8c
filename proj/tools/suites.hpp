#pragma once

// Named verification suites shared by `pendinv verify` and the acceptance
// binary. Each returns a verdict plus a few human-readable detail lines.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace pendinv::suites {

struct Result {
  std::string name;
  bool pass = false;
  std::vector<std::string> details;
  double seconds = 0;
};

struct Options {
  std::uint64_t seed = 0;
  unsigned precision_bits = 256;  // fit precision
  int jobs = 1;
};

struct Suite {
  std::string name;
  int criterion = 0;  // 0: not one of the twelve acceptance criteria
  std::string summary;
  std::function<Result(const Options&)> run;
};

const std::vector<Suite>& all();
const Suite* find(const std::string& name);

// Runs `s`, timing it; exceptions become a failing result carrying the message.
Result run(const Suite& s, const Options& opt);

}  // namespace pendinv::suites
