// Acceptance harness: runs every criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exits nonzero on any failure.

#include <cstdio>
#include <cstring>
#include <string>

#include "ggt/selftest.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = 0;
  bool verbose = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) {
      seed = std::strtoull(argv[++i], nullptr, 10);
    } else if (std::strcmp(argv[i], "--verbose") == 0) {
      verbose = true;
    }
  }
  ggt::selftest::Report rep = ggt::selftest::run(seed);
  for (const auto& c : rep.criteria) {
    std::printf("criterion %2d %s: %s\n", c.index, c.passed ? "PASS" : "FAIL", c.name.c_str());
    if (verbose || !c.passed)
      for (const auto& l : c.lines) std::printf("    %s\n", l.c_str());
  }
  std::printf("%s\n", rep.all_passed ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED");
  return rep.all_passed ? 0 : 1;
}
