// Acceptance battery: one PASS/FAIL line per criterion, exit 0 iff all pass.
#include <cstdlib>
#include <iostream>
#include <string>

#include "acceptance.hpp"

int main(int argc, char** argv) {
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  nlsprop::cli::CampaignConfig config;
  int failed = 0;
  const auto results = nlsprop::cli::run_acceptance(config, only, [&](const auto& r) {
    std::cout << nlsprop::cli::format_line(r) << std::endl;
    failed += r.passed ? 0 : 1;
  });
  std::cout << results.size() - failed << "/" << results.size() << " criteria passed\n";
  return failed == 0 && !results.empty() ? 0 : 1;
}
