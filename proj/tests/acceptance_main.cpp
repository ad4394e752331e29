// Acceptance suite runner: one PASS/FAIL line per criterion.
//   evosort_acceptance [--only 1,5,12] [--threads N]

#include <CLI11.hpp>
#include <iostream>

#include "evosort/acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"evosort acceptance suite"};
  std::vector<int> only;
  evosort::verify::Options opts;
  app.add_option("--only", only, "Criterion ids")->delimiter(',')->check(CLI::Range(1, evosort::verify::kCriterionCount));
  app.add_option("--threads", opts.threads, "Worker threads (0: OpenMP default)");
  CLI11_PARSE(app, argc, argv);
  opts.only.insert(only.begin(), only.end());

  int failed = 0;
  const auto results = evosort::verify::run_acceptance(opts, [&](const evosort::verify::CriterionResult& r) {
    std::cout << evosort::verify::format_result(r) << std::endl;
    if (!r.passed) ++failed;
  });
  std::cout << results.size() - static_cast<std::size_t>(failed) << '/' << results.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
