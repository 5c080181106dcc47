// Runs every acceptance criterion at full size and prints one line each.
// Usage: acceptance [report-prefix]   (writes <prefix>.txt and <prefix>.csv)

#include <fstream>
#include <iostream>
#include <string>

#include "renewrt/validation.hpp"

int main(int argc, char** argv) {
  try {
    const renewrt::ValidationOptions opt;
    std::cout << "seed " << opt.seed << '\n';
    const renewrt::ValidationReport r = renewrt::run_validation(opt);
    renewrt::write_criteria_lines(std::cout, r);
    if (argc > 1) {
      const std::string prefix = argv[1];
      std::ofstream txt(prefix + ".txt"), csv(prefix + ".csv");
      renewrt::write_validation_text(txt, r);
      renewrt::write_validation_csv(csv, r);
      std::cout << "report: " << prefix << ".txt, " << prefix << ".csv\n";
    }
    return r.passed() ? 0 : 3;
  } catch (const std::exception& e) {
    std::cerr << "acceptance aborted: " << e.what() << '\n';
    return 2;
  }
}
