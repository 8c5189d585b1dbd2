#pragma once

#include <iosfwd>
#include <string>

namespace ifno {

/// Property suites behind `ifno check --suite NAME`. Each prints the measured
/// numbers and returns true on pass.
bool check_fft(std::ostream& os);
bool check_symmetry(std::ostream& os);
bool check_equivariance(std::ostream& os);
bool check_gradcheck(std::ostream& os);
bool check_darcy(std::ostream& os);

/// 0 on pass, 1 on failure; throws on unknown suite names.
int run_suite(const std::string& name, std::ostream& os);

}  // namespace ifno
