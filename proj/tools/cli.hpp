#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qdarwin::cli {

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name. Returns 0 on success, 1 on validation errors (bad flags,
/// invalid input, failed verification) and 2 on internal errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses radians with `pi` support: "3.14", "pi", "-pi", "pi/2", "2*pi",
/// "3pi/4".
double parse_angle(const std::string& text);

}  // namespace qdarwin::cli
