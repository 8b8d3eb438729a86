#pragma once

// Command-line front end: deriv, integ, convert, limit, check and ivp.
//
// Exit codes: 0 when every record converged (or every identity case
// passed), 1 when any did not, 2 on a usage error.

#include <ostream>
#include <string>
#include <vector>

namespace confcalc::cli {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace confcalc::cli
