#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace covpolar::cli {

// Runs one subcommand (enumerate, polar, factory, sample, report).  Returns
// 0 on success, 1 on validation errors, 2 on certificate or internal
// failures.  args excludes the program name.
int run(std::vector<std::string> const& args, std::ostream& out, std::ostream& err);

}  // namespace covpolar::cli
