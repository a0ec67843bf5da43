#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace varsel {

// Subcommands: fit, select, search-coeffs, compare, simulate, forecast.
// Returns 0 on success, 1 on usage errors, 2 on data or numerical errors.
// args excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

}  // namespace varsel
