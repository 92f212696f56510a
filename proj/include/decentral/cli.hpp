#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace decentral::cli {

// Entry point behind the `decentral` executable. `args` excludes the program
// name. Primary data goes to `out` (when no --output file is given);
// diagnostics and errors go to `err`. Returns the process exit status.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace decentral::cli
