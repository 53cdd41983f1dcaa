#ifndef FIDKIT_CLI_HPP
#define FIDKIT_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace fidkit::cli {

// Runs one CLI invocation (args excludes the program name). Returns 0 on
// success, 1 on domain errors (reported as one JSON line on `err`), 2 on
// usage errors.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace fidkit::cli

#endif
