#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace etm {

// Full command surface behind the etm binary. Streams are injected so tests
// can capture output; returns the process exit code.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace etm
