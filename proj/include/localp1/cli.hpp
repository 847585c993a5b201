// Command-line front end shared by the localp1 executable and the tests.
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace localp1 {

// Exit status 0 on success, 1 on computational failures (with a
// machine-readable diagnostic) and 2 on usage errors. args excludes the
// program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace localp1
