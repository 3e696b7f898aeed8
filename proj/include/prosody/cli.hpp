#pragma once

#include <string>
#include <vector>

namespace prosody::cli {

// Runs the command-line front end. Returns 0 on success, 2 for input or
// usage errors, 3 for internal failures. args[0] is the program name.
int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

}  // namespace prosody::cli
