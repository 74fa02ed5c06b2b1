#pragma once

#include <string>
#include <vector>

namespace cdpre::cli {

// Exit codes: 0 success, 1 configuration error, 2 runtime error,
// 3 check failure.
int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

}  // namespace cdpre::cli
