#pragma once

#include <string>
#include <vector>

namespace oatune {

// Entry point of the `oatune` tool: design, run, analyze, train-best, predict.
// Returns 0 on success, 1 on internal failure, 2 on usage or input errors.
int run_cli(int argc, const char* const* argv);
// Arguments without the program name.
int run_cli(const std::vector<std::string>& args);

}  // namespace oatune
