#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lambda_memory::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Entry point of lambda-mem. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace lambda_memory::cli
