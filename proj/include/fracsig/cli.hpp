#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fracsig::cli {

enum ExitCode : int { ok = 0, usage_error = 1, data_error = 2 };

/// Environment variable that overrides the default dataset directory.
inline constexpr const char* mnist_dir_env = "FRACSIG_MNIST_DIR";

/// Default α grid for `mnist-features --alpha-sweep` without a value:
/// 0.80, 0.85, ..., 1.40.
std::vector<double> default_sweep();

/// Runs one invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fracsig::cli
