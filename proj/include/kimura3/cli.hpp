#pragma once

namespace kimura3 {

// Full command-line dispatcher. Returns the process exit code:
// 0 success, 1 failed checks, 2 usage errors.
int run_cli(int argc, char** argv);

}  // namespace kimura3
