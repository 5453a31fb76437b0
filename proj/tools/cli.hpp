#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace testcalc::cli {

// Exit codes: 0 success, 1 analysis/domain error, 2 input or parse error,
// 3 resource cap.
enum ExitCode : int { kOk = 0, kAnalysis = 1, kInput = 2, kLimit = 3 };

// Runs one command line (without the program name). Reports go to `out`
// unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace testcalc::cli
