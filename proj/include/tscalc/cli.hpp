#pragma once

/**
 * @file cli.hpp
 * @brief Command-line front end: eval, check, fuzz, report.
 *
 * Exit codes: 0 everything holds, 1 a violation was found, 2 bad input.
 */

#include "tscalc/inequalities.hpp"
#include "tscalc/serialize.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace tscalc::cli {

enum ExitCode : int { kOk = 0, kViolation = 1, kInputError = 2 };

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct CheckResult {
    Json output;  // inequality, instance echo, reports
    bool all_hold = true;
};

/// Evaluates one instance document. Throws InputError / SyntaxError naming the
/// offending field.
CheckResult check_instance(const Json& doc, const EvalOptions& opts);

/// Names accepted in an instance file's "inequality" field.
const std::vector<std::string>& inequality_names();

}  // namespace tscalc::cli
