#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "enrel/circuit.hpp"

namespace enrel {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,
  kExitNotConverged = 3,
};

/// Runs one command line (without the program name). Data goes to `out`
/// unless --output names a file; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Generator spec (`balanced:K:D:KIND`, `line:M:KIND`) or path to a circuit
/// JSON file.
GateTree load_circuit(const std::string& source);

/// %.12g; "nan" and "inf" spelled out.
std::string format_number(double value);

}  // namespace enrel
