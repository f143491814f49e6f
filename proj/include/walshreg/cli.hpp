#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace walshreg {

/// Process exit codes of the command line tool.
enum class ExitCode : int {
  ok = 0,
  usage = 1,             // bad command line
  config = 2,            // invalid setting or config file content
  io = 3,                // unreadable / unwritable file, malformed image
  input = 4,             // unusable image content or mismatched shapes
  metric = 5,            // empty overlap or zero variance in a metric
  registration = 6,      // registration finished with status=error
  encoding = 7,          // structure code packing failed
  internal = 70,
};

/// Runs the tool on `args` (args[0] is the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace walshreg
