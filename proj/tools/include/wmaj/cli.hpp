#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wmaj::cli
{

/*! Process exit codes. */
enum exit_code : int
{
  exit_ok = 0,
  exit_internal = 1,
  exit_validation = 2,
  exit_verification = 3
};

/*! Runs the command line `args` (without the program name), writing reports
    to `out` unless an output file is given and diagnostics to `err`. */
int run( const std::vector<std::string>& args, std::ostream& out, std::ostream& err );

} // namespace wmaj::cli
