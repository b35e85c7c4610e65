#pragma once

#include "pabidot/error.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace pabidot {

/// Process exit codes. Each failure class has its own code.
enum class ExitCode : int {
    ok = 0,
    internal = 1,
    usage = 2,
    file_not_found = 3,
    parse = 4,
    shape = 5,
    parameter = 6,
    constant_column = 7,
    attack_setup = 8,
    io = 9,
    empty_data = 10,
    dimension = 11,
    axis = 12,
    input = 13,
};

ExitCode exit_code_for(ErrorKind kind) noexcept;

/// Entry point shared by the `pabidot` binary and the tests. `args` excludes the program
/// name. Failures print one line to `err`:
///   pabidot: error code=<int> kind=<kind> message="<text>"
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace pabidot
