#pragma once

#include "amcf/config.hpp"
#include "amcf/errors.hpp"

#include <iosfwd>
#include <optional>
#include <string_view>

namespace amcf {

enum class Command { Run, Expander, Rescaled, BarrierCheck, Oracle, Suite };

/// run | expander | rescaled | barrier-check | oracle | suite.
std::optional<Command> parse_command(std::string_view name);

namespace exit_status {
inline constexpr int pass = 0;
inline constexpr int config = 2;
inline constexpr int numerical = 3;
inline constexpr int assertion = 4;
}  // namespace exit_status

int exit_code(ErrorKind kind);

/// Runs the command, writes reports, snapshots and the resolved config under
/// config.output_dir, and logs summaries to `log`. Returns 0 iff every report
/// passes; module errors are mapped through exit_code.
int dispatch(Command command, const RunConfig& config, std::ostream& log);

}  // namespace amcf
