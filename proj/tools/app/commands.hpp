#pragma once

#include <string>
#include <string_view>

#include "config.hpp"

namespace finsler::app {

enum class Command { Tensors, Audit, Classify, Geodesic };

// Throws Error for an unknown command name.
Command parse_command(std::string_view name);

struct RunOutput {
  int status = 0;     // 0 pass, 1 fail verdict
  std::string text;   // human-readable report
  std::string csv;    // machine-readable rows, starting with a "# seed=" line
};

// Errors propagate as exceptions; the caller maps them to exit status 2.
RunOutput run(Command command, const RunConfig& cfg);

// printf("%.17g")
std::string format_number(double v);

}  // namespace finsler::app
