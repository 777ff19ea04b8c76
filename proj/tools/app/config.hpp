#pragma once

// Sectioned key = value configuration for the command-line tool.
//
//   [space]         family, exponent, a, b | b_potential
//   [constants]     name = number (bound into every expression)
//   [hypersurface]  potential (defaults to b_potential), level
//   [tensors]       flag = x ; y  (repeatable)
//   [audit]         flags, seed, fd_step, richardson
//   [classify]      points, directions, seed, tol, box
//   [geodesic]      from, to, segments, max_iter, tol, seed, perturbation
//
// `a` is a matrix block, rows separated by ';' and entries by ','; the
// dimension is the number of rows. '#' starts a comment.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "finsler/classifier.hpp"
#include "finsler/geodesic.hpp"
#include "finsler/hypersurface.hpp"
#include "finsler/metric.hpp"
#include "finsler/tensors.hpp"

namespace finsler::app {

class ConfigError : public Error {
 public:
  ConfigError(const std::string& origin, std::size_t line, const std::string& what)
      : Error(origin + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct FlagInput {
  Vector x;
  Vector y;
  std::size_t line = 0;
};

struct RunConfig {
  std::optional<SpaceSpec> space;
  ConstantTable constants;
  std::optional<LevelSurface> surface;

  std::vector<FlagInput> flags;

  std::size_t audit_flags = 100;
  std::uint64_t audit_seed = 1;
  AuditOptions audit;

  ClassifyOptions classify;

  GeodesicOptions geodesic;
  std::optional<Vector> from;
  std::optional<Vector> to;
};

RunConfig parse_config(const std::string& text, const std::string& origin = "<config>");
RunConfig load_config(const std::filesystem::path& path);

// Overrides every seed in the configuration.
void apply_seed(RunConfig& cfg, std::uint64_t seed);

}  // namespace finsler::app
