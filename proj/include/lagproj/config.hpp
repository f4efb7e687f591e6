#pragma once
// Run configuration and its `key = value` text form.
//
//   # comment
//   scheme = ap-explicit          # ap-explicit | ap-implicit | non-ap-explicit | non-ap-implicit | asymptotic
//   n_cells = 100
//   st = 1e-4
//   t_end = 0.2
//
// Required keys: scheme, n_cells, st, t_end. Everything else has a default.

#include <string>
#include <string_view>
#include <vector>

#include "lagproj/driver.hpp"

namespace lagproj {

enum class ReferenceKind { none, analytic, file };

struct ReferenceSpec {
  ReferenceKind kind = ReferenceKind::none;
  std::string path;  ///< snapshot CSV when kind == file

  bool operator==(const ReferenceSpec&) const = default;
};

struct RunConfig {
  SchemeKind scheme = SchemeKind::ap_explicit;
  Index n_cells = 100;
  double x_min = -1.0;
  double x_max = 1.0;
  double sigma0 = 0.01;
  double st = 1.0;
  double tau_g = 0.1;
  double u_g = 0.0;
  double cfl = 0.5;
  double safety = 1.05;
  bool source_cap_enabled = true;
  double implicit_multiplier = 1.0;
  BoundaryPolicy boundary = BoundaryPolicy::transmissive;
  InitialSampling initial_sampling = InitialSampling::cell_average;
  double t_end = 0.2;
  std::vector<double> snapshot_times;  ///< empty means {t_end}
  std::string output_path;
  ReferenceSpec reference;

  bool operator==(const RunConfig&) const = default;

  [[nodiscard]] TimeStepPolicy policy() const { return {cfl, source_cap_enabled, implicit_multiplier, safety}; }
  [[nodiscard]] GasClosure<double> gas() const { return {u_g, tau_g}; }
  /// Sorted output times, always ending with t_end.
  [[nodiscard]] std::vector<double> output_times() const;
};

std::string_view to_string(SchemeKind s);
std::string_view to_string(BoundaryPolicy b);
std::string_view to_string(InitialSampling s);
SchemeKind parse_scheme(std::string_view text);

/// Parses and validates; throws ParseError naming the offending line.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Text that parse_config maps back to an equal RunConfig.
std::string emit_config(const RunConfig& config);

/// Throws InvalidParameter when the config breaks any rule parse_config enforces.
void validate(const RunConfig& config);

}  // namespace lagproj
