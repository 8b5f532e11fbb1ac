// Run configuration: a flat key = value text format with [section] headers.
//
//   # comment                   blank lines and comments are ignored
//   name = dw_grad_K10          top-level keys precede any section
//   [geometry]
//   l1 = 5.0                    key is stored as "geometry.l1"
//   mesh.nx = 20                dotted keys are accepted anywhere and are
//                               resolved relative to the top level
//
// Values are numbers, true/false, or bare / double-quoted strings. A key may
// appear only once. Every problem in a file is reported together, each with
// its line number.
#pragma once

#include "gpc/errors.hpp"
#include "gpc/materials.hpp"
#include "gpc/mesh.hpp"
#include "gpc/solver.hpp"

#include <string>
#include <vector>

namespace gpc {

struct OutputSpec {
  std::string directory = ".";
  std::string prefix = "run";
  bool vtk = true;
  bool csv = true;
};

struct RunConfig {
  std::string name = "run";
  BlockSpec block;
  int quadrature_order = 3;
  MaterialParams material;
  LoadKind boundary = LoadKind::FixedAll;
  double compression = 0.0;  // total compression fraction for biaxial_affine
  SolverConfig solver;
  OutputSpec output;

  bool operator==(const RunConfig& o) const;
};

/// Throws ConfigError listing every issue found.
RunConfig parse_config(const std::string& text);
/// Canonical text; parse_config(serialize(c)) == c.
std::string serialize(const RunConfig& c);

/// Checks the semantic invariants of an assembled configuration; issues carry
/// line 0. Returns an empty list when valid.
std::vector<ConfigIssue> validate(const RunConfig& c);

/// Names accepted by preset(); aliases included.
std::vector<std::string> preset_names();
/// Throws InvalidParameter for an unknown name.
RunConfig preset(const std::string& name);

}  // namespace gpc
