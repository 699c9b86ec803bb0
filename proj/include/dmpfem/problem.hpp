#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dmpfem/coefficients.hpp"

namespace dmpfem {

/// Textual problem description; round-trips through JSON so runs can be
/// reproduced from their outputs.
///
/// preset is one of "poisson", "advection-diffusion", "quasilinear-a" or
/// "custom". f and g are expressions for every preset; b is a constant
/// vector for advection-diffusion. A custom problem gives a, b_expr, c as
/// expressions and declares its constants.
struct ProblemSpec {
  std::string preset = "poisson";
  int dim = 2;
  std::string f = "0";
  std::string g = "0";
  std::vector<double> b;

  std::string a = "1";
  std::vector<std::string> b_expr;
  std::string c = "0";
  std::optional<double> lambda;
  std::optional<double> Lambda;
  std::optional<double> nu;
  std::optional<std::string> c_mode;
};

/// Throws ParseError for bad expressions and InvalidArgument for
/// inconsistent specs.
CoefficientSet build_coefficients(const ProblemSpec& spec);

nlohmann::json problem_to_json(const ProblemSpec& spec);
/// Missing dim falls back to `default_dim`.
ProblemSpec problem_from_json(const nlohmann::json& doc, int default_dim = 2);
ProblemSpec read_problem_json(const std::string& path, int default_dim = 2);

}  // namespace dmpfem
