#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace dmpfem {

/// Sign information about the zeroth-order coefficient c(x, eta).
enum class CMode { Nonnegative, IdenticallyZero, General };

const char* to_string(CMode mode);
CMode cmode_from_string(const std::string& s);

/// Coefficients of -div(a grad u) + b . grad u + c u = f, u = g on the
/// boundary, together with the declared structural constants.
struct CoefficientSet {
  using Point = Eigen::VectorXd;
  using ScalarFn = std::function<double(const Point& x, double eta, const Point& p)>;
  using VectorFn = std::function<Eigen::VectorXd(const Point& x, double eta, const Point& p)>;
  using ReactionFn = std::function<double(const Point& x, double eta)>;
  using SourceFn = std::function<double(const Point& x)>;

  ScalarFn a;
  VectorFn b;
  ReactionFn c;
  SourceFn f;
  SourceFn g;
  /// Optional closed form of div b; empty means finite differences.
  ScalarFn div_b;

  double lambda = 1.0;  ///< ellipticity lower bound, a >= lambda
  double Lambda = 1.0;  ///< |a| <= Lambda
  double nu = 0.0;      ///< lambda^-2 (|b|^2 + |c|^2) <= nu^2
  CMode c_mode = CMode::IdenticallyZero;

  /// a, b, c and f are constant in every argument. Enables the degree-2
  /// quadrature default.
  bool constant = false;
  /// a, b or c depend on (eta, p). Informational only.
  bool state_dependent = true;
  std::string name = "custom";
};

/// -lap u = f.
CoefficientSet poisson(int dim, double f_value = 0.0, CoefficientSet::SourceFn g = nullptr);
/// -lap u + b . grad u = f with constant b.
CoefficientSet advection_diffusion(const Eigen::VectorXd& b, double f_value = 0.0,
                                   CoefficientSet::SourceFn g = nullptr);
/// -div((1 + u^2/(1+u^2)) grad u) = f.
CoefficientSet quasilinear_a(int dim, double f_value = 0.0, CoefficientSet::SourceFn g = nullptr);

struct CoefficientCheck {
  bool ok = true;
  std::vector<std::string> violations;
  double min_a = 0.0;
  double max_abs_a = 0.0;
  double max_nu_ratio = 0.0;  ///< max of sqrt(|b|^2 + c^2) / lambda
};

/// Spot-checks the declared constants at `samples` random (x, eta, p) with x
/// in the box [lo, hi], eta and p components in [-state_range, state_range].
CoefficientCheck check_coefficients(const CoefficientSet& coeffs, int dim, const Eigen::VectorXd& lo,
                                    const Eigen::VectorXd& hi, int samples = 1000,
                                    std::uint64_t seed = 1, double state_range = 10.0);

}  // namespace dmpfem
