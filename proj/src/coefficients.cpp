#include "dmpfem/coefficients.hpp"

#include <cmath>
#include <sstream>

#include "dmpfem/error.hpp"
#include "dmpfem/numeric.hpp"

namespace dmpfem {

const char* to_string(CMode mode) {
  switch (mode) {
    case CMode::Nonnegative: return "nonnegative";
    case CMode::IdenticallyZero: return "identically-zero";
    case CMode::General: return "general";
  }
  return "unknown";
}

CMode cmode_from_string(const std::string& s) {
  if (s == "nonnegative") return CMode::Nonnegative;
  if (s == "identically-zero" || s == "zero") return CMode::IdenticallyZero;
  if (s == "general") return CMode::General;
  throw Error(ErrorKind::InvalidArgument, "unknown c_mode '" + s + "'");
}

namespace {

CoefficientSet::SourceFn constant_source(double v) {
  return [v](const CoefficientSet::Point&) { return v; };
}

CoefficientSet base(int dim, double f_value, CoefficientSet::SourceFn g) {
  CoefficientSet k;
  k.a = [](const auto&, double, const auto&) { return 1.0; };
  k.b = [dim](const auto&, double, const auto&) { return Eigen::VectorXd::Zero(dim).eval(); };
  k.c = [](const auto&, double) { return 0.0; };
  k.f = constant_source(f_value);
  k.g = g ? std::move(g) : constant_source(0.0);
  k.div_b = [](const auto&, double, const auto&) { return 0.0; };
  k.lambda = 1.0;
  k.Lambda = 1.0;
  k.nu = 0.0;
  k.c_mode = CMode::IdenticallyZero;
  k.constant = true;
  k.state_dependent = false;
  return k;
}

}  // namespace

CoefficientSet poisson(int dim, double f_value, CoefficientSet::SourceFn g) {
  CoefficientSet k = base(dim, f_value, std::move(g));
  k.name = "poisson";
  return k;
}

CoefficientSet advection_diffusion(const Eigen::VectorXd& b, double f_value, CoefficientSet::SourceFn g) {
  CoefficientSet k = base(static_cast<int>(b.size()), f_value, std::move(g));
  k.b = [b](const auto&, double, const auto&) { return b; };
  k.nu = b.norm() / k.lambda;
  k.name = "advection-diffusion";
  return k;
}

CoefficientSet quasilinear_a(int dim, double f_value, CoefficientSet::SourceFn g) {
  CoefficientSet k = base(dim, f_value, std::move(g));
  k.a = [](const auto&, double eta, const auto&) { return 1.0 + eta * eta / (1.0 + eta * eta); };
  k.Lambda = 2.0;
  k.constant = false;
  k.state_dependent = true;
  k.name = "quasilinear-a";
  return k;
}

CoefficientCheck check_coefficients(const CoefficientSet& coeffs, int dim, const Eigen::VectorXd& lo,
                                    const Eigen::VectorXd& hi, int samples, std::uint64_t seed,
                                    double state_range) {
  CoefficientCheck out;
  out.min_a = INFINITY;
  SplitMix64 rng(seed);
  Eigen::VectorXd x(dim), p(dim);
  auto flag = [&out](const std::string& what) {
    if (out.violations.size() < 16) out.violations.push_back(what);
    out.ok = false;
  };
  const double slack = 1e-12;
  for (int s = 0; s < samples; ++s) {
    for (int d = 0; d < dim; ++d) {
      x(d) = rng.uniform(lo(d), hi(d));
      p(d) = rng.uniform(-state_range, state_range);
    }
    const double eta = rng.uniform(-state_range, state_range);
    const double a = coeffs.a(x, eta, p);
    const Eigen::VectorXd b = coeffs.b(x, eta, p);
    const double c = coeffs.c(x, eta);
    out.min_a = std::min(out.min_a, a);
    out.max_abs_a = std::max(out.max_abs_a, std::abs(a));
    const double ratio = std::sqrt(b.squaredNorm() + c * c) / coeffs.lambda;
    out.max_nu_ratio = std::max(out.max_nu_ratio, ratio);
    std::ostringstream where;
    where << " at sample " << s << " (eta=" << eta << ")";
    if (a < coeffs.lambda * (1 - slack)) flag("a < lambda" + where.str());
    if (std::abs(a) > coeffs.Lambda * (1 + slack)) flag("|a| > Lambda" + where.str());
    if (ratio > coeffs.nu * (1 + slack) + slack) flag("(|b|^2+|c|^2)/lambda^2 > nu^2" + where.str());
    if (coeffs.c_mode == CMode::IdenticallyZero && c != 0.0) flag("c != 0 in identically-zero mode" + where.str());
    if (coeffs.c_mode == CMode::Nonnegative && c < 0.0) flag("c < 0 in nonnegative mode" + where.str());
  }
  return out;
}

}  // namespace dmpfem
