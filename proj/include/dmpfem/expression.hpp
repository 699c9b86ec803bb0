#pragma once

#include <array>
#include <memory>
#include <string>
#include <string_view>

namespace dmpfem {

/// Arithmetic over x, y, z, eta, p1, p2, p3 with + - * / ^, unary minus,
/// sin cos exp abs min max and the constant pi. ^ binds tighter than unary
/// minus and is right-associative.
class Expression {
 public:
  enum Var { X, Y, Z, Eta, P1, P2, P3, kNumVars };
  using Vars = std::array<double, kNumVars>;

  /// Throws ParseError with the offending position. Variables z and p3 are
  /// rejected when dim < 3.
  static Expression parse(std::string_view source, int dim = 3);
  static Expression constant(double value);

  double operator()(const Vars& vars) const;

  const std::string& source() const { return source_; }
  bool uses(Var v) const { return (used_ >> v) & 1u; }
  /// Depends on eta or p.
  bool state_dependent() const;
  /// Depends on no variable at all.
  bool is_constant() const { return used_ == 0; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string source_;
  unsigned used_ = 0;
};

}  // namespace dmpfem
