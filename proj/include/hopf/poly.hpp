#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "hopf/linalg.hpp"

namespace hopf {

/// Polynomial in the family parameter, stored by ascending power:
/// p(lambda) = c[0] + c[1] lambda + c[2] lambda^2 + ...
class LambdaPoly {
 public:
  LambdaPoly() = default;
  LambdaPoly(double c) : coef_{c} {}
  LambdaPoly(std::initializer_list<double> c) : coef_(c) { trim(); }
  static LambdaPoly monomial(int power, double c);

  double eval(double lambda) const;
  LambdaPoly derivative() const;
  int degree() const { return static_cast<int>(coef_.size()) - 1; }
  bool is_zero(double tol = 0.0) const;
  double norm() const;

  LambdaPoly& operator+=(const LambdaPoly& o);
  LambdaPoly& operator-=(const LambdaPoly& o);
  LambdaPoly& operator*=(double s);
  friend LambdaPoly operator+(LambdaPoly a, const LambdaPoly& b) { return a += b; }
  friend LambdaPoly operator-(LambdaPoly a, const LambdaPoly& b) { return a -= b; }
  friend LambdaPoly operator*(LambdaPoly a, double s) { return a *= s; }
  friend LambdaPoly operator*(double s, LambdaPoly a) { return a *= s; }
  friend LambdaPoly operator*(const LambdaPoly& a, const LambdaPoly& b);

  const std::vector<double>& coefficients() const { return coef_; }

 private:
  void trim();
  std::vector<double> coef_;
};

/// Exponent multi-index packed 4 bits per variable (dim <= 16, degree <= 15).
using MonoKey = std::uint64_t;

MonoKey mono_key(const std::vector<int>& exponents);
std::vector<int> mono_exponents(MonoKey key, int dim);
int mono_degree(MonoKey key, int dim);

/// Polynomial map R^dim x R_lambda -> R truncated at total degree <= 4.
/// Deterministic term order (std::map) keeps downstream output reproducible.
class PolyJet {
 public:
  PolyJet() = default;
  explicit PolyJet(int dim, int max_degree = 4)
      : dim_(dim), max_degree_(max_degree) {}

  int dim() const { return dim_; }
  int max_degree() const { return max_degree_; }

  void add_term(const std::vector<int>& exponents, const LambdaPoly& c);
  const std::map<MonoKey, LambdaPoly>& terms() const { return terms_; }

  double eval(const Vec& v, double lambda) const;
  Vec gradient(const Vec& v, double lambda) const;

  PolyJet degree_part(int d) const;
  PolyJet truncated(int max_total) const;
  /// h'(u) = h(M u); M has rows = dim(), cols = new dimension.
  PolyJet compose_linear(const Mat& M) const;
  /// Jet with every lambda polynomial evaluated (frozen) at lambda.
  PolyJet at_lambda(double lambda) const;
  PolyJet derivative(int var) const;
  /// Matrix of lambda-polynomials describing the quadratic part,
  /// h_2(v) = 1/2 v^T H(lambda) v.
  std::vector<std::vector<LambdaPoly>> hessian_poly() const;
  Mat hessian_at_zero(double lambda) const;

  PolyJet& operator+=(const PolyJet& o);
  PolyJet& operator-=(const PolyJet& o);
  PolyJet& operator*=(double s);
  friend PolyJet operator+(PolyJet a, const PolyJet& b) { return a += b; }
  friend PolyJet operator-(PolyJet a, const PolyJet& b) { return a -= b; }
  friend PolyJet operator*(PolyJet a, double s) { return a *= s; }
  friend PolyJet operator*(double s, PolyJet a) { return a *= s; }
  friend PolyJet operator*(const PolyJet& a, const PolyJet& b);

  double coefficient_norm() const;
  void drop_small(double tol);
  int max_present_degree() const;

 private:
  int dim_ = 0;
  int max_degree_ = 4;
  std::map<MonoKey, LambdaPoly> terms_;
};

/// Poisson bracket with respect to omega = J_{4n} (frame coordinates):
/// {f, g} = grad(f)^T J grad(g) = df(X_g) with X_g = J grad(g).
PolyJet poisson_bracket(const PolyJet& f, const PolyJet& g);

/// Validates absence of constant/linear terms (hypothesis on the family)
/// and truncates to the requested order.  Polynomial input is truncated
/// exactly, no numerical differentiation is involved.
PolyJet taylor_at_origin(const PolyJet& family, int order = 4,
                         double tol = 1e-12);

/// Fast repeated gradient evaluation of a jet frozen at one lambda.
class CompiledGradient {
 public:
  CompiledGradient() = default;
  CompiledGradient(const PolyJet& jet, double lambda);
  int dim() const { return dim_; }
  void eval(const double* v, double* out) const;
  Vec eval(const Vec& v) const;

 private:
  struct Term {
    double coef;
    std::vector<int> exps;
  };
  int dim_ = 0;
  std::vector<std::vector<Term>> per_var_;
};

}  // namespace hopf
