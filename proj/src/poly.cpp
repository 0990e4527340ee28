#include "hopf/poly.hpp"

#include <algorithm>
#include <cmath>

namespace hopf {

LambdaPoly LambdaPoly::monomial(int power, double c) {
  LambdaPoly p;
  p.coef_.assign(power + 1, 0.0);
  p.coef_[power] = c;
  p.trim();
  return p;
}

double LambdaPoly::eval(double lambda) const {
  double acc = 0.0;
  for (size_t i = coef_.size(); i-- > 0;) acc = acc * lambda + coef_[i];
  return acc;
}

LambdaPoly LambdaPoly::derivative() const {
  LambdaPoly d;
  for (size_t i = 1; i < coef_.size(); ++i) {
    d.coef_.push_back(coef_[i] * static_cast<double>(i));
  }
  d.trim();
  return d;
}

bool LambdaPoly::is_zero(double tol) const {
  for (double c : coef_) {
    if (std::abs(c) > tol) return false;
  }
  return true;
}

double LambdaPoly::norm() const {
  double s = 0.0;
  for (double c : coef_) s += c * c;
  return std::sqrt(s);
}

void LambdaPoly::trim() {
  while (!coef_.empty() && coef_.back() == 0.0) coef_.pop_back();
}

LambdaPoly& LambdaPoly::operator+=(const LambdaPoly& o) {
  if (o.coef_.size() > coef_.size()) coef_.resize(o.coef_.size(), 0.0);
  for (size_t i = 0; i < o.coef_.size(); ++i) coef_[i] += o.coef_[i];
  trim();
  return *this;
}

LambdaPoly& LambdaPoly::operator-=(const LambdaPoly& o) {
  if (o.coef_.size() > coef_.size()) coef_.resize(o.coef_.size(), 0.0);
  for (size_t i = 0; i < o.coef_.size(); ++i) coef_[i] -= o.coef_[i];
  trim();
  return *this;
}

LambdaPoly& LambdaPoly::operator*=(double s) {
  for (double& c : coef_) c *= s;
  trim();
  return *this;
}

LambdaPoly operator*(const LambdaPoly& a, const LambdaPoly& b) {
  LambdaPoly p;
  if (a.coef_.empty() || b.coef_.empty()) return p;
  p.coef_.assign(a.coef_.size() + b.coef_.size() - 1, 0.0);
  for (size_t i = 0; i < a.coef_.size(); ++i) {
    for (size_t j = 0; j < b.coef_.size(); ++j) {
      p.coef_[i + j] += a.coef_[i] * b.coef_[j];
    }
  }
  p.trim();
  return p;
}

MonoKey mono_key(const std::vector<int>& exponents) {
  if (exponents.size() > 16) {
    throw HopfError(ErrorCode::INVALID_ARGUMENT, "jet dimension exceeds 16");
  }
  MonoKey key = 0;
  for (size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] < 0 || exponents[i] > 15) {
      throw HopfError(ErrorCode::INVALID_ARGUMENT, "exponent out of range");
    }
    key |= static_cast<MonoKey>(exponents[i]) << (4 * i);
  }
  return key;
}

std::vector<int> mono_exponents(MonoKey key, int dim) {
  std::vector<int> e(dim);
  for (int i = 0; i < dim; ++i) e[i] = static_cast<int>((key >> (4 * i)) & 0xF);
  return e;
}

int mono_degree(MonoKey key, int dim) {
  int d = 0;
  for (int i = 0; i < dim; ++i) d += static_cast<int>((key >> (4 * i)) & 0xF);
  return d;
}

void PolyJet::add_term(const std::vector<int>& exponents, const LambdaPoly& c) {
  if (static_cast<int>(exponents.size()) != dim_) {
    throw HopfError(ErrorCode::INVALID_ARGUMENT, "exponent size != dim");
  }
  if (c.is_zero()) return;
  int deg = 0;
  for (int e : exponents) deg += e;
  if (deg > max_degree_) return;
  LambdaPoly& slot = terms_[mono_key(exponents)];
  slot += c;
  if (slot.is_zero()) terms_.erase(mono_key(exponents));
}

double PolyJet::eval(const Vec& v, double lambda) const {
  double acc = 0.0;
  for (const auto& [key, c] : terms_) {
    double m = c.eval(lambda);
    MonoKey k = key;
    for (int i = 0; i < dim_; ++i, k >>= 4) {
      for (int e = static_cast<int>(k & 0xF); e > 0; --e) m *= v(i);
    }
    acc += m;
  }
  return acc;
}

Vec PolyJet::gradient(const Vec& v, double lambda) const {
  Vec g = Vec::Zero(dim_);
  for (const auto& [key, c] : terms_) {
    const double cv = c.eval(lambda);
    for (int i = 0; i < dim_; ++i) {
      const int ei = static_cast<int>((key >> (4 * i)) & 0xF);
      if (ei == 0) continue;
      double m = cv * ei;
      MonoKey k = key;
      for (int j = 0; j < dim_; ++j, k >>= 4) {
        int e = static_cast<int>(k & 0xF);
        if (j == i) --e;
        for (; e > 0; --e) m *= v(j);
      }
      g(i) += m;
    }
  }
  return g;
}

PolyJet PolyJet::degree_part(int d) const {
  PolyJet out(dim_, max_degree_);
  for (const auto& [key, c] : terms_) {
    if (mono_degree(key, dim_) == d) out.terms_[key] = c;
  }
  return out;
}

PolyJet PolyJet::truncated(int max_total) const {
  PolyJet out(dim_, max_degree_);
  for (const auto& [key, c] : terms_) {
    if (mono_degree(key, dim_) <= max_total) out.terms_[key] = c;
  }
  return out;
}

PolyJet PolyJet::compose_linear(const Mat& M) const {
  if (M.rows() != dim_) {
    throw HopfError(ErrorCode::INVALID_ARGUMENT,
                    "compose_linear: row count != jet dimension");
  }
  const int new_dim = static_cast<int>(M.cols());

  // Powers of the substituted linear forms, built on demand.
  std::vector<std::vector<PolyJet>> powers(dim_);
  auto power = [&](int var, int e) -> const PolyJet& {
    auto& cache = powers[var];
    if (cache.empty()) {
      PolyJet one(new_dim, max_degree_);
      one.add_term(std::vector<int>(new_dim, 0), LambdaPoly(1.0));
      cache.push_back(one);
      PolyJet lin(new_dim, max_degree_);
      for (int j = 0; j < new_dim; ++j) {
        if (M(var, j) == 0.0) continue;
        std::vector<int> exp(new_dim, 0);
        exp[j] = 1;
        lin.add_term(exp, LambdaPoly(M(var, j)));
      }
      cache.push_back(lin);
    }
    while (static_cast<int>(cache.size()) <= e) {
      cache.push_back(cache.back() * cache[1]);
    }
    return cache[e];
  };

  PolyJet out(new_dim, max_degree_);
  for (const auto& [key, c] : terms_) {
    PolyJet prod(new_dim, max_degree_);
    prod.add_term(std::vector<int>(new_dim, 0), LambdaPoly(1.0));
    MonoKey k = key;
    for (int i = 0; i < dim_; ++i, k >>= 4) {
      const int e = static_cast<int>(k & 0xF);
      if (e > 0) prod = prod * power(i, e);
    }
    for (auto& [pk, pc] : prod.terms_) {
      LambdaPoly& slot = out.terms_[pk];
      slot += pc * c;
      if (slot.is_zero()) out.terms_.erase(pk);
    }
  }
  return out;
}

PolyJet PolyJet::at_lambda(double lambda) const {
  PolyJet out(dim_, max_degree_);
  for (const auto& [key, c] : terms_) {
    const double v = c.eval(lambda);
    if (v != 0.0) out.terms_[key] = LambdaPoly(v);
  }
  return out;
}

PolyJet PolyJet::derivative(int var) const {
  PolyJet out(dim_, max_degree_);
  for (const auto& [key, c] : terms_) {
    const int e = static_cast<int>((key >> (4 * var)) & 0xF);
    if (e == 0) continue;
    MonoKey nk = key - (static_cast<MonoKey>(1) << (4 * var));
    LambdaPoly& slot = out.terms_[nk];
    slot += c * static_cast<double>(e);
    if (slot.is_zero()) out.terms_.erase(nk);
  }
  return out;
}

std::vector<std::vector<LambdaPoly>> PolyJet::hessian_poly() const {
  std::vector<std::vector<LambdaPoly>> H(dim_,
                                         std::vector<LambdaPoly>(dim_));
  for (const auto& [key, c] : terms_) {
    if (mono_degree(key, dim_) != 2) continue;
    std::vector<int> e = mono_exponents(key, dim_);
    int i = -1, j = -1;
    for (int k = 0; k < dim_; ++k) {
      if (e[k] == 2) { i = j = k; }
      if (e[k] == 1) { (i < 0 ? i : j) = k; }
    }
    if (i == j) {
      H[i][i] += c * 2.0;
    } else {
      H[i][j] += c;
      H[j][i] += c;
    }
  }
  return H;
}

Mat PolyJet::hessian_at_zero(double lambda) const {
  auto Hp = hessian_poly();
  Mat H(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) H(i, j) = Hp[i][j].eval(lambda);
  }
  return H;
}

PolyJet& PolyJet::operator+=(const PolyJet& o) {
  if (dim_ == 0) dim_ = o.dim_;
  if (o.dim_ != dim_) {
    throw HopfError(ErrorCode::INVALID_ARGUMENT, "jet dimension mismatch");
  }
  for (const auto& [key, c] : o.terms_) {
    LambdaPoly& slot = terms_[key];
    slot += c;
    if (slot.is_zero()) terms_.erase(key);
  }
  return *this;
}

PolyJet& PolyJet::operator-=(const PolyJet& o) {
  PolyJet neg = o;
  neg *= -1.0;
  return *this += neg;
}

PolyJet& PolyJet::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [key, c] : terms_) c *= s;
  return *this;
}

PolyJet operator*(const PolyJet& a, const PolyJet& b) {
  if (a.dim_ != b.dim_) {
    throw HopfError(ErrorCode::INVALID_ARGUMENT, "jet dimension mismatch");
  }
  PolyJet out(a.dim_, a.max_degree_);
  for (const auto& [ka, ca] : a.terms_) {
    const int da = mono_degree(ka, a.dim_);
    for (const auto& [kb, cb] : b.terms_) {
      if (da + mono_degree(kb, b.dim_) > a.max_degree_) continue;
      // 4-bit packed exponents add without carries while degree <= 15.
      const MonoKey k = ka + kb;
      LambdaPoly& slot = out.terms_[k];
      slot += ca * cb;
      if (slot.is_zero()) out.terms_.erase(k);
    }
  }
  return out;
}

double PolyJet::coefficient_norm() const {
  double s = 0.0;
  for (const auto& [key, c] : terms_) s += c.norm() * c.norm();
  return std::sqrt(s);
}

void PolyJet::drop_small(double tol) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second.norm() <= tol) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
}

int PolyJet::max_present_degree() const {
  int d = 0;
  for (const auto& [key, c] : terms_) {
    d = std::max(d, mono_degree(key, dim_));
  }
  return d;
}

PolyJet poisson_bracket(const PolyJet& f, const PolyJet& g) {
  const int dim = f.dim();
  if (dim % 2 != 0 || g.dim() != dim) {
    throw HopfError(ErrorCode::INVALID_ARGUMENT, "bracket dimension mismatch");
  }
  const int n = dim / 2;
  // J = [[0,-I],[I,0]]: {f,g} = grad f . J grad g
  //   = sum_i df/dv_i * (J grad g)_i with (J grad g)_i = -dg/dv_{i+n} (i<n),
  //     (J grad g)_{i+n} = dg/dv_i.
  PolyJet out(dim, f.max_degree());
  for (int i = 0; i < n; ++i) {
    out += f.derivative(i) * (g.derivative(i + n) * (-1.0));
    out += f.derivative(i + n) * g.derivative(i);
  }
  return out;
}

PolyJet taylor_at_origin(const PolyJet& family, int order, double tol) {
  if (order > family.max_degree()) {
    throw HopfError(ErrorCode::INVALID_ARGUMENT,
                    "truncation order exceeds jet capacity");
  }
  for (const auto& [key, c] : family.terms()) {
    if (mono_degree(key, family.dim()) < 2 && c.norm() > tol) {
      throw HopfError(ErrorCode::H1_VIOLATION,
                      "family has constant or linear terms at the origin");
    }
  }
  PolyJet out = family.truncated(order);
  for (int d = 0; d <= 1; ++d) {
    PolyJet low = out.degree_part(d);
    out -= low;
  }
  return out;
}

CompiledGradient::CompiledGradient(const PolyJet& jet, double lambda)
    : dim_(jet.dim()), per_var_(jet.dim()) {
  for (int i = 0; i < dim_; ++i) {
    PolyJet di = jet.derivative(i);
    for (const auto& [key, c] : di.terms()) {
      Term t;
      t.coef = c.eval(lambda);
      t.exps = mono_exponents(key, dim_);
      if (t.coef != 0.0) per_var_[i].push_back(std::move(t));
    }
  }
}

void CompiledGradient::eval(const double* v, double* out) const {
  for (int i = 0; i < dim_; ++i) {
    double acc = 0.0;
    for (const Term& t : per_var_[i]) {
      double m = t.coef;
      for (int j = 0; j < dim_; ++j) {
        for (int e = t.exps[j]; e > 0; --e) m *= v[j];
      }
      acc += m;
    }
    out[i] = acc;
  }
}

Vec CompiledGradient::eval(const Vec& v) const {
  Vec out(dim_);
  eval(v.data(), out.data());
  return out;
}

}  // namespace hopf
