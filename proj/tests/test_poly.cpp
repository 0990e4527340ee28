#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "fixtures.hpp"
#include "hopf/poly.hpp"

using namespace hopf;

namespace {

PolyJet sample_jet() {
  // h = (1 + 2 lambda) v0^2 v1 + 3 v1 v2 - 0.5 v0
  PolyJet p(3);
  p.add_term({2, 1, 0}, LambdaPoly{1.0, 2.0});
  p.add_term({0, 1, 1}, LambdaPoly{3.0});
  p.add_term({1, 0, 0}, LambdaPoly{-0.5});
  return p;
}

}  // namespace

TEST_CASE("lambda polynomials evaluate by ascending power") {
  LambdaPoly p{2.0, -1.0, 0.5};
  CHECK(p.eval(0.0) == doctest::Approx(2.0));
  CHECK(p.eval(2.0) == doctest::Approx(2.0 - 2.0 + 2.0));
  CHECK(p.degree() == 2);
  LambdaPoly d = p.derivative();
  CHECK(d.eval(3.0) == doctest::Approx(-1.0 + 3.0));
  CHECK(LambdaPoly::monomial(3, 2.0).eval(2.0) == doctest::Approx(16.0));
  CHECK((p * LambdaPoly{0.0, 1.0}).eval(2.0) == doctest::Approx(2.0 * p.eval(2.0)));
  CHECK(LambdaPoly{0.0}.is_zero());
}

TEST_CASE("monomial keys round trip") {
  std::vector<int> exps = {2, 0, 1, 3};
  MonoKey k = mono_key(exps);
  CHECK(mono_exponents(k, 4) == exps);
  CHECK(mono_degree(k, 4) == 6);
}

TEST_CASE("jet evaluation matches the hand value") {
  PolyJet p = sample_jet();
  Vec v(3);
  v << 1.0, -2.0, 0.5;
  double lam = 0.3;
  double expect = (1.0 + 0.6) * 1.0 * (-2.0) + 3.0 * (-2.0) * 0.5 - 0.5 * 1.0;
  CHECK(p.eval(v, lam) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(p.max_present_degree() == 3);
}

TEST_CASE("gradient agrees with finite differences") {
  PolyJet p = sample_jet();
  std::mt19937 gen(3);
  for (int trial = 0; trial < 10; ++trial) {
    Vec v = testfx::random_vec(gen, 3);
    double lam = 0.2 * trial - 1.0;
    Vec g = p.gradient(v, lam);
    for (int i = 0; i < 3; ++i) {
      double h = 1e-6;
      Vec vp = v, vm = v;
      vp(i) += h;
      vm(i) -= h;
      double fd = (p.eval(vp, lam) - p.eval(vm, lam)) / (2 * h);
      CHECK(g(i) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("degree selection and truncation") {
  PolyJet p = sample_jet();
  CHECK(p.degree_part(3).max_present_degree() == 3);
  CHECK(p.degree_part(3).terms().size() == 1);
  CHECK(p.truncated(2).max_present_degree() == 2);
  Vec v(3);
  v << 0.7, -0.3, 1.1;
  double sum = p.degree_part(1).eval(v, 0.4) + p.degree_part(2).eval(v, 0.4) +
               p.degree_part(3).eval(v, 0.4);
  CHECK(sum == doctest::Approx(p.eval(v, 0.4)).epsilon(1e-14));
}

TEST_CASE("compose_linear is evaluation under the substitution") {
  PolyJet p = sample_jet();
  Mat m(3, 2);
  m << 1, 2, 0, -1, 3, 1;
  PolyJet q = p.compose_linear(m);
  CHECK(q.dim() == 2);
  std::mt19937 gen(5);
  for (int trial = 0; trial < 8; ++trial) {
    Vec u = testfx::random_vec(gen, 2);
    CHECK(q.eval(u, 0.6) ==
          doctest::Approx(p.eval(Vec(m * u), 0.6)).epsilon(1e-12));
  }
}

TEST_CASE("at_lambda freezes the parameter") {
  PolyJet p = sample_jet();
  PolyJet frozen = p.at_lambda(0.25);
  Vec v(3);
  v << -1.0, 0.5, 2.0;
  CHECK(frozen.eval(v, 99.0) == doctest::Approx(p.eval(v, 0.25)));
}

TEST_CASE("hessian of a quadratic jet") {
  // h = v0^2 + 3 v0 v1 - 2 lambda v1^2
  PolyJet p(2);
  p.add_term({2, 0}, LambdaPoly{1.0});
  p.add_term({1, 1}, LambdaPoly{3.0});
  p.add_term({0, 2}, LambdaPoly{0.0, -2.0});
  Mat h = p.hessian_at_zero(0.5);
  Mat expect(2, 2);
  expect << 2, 3, 3, -2;
  CHECK(rel_err(h, expect) < 1e-14);
  // 1/2 v^T H v reproduces the quadratic values.
  Vec v(2);
  v << 1.3, -0.4;
  CHECK(0.5 * v.dot(h * v) == doctest::Approx(p.eval(v, 0.5)).epsilon(1e-13));
}

TEST_CASE("jet product truncates at the jet order") {
  PolyJet a(2), b(2);
  a.add_term({2, 0}, LambdaPoly{1.0});
  a.add_term({0, 1}, LambdaPoly{2.0});
  b.add_term({0, 2}, LambdaPoly{1.0});
  b.add_term({1, 0}, LambdaPoly{-1.0});
  PolyJet ab = a * b;
  CHECK(ab.max_present_degree() <= 4);
  Vec v(2);
  v << 0.3, 0.7;
  // All products of degree <= 4 survive; here every product does.
  CHECK(ab.eval(v, 0.0) == doctest::Approx(a.eval(v, 0.0) * b.eval(v, 0.0)));
  // Degree-3 x degree-2 terms vanish from the product.
  PolyJet c(2);
  c.add_term({3, 0}, LambdaPoly{1.0});
  CHECK((c * b).terms().size() == 1);  // only v0^3 * v0 survives at degree 4
}

TEST_CASE("poisson bracket orientation in frame coordinates") {
  // dim 4, J = standard_j: {v0, v2} = J(0, 2) = -1, {v2, v0} = +1.
  PolyJet f(4), g(4);
  f.add_term({1, 0, 0, 0}, LambdaPoly{1.0});
  g.add_term({0, 0, 1, 0}, LambdaPoly{1.0});
  PolyJet br = poisson_bracket(f, g);
  Vec v = Vec::Zero(4);
  CHECK(br.eval(v, 0.0) == doctest::Approx(-1.0));
  PolyJet rb = poisson_bracket(g, f);
  CHECK(rb.eval(v, 0.0) == doctest::Approx(1.0));
  // {f, f} = 0 and Leibniz on a simple product.
  CHECK(poisson_bracket(f, f).coefficient_norm() == doctest::Approx(0.0));
  PolyJet h = g * g;
  PolyJet lhs = poisson_bracket(f, h);
  PolyJet rhs = poisson_bracket(f, g) * g + g * poisson_bracket(f, g);
  Vec w(4);
  w << 0.2, -0.5, 1.1, 0.9;
  CHECK(lhs.eval(w, 0.0) == doctest::Approx(rhs.eval(w, 0.0)).epsilon(1e-13));
}

TEST_CASE("bracket of quadratics generates the commutator flow") {
  // For h = 1/2 v^T H v and k = 1/2 v^T K v the bracket (grad h)^T J grad k
  // is quadratic with Hessian H J K - K J H.
  std::mt19937 gen(17);
  Mat hm = testfx::random_symmetric(gen, 4, 1.0);
  Mat km = testfx::random_symmetric(gen, 4, 1.0);
  auto quad = [](const Mat& m) {
    PolyJet p(4);
    for (int i = 0; i < 4; ++i) {
      for (int j = i; j < 4; ++j) {
        std::vector<int> e(4, 0);
        e[i] += 1;
        e[j] += 1;
        if (m(i, j) != 0.0) p.add_term(e, LambdaPoly{m(i, j) * (i == j ? 0.5 : 1.0)});
      }
    }
    return p;
  };
  PolyJet br = poisson_bracket(quad(hm), quad(km));
  Mat jm = standard_j(4);
  Mat expect = hm * jm * km - km * jm * hm;
  CHECK(rel_err(br.hessian_at_zero(0.0), expect) < 1e-12);
}

TEST_CASE("taylor_at_origin enforces the equilibrium hypothesis") {
  PolyJet good(2);
  good.add_term({2, 0}, LambdaPoly{1.0});
  CHECK(taylor_at_origin(good).max_present_degree() == 2);

  PolyJet linear(2);
  linear.add_term({1, 0}, LambdaPoly{1e-6});
  linear.add_term({2, 0}, LambdaPoly{1.0});
  CHECK_HOPF_THROWS(H1_VIOLATION, taylor_at_origin(linear));

  PolyJet constant(2);
  constant.add_term({0, 0}, LambdaPoly{1.0});
  constant.add_term({2, 0}, LambdaPoly{1.0});
  CHECK_HOPF_THROWS(H1_VIOLATION, taylor_at_origin(constant));
}

TEST_CASE("compiled gradient matches the jet gradient") {
  PolyJet p = sample_jet();
  CompiledGradient cg(p, 0.4);
  std::mt19937 gen(29);
  for (int trial = 0; trial < 10; ++trial) {
    Vec v = testfx::random_vec(gen, 3);
    CHECK((cg.eval(v) - p.gradient(v, 0.4)).norm() < 1e-13);
  }
}

TEST_CASE("jets above dimension 16 are rejected") {
  CHECK_HOPF_THROWS(INVALID_ARGUMENT, PolyJet(18).add_term(
      std::vector<int>(18, 0), LambdaPoly{1.0}));
}
