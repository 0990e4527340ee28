#include "hopf/branches.hpp"

#include <cmath>
#include <deque>

namespace hopf {

const char* to_string(OrbitType t) {
  return t == OrbitType::PERIODIC ? "PERIODIC" : "RPO";
}

const char* to_string(NormalizerQuotient q) {
  switch (q) {
    case NormalizerQuotient::S1_TRIVIAL: return "S1_TRIVIAL";
    case NormalizerQuotient::S1_Z2: return "S1_Z2";
    case NormalizerQuotient::SU2: return "SU2";
  }
  return "?";
}

BranchPrediction o2_branch(double a, double b, double sigma_prime, double nu0,
                           double lambda0, double r_sq, double alpha,
                           double xi) {
  const double scale = std::max({std::abs(a), std::abs(b), 1.0});
  if (std::abs(a - b) <= 1e-12 * scale || std::abs(a) <= 1e-12 * scale ||
      std::abs(b) <= 1e-12 * scale) {
    throw HopfError(ErrorCode::DEGENERATE_COEFFICIENTS,
                    "branch law needs a != b and a b != 0");
  }
  if (std::abs(sigma_prime) <= 1e-12) {
    throw HopfError(ErrorCode::H4_VIOLATION,
                    "transversality sigma' vanishes");
  }
  const double split = 4.0 * nu0 * alpha * xi / (a - b);
  BranchPrediction out;
  out.pi1 = 0.5 * (r_sq + split);
  out.pi2 = 0.5 * (r_sq - split);
  out.admissible = out.pi1 >= 0.0 && out.pi2 >= 0.0;
  out.alpha = alpha;
  out.xi = xi;
  out.type = xi != 0.0 ? OrbitType::RPO : OrbitType::PERIODIC;
  out.lambda = lambda0 +
               (-(nu0 * alpha) * (nu0 * alpha) + 2.0 * nu0 * alpha * xi -
                (a * out.pi1 + b * out.pi2)) /
                   sigma_prime;
  return out;
}

std::pair<double, double> o2_split_product(double product, double nu0) {
  const double mag = std::sqrt(std::abs(product));
  const double alpha = (product >= 0.0 ? 1.0 : -1.0) * mag / std::sqrt(nu0);
  return {alpha, mag * std::sqrt(nu0)};
}

BranchPrediction o2_branch_product(double a, double b, double sigma_prime,
                                   double nu0, double lambda0, double r_sq,
                                   double product) {
  const auto [alpha, xi] = o2_split_product(product, nu0);
  return o2_branch(a, b, sigma_prime, nu0, lambda0, r_sq, alpha, xi);
}

TorusBranch torus_branch(const Vec& psi, const Mat& c_hat, double pi_n,
                         double sigma_prime, double nu0, double lambda0) {
  (void)nu0;
  const int n = static_cast<int>(psi.size());
  if (c_hat.rows() != n || c_hat.cols() != n || n < 1) {
    throw HopfError(ErrorCode::INVALID_ARGUMENT,
                    "psi and c_hat sizes disagree");
  }
  if (std::abs(sigma_prime) <= 1e-12) {
    throw HopfError(ErrorCode::H4_VIOLATION,
                    "transversality sigma' vanishes");
  }

  Vec pi = Vec::Zero(n);
  pi(n - 1) = pi_n;
  if (n > 1) {
    Mat delta(n - 1, n - 1);
    Vec rhs(n - 1);
    for (int i = 0; i < n - 1; ++i) {
      for (int j = 0; j < n - 1; ++j) {
        delta(i, j) = c_hat(i, j) - c_hat(n - 1, j);
      }
      rhs(i) = -(psi(i) * psi(i) - psi(n - 1) * psi(n - 1)) -
               (c_hat(i, n - 1) - c_hat(n - 1, n - 1)) * pi_n;
    }
    Eigen::JacobiSVD<Mat> svd(delta,
                              Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= 1e-10 * std::max(1.0, sv(0))) {
      throw HopfError(ErrorCode::RANK_DEFICIENT,
                      "coupling difference matrix loses rank");
    }
    pi.head(n - 1) = svd.solve(rhs);
  }

  TorusBranch out;
  out.pi = pi;
  out.admissible = (pi.array() >= 0.0).all();
  double row_n = psi(n - 1) * psi(n - 1);
  for (int j = 0; j < n; ++j) row_n += c_hat(n - 1, j) * pi(j);
  out.lambda = lambda0 - row_n / sigma_prime;
  return out;
}

Vec torus_frequencies(double alpha, const Vec& xi, const Vec& c) {
  const int m = static_cast<int>(xi.size());
  if (c.size() != m) {
    throw HopfError(ErrorCode::INVALID_ARGUMENT, "xi and c sizes disagree");
  }
  if (std::abs(c.sum() - 1.0) <= 1e-12) {
    throw HopfError(ErrorCode::CONDITION_VIOLATED,
                    "coupling weights sum to 1");
  }
  Vec psi(m + 1);
  for (int j = 0; j < m; ++j) psi(j) = xi(j) + alpha;
  psi(m) = c.dot(xi) + alpha;
  return psi;
}

int maximal_isotropy_count(int l, NormalizerQuotient q) {
  switch (q) {
    case NormalizerQuotient::S1_TRIVIAL:
      if (l <= 0 || l % 2 != 0) {
        throw HopfError(ErrorCode::PARITY_VIOLATION,
                        "circle quotient needs even dimension");
      }
      return l / 2;
    case NormalizerQuotient::S1_Z2:
    case NormalizerQuotient::SU2:
      if (l <= 0 || l % 4 != 0) {
        throw HopfError(ErrorCode::PARITY_VIOLATION,
                        "quotient needs dimension divisible by 4");
      }
      return l / 4;
  }
  throw HopfError(ErrorCode::INVALID_ARGUMENT, "unknown quotient");
}

namespace {

Mat element_action(const SpatioTemporalElement& e) {
  const int d = static_cast<int>(e.g.rows());
  return (std::cos(e.theta) * Mat::Identity(d, d) +
          std::sin(e.theta) * standard_j(d)) *
         e.g;
}

}  // namespace

FixedSpaceData fixed_point_restriction(
    const std::vector<SpatioTemporalElement>& generators,
    const std::vector<SpatioTemporalElement>& normalizer, double tol) {
  int d = 0;
  for (const auto& e : generators) d = static_cast<int>(e.g.rows());
  for (const auto& e : normalizer) d = static_cast<int>(e.g.rows());
  if (d == 0) {
    throw HopfError(ErrorCode::INVALID_ARGUMENT, "no elements given");
  }

  // Close the generated finite group.
  std::vector<Mat> gens;
  for (const auto& e : generators) gens.push_back(element_action(e));
  std::vector<Mat> group{Mat::Identity(d, d)};
  auto known = [&](const Mat& m) {
    for (const Mat& g : group) {
      if ((g - m).norm() <= 1e-9 * std::sqrt(static_cast<double>(d))) {
        return true;
      }
    }
    return false;
  };
  std::deque<Mat> queue(group.begin(), group.end());
  const size_t cap = 256;
  while (!queue.empty()) {
    Mat cur = queue.front();
    queue.pop_front();
    for (const Mat& g : gens) {
      Mat next = g * cur;
      if (!known(next)) {
        if (group.size() >= cap) {
          throw HopfError(ErrorCode::NONCONVERGENT,
                          "group closure exceeded cap");
        }
        group.push_back(next);
        queue.push_back(next);
      }
    }
  }

  Mat P = Mat::Zero(d, d);
  for (const Mat& g : group) P += g;
  P /= static_cast<double>(group.size());

  FixedSpaceData out;
  out.projector_residual = (P * P - P).norm();
  if (out.projector_residual > 1e-8 * std::max(1.0, P.norm())) {
    throw HopfError(ErrorCode::NONCONVERGENT,
                    "averaged projector is not idempotent");
  }

  Eigen::JacobiSVD<Mat> svd(P, Eigen::ComputeFullU);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > 0.5) ++rank;
  }
  out.basis = svd.matrixU().leftCols(rank);
  const Mat& B = out.basis;
  const Mat Pperp = Mat::Identity(d, d) - B * B.transpose();

  auto restrict_into = [&](const Mat& M, const char* what) -> Mat {
    const double leak = (Pperp * M * B).norm();
    if (leak > tol * std::max(1.0, M.norm())) {
      throw HopfError(ErrorCode::BLOCK_STRUCTURE_VIOLATION,
                      std::string(what) + " does not preserve the fixed space");
    }
    return B.transpose() * M * B;
  };

  for (const auto& e : normalizer) {
    out.restricted.push_back(restrict_into(element_action(e), "normalizer"));
  }
  out.j_restricted = restrict_into(standard_j(d), "complex structure");
  return out;
}

}  // namespace hopf
