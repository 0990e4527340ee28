#include "hopf/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <unsupported/Eigen/MatrixFunctions>

namespace hopf {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NOT_HAMILTONIAN: return "NOT_HAMILTONIAN";
    case ErrorCode::DEGENERATE_FORM: return "DEGENERATE_FORM";
    case ErrorCode::CLUSTER_AMBIGUOUS: return "CLUSTER_AMBIGUOUS";
    case ErrorCode::NOT_RESONANT: return "NOT_RESONANT";
    case ErrorCode::H1_VIOLATION: return "H1_VIOLATION";
    case ErrorCode::H3_VIOLATION: return "H3_VIOLATION";
    case ErrorCode::H4_VIOLATION: return "H4_VIOLATION";
    case ErrorCode::BLOCK_STRUCTURE_VIOLATION: return "BLOCK_STRUCTURE_VIOLATION";
    case ErrorCode::FIT_RESIDUAL_EXCEEDED: return "FIT_RESIDUAL_EXCEEDED";
    case ErrorCode::HOMOLOGICAL_RESIDUAL: return "HOMOLOGICAL_RESIDUAL";
    case ErrorCode::RHO_SINGULAR: return "RHO_SINGULAR";
    case ErrorCode::NEWTON_DIVERGED: return "NEWTON_DIVERGED";
    case ErrorCode::NO_ROOT: return "NO_ROOT";
    case ErrorCode::DEGENERATE_COEFFICIENTS: return "DEGENERATE_COEFFICIENTS";
    case ErrorCode::CONDITION_VIOLATED: return "CONDITION_VIOLATED";
    case ErrorCode::RANK_DEFICIENT: return "RANK_DEFICIENT";
    case ErrorCode::PARITY_VIOLATION: return "PARITY_VIOLATION";
    case ErrorCode::NOETHER_VIOLATION: return "NOETHER_VIOLATION";
    case ErrorCode::SECTION_DEGENERATE: return "SECTION_DEGENERATE";
    case ErrorCode::NONCONVERGENT: return "NONCONVERGENT";
    case ErrorCode::SCHEMA_ERROR: return "SCHEMA_ERROR";
    case ErrorCode::INVALID_ARGUMENT: return "INVALID_ARGUMENT";
  }
  return "UNKNOWN";
}

Mat standard_j(int two_n) {
  if (two_n <= 0 || two_n % 2 != 0) {
    throw HopfError(ErrorCode::INVALID_ARGUMENT, "J requires even dimension");
  }
  const int n = two_n / 2;
  Mat J = Mat::Zero(two_n, two_n);
  J.topRightCorner(n, n) = -Mat::Identity(n, n);
  J.bottomLeftCorner(n, n) = Mat::Identity(n, n);
  return J;
}

Mat standard_omega(int two_n) {
  if (two_n <= 0 || two_n % 2 != 0) {
    throw HopfError(ErrorCode::INVALID_ARGUMENT,
                    "symplectic form requires even dimension");
  }
  const int n = two_n / 2;
  Mat Om = Mat::Zero(two_n, two_n);
  Om.topRightCorner(n, n) = Mat::Identity(n, n);
  Om.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
  return Om;
}

double symplectic_product(const Mat& omega, const Vec& u, const Vec& v) {
  return u.dot(omega * v);
}

void require_symplectic_form(const Mat& omega, double tol) {
  if (omega.rows() != omega.cols() || omega.rows() % 2 != 0) {
    throw HopfError(ErrorCode::DEGENERATE_FORM, "form must be even square");
  }
  const double scale = std::max(1.0, omega.norm());
  if ((omega + omega.transpose()).norm() > tol * scale) {
    throw HopfError(ErrorCode::DEGENERATE_FORM, "form is not skew-symmetric");
  }
  Eigen::JacobiSVD<Mat> svd(omega);
  if (svd.singularValues().minCoeff() < tol * scale) {
    throw HopfError(ErrorCode::DEGENERATE_FORM, "form is singular");
  }
}

bool is_infinitesimally_symplectic(const Mat& A, const Mat& omega, double tol) {
  const Mat R = omega * A + A.transpose() * omega;
  const double scale = std::max(1.0, omega.norm() * A.norm());
  return R.norm() <= tol * scale;
}

Mat quadratic_hamiltonian(const Mat& A, const Mat& omega, double tol) {
  require_symplectic_form(omega);
  if (!is_infinitesimally_symplectic(A, omega, tol)) {
    throw HopfError(ErrorCode::NOT_HAMILTONIAN,
                    "Omega*A + A^T*Omega does not vanish");
  }
  // A = -Omega^{-1} H  =>  H = -Omega A; symmetrize away roundoff.
  Mat H = -omega * A;
  return 0.5 * (H + H.transpose());
}

Mat expm(const Mat& A) { return A.exp(); }
CMat expm(const CMat& A) { return A.exp(); }

namespace {

// Union-find clustering of eigenvalues by pairwise distance.
std::vector<std::vector<int>> cluster_indices(const CVec& mu, double tol) {
  const int n = static_cast<int>(mu.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(mu(i) - mu(j)) < tol) parent[find(i)] = find(j);
    }
  }
  std::vector<std::vector<int>> groups(n);
  for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<int>> out;
  for (auto& g : groups) {
    if (!g.empty()) out.push_back(std::move(g));
  }
  // Deterministic order: by (Re, Im) of the smallest representative value.
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
    const Complex x = mu(a.front()), y = mu(b.front());
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return out;
}

}  // namespace

JordanChevalley jordan_chevalley(const Mat& A, double cluster_tol) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n) {
    throw HopfError(ErrorCode::INVALID_ARGUMENT, "square matrix required");
  }
  const double scale = std::max(A.norm(), 1e-300);
  const double tol = cluster_tol * scale;

  Eigen::ComplexEigenSolver<CMat> es(A.cast<Complex>());
  if (es.info() != Eigen::Success) {
    throw HopfError(ErrorCode::NONCONVERGENT, "eigensolver failed");
  }
  CVec mu = es.eigenvalues();

  JordanChevalley out;
  out.clusters = cluster_indices(mu, tol);

  // Cluster means; reject configurations where the merge decision is fragile.
  out.cluster_values.reserve(out.clusters.size());
  for (const auto& c : out.clusters) {
    Complex mean = 0.0;
    for (int i : c) mean += mu(i);
    mean /= static_cast<double>(c.size());
    out.cluster_values.push_back(mean);
  }
  for (size_t a = 0; a < out.cluster_values.size(); ++a) {
    for (size_t b = a + 1; b < out.cluster_values.size(); ++b) {
      if (std::abs(out.cluster_values[a] - out.cluster_values[b]) < 2.0 * tol) {
        throw HopfError(ErrorCode::CLUSTER_AMBIGUOUS,
                        "eigenvalue clusters closer than 2*cluster_tol");
      }
    }
  }

  out.eigenvalues = CVec(n);
  {
    int pos = 0;
    for (size_t c = 0; c < out.clusters.size(); ++c) {
      for (size_t k = 0; k < out.clusters[c].size(); ++k) {
        out.eigenvalues(pos++) = out.cluster_values[c];
      }
    }
  }

  // Generalized eigenspaces: the algebraic multiplicity is known from the
  // clustering, so take exactly that many smallest right singular vectors
  // of ((A - mu I)/s)^m.
  const CMat Ac = A.cast<Complex>();
  CMat W(n, n);
  std::vector<int> block_of(out.clusters.size());
  int col = 0;
  for (size_t c = 0; c < out.clusters.size(); ++c) {
    const int m = static_cast<int>(out.clusters[c].size());
    CMat M = (Ac - out.cluster_values[c] * CMat::Identity(n, n)) / scale;
    CMat P = CMat::Identity(n, n);
    for (int k = 0; k < m; ++k) P = P * M;
    Eigen::JacobiSVD<CMat> svd(P, Eigen::ComputeFullV);
    block_of[c] = col;
    for (int k = 0; k < m; ++k) {
      W.col(col++) = svd.matrixV().col(n - 1 - k);
    }
  }

  Eigen::FullPivLU<CMat> lu(W);
  if (!lu.isInvertible()) {
    throw HopfError(ErrorCode::CLUSTER_AMBIGUOUS,
                    "generalized eigenspaces do not span");
  }
  CMat D = CMat::Zero(n, n);
  for (size_t c = 0; c < out.clusters.size(); ++c) {
    const int m = static_cast<int>(out.clusters[c].size());
    for (int k = 0; k < m; ++k) {
      D(block_of[c] + k, block_of[c] + k) = out.cluster_values[c];
    }
  }
  CMat As_c = W * D * lu.inverse();
  if (As_c.imag().norm() > 1e-8 * scale) {
    throw HopfError(ErrorCode::CLUSTER_AMBIGUOUS,
                    "semisimple part has nonreal residue");
  }
  out.semisimple = As_c.real();
  out.nilpotent = A - out.semisimple;

  // Structural invariants; failures indicate an unreliable clustering.
  // The decomposition is only determined up to the clustering scale, so the
  // commutator and nilpotency checks are relative to that scale.
  const double structural = std::max(1e-8, cluster_tol);
  Mat recon = out.semisimple + out.nilpotent - A;
  out.reconstruction_residual = recon.norm() / scale;
  Mat comm = out.semisimple * out.nilpotent - out.nilpotent * out.semisimple;
  out.commutator_residual = comm.norm() / (scale * scale);
  Mat Npow = out.nilpotent;
  for (int k = 1; k < n; ++k) Npow = Npow * (out.nilpotent / scale);
  if (out.reconstruction_residual > 1e-10 ||
      out.commutator_residual > structural ||
      Npow.norm() > structural * scale) {
    throw HopfError(ErrorCode::CLUSTER_AMBIGUOUS,
                    "decomposition invariants violated");
  }
  return out;
}

Mat orthonormal_columns(const Mat& V, double tol) {
  if (V.cols() == 0) return V;
  Eigen::JacobiSVD<Mat> svd(V, Eigen::ComputeThinU);
  const double smax = svd.singularValues()(0);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > tol * smax) ++rank;
  }
  return svd.matrixU().leftCols(rank);
}

Mat realify_basis(const CMat& V, double tol) {
  std::vector<Vec> cols;
  std::vector<bool> used(V.cols(), false);
  const double scale = std::max(1.0, V.norm());
  for (int i = 0; i < V.cols(); ++i) {
    if (used[i]) continue;
    if (V.col(i).imag().norm() < tol * scale) {
      cols.push_back(V.col(i).real());
      used[i] = true;
      continue;
    }
    cols.push_back(V.col(i).real());
    cols.push_back(V.col(i).imag());
    used[i] = true;
    // Mark the conjugate partner, if present, as consumed.
    for (int j = i + 1; j < V.cols(); ++j) {
      if (!used[j] && (V.col(j) - V.col(i).conjugate()).norm() < tol * scale) {
        used[j] = true;
        break;
      }
    }
  }
  Mat R(V.rows(), static_cast<int>(cols.size()));
  for (size_t k = 0; k < cols.size(); ++k) R.col(static_cast<int>(k)) = cols[k];
  return R;
}

Mat solve_min_norm(const Mat& A, const Mat& B) {
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(A);
  return cod.solve(B);
}

CMat solve_min_norm(const CMat& A, const CMat& B) {
  Eigen::CompleteOrthogonalDecomposition<CMat> cod(A);
  return cod.solve(B);
}

double rel_err(const Mat& X, const Mat& Y) {
  return (X - Y).norm() / std::max(1.0, Y.norm());
}

}  // namespace hopf
