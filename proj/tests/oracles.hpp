#pragma once

// Independent reference computations used to check the library. Nothing here
// calls into the code under test beyond plain data types.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// ---- random generators ----------------------------------------------------

struct Rng {
  std::mt19937_64 engine;
  explicit Rng(std::uint64_t seed) : engine(seed) {}
  double uniform() { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal() {
    const double u1 = 1.0 - uniform(), u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
  cd complex_normal() { return {normal(), normal()}; }
  Vec unit_vector(Eigen::Index n) {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = complex_normal();
    return v / v.norm();
  }
  Mat matrix(Eigen::Index n) {
    Mat m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) m(i, j) = complex_normal();
    return m;
  }
  Mat hermitian(Eigen::Index n) {
    const Mat m = matrix(n);
    return 0.5 * (m + m.adjoint());
  }
  // Random full-rank density matrix G G^dagger / Tr.
  Mat density(Eigen::Index n) {
    const Mat g = matrix(n);
    const Mat rho = g * g.adjoint();
    return rho / rho.trace().real();
  }
};

// ---- linear algebra -------------------------------------------------------

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

inline Vec kron(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index k = 0; k < b.size(); ++k) out(i * b.size() + k) = a(i) * b(k);
  return out;
}

inline double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

// Eigenvalues of a I + b sigma_z + c sigma_x are a -+ sqrt(b^2 + c^2).
inline double qubit_affine_min_eigenvalue(double a, double b, double c) { return a - std::hypot(b, c); }

// ---- joint measurability --------------------------------------------------

// Exhaustive search over M_ab = C_ab + A_ab sigma_z + B_ab sigma_x + D_ab sigma_y
// reproducing P_+- = (1 +- eps sigma_z)/2 and Q_+- = (1 +- delta sigma_x)/2.
// The marginal conditions leave A_++ and B_++ free (A_-- = A_++ - eps/2,
// B_-- = B_++ - delta/2) and D_++ = -D_+- = -D_-+ = D_-- = d. The C_ab
// are constrained only through C_++ = C_-- = c, C_+- = C_-+ = 1/2 - c, and
// positivity needs C_ab >= r_ab, so a choice of (A_++, B_++) admits a
// positive decomposition iff max(r_++, r_--) + max(r_+-, r_-+) <= 1/2.
// Returns the smallest slack found (<= 0 means a solution exists).
struct GridResult {
  double min_slack = std::numeric_limits<double>::infinity();
  double a_pp = 0.0;
  double b_pp = 0.0;
};

inline GridResult joint_grid_search(double eps, double delta, double step = 1e-3, double d = 0.0) {
  GridResult best;
  const auto n = static_cast<long>(std::llround(1.0 / step));
  const double d2 = d * d;
  for (long i = 0; i <= n; ++i) {
    const double a_pp = -0.5 + static_cast<double>(i) * step;
    const double a_mm = a_pp - eps / 2.0;
    const double a_pp2 = a_pp * a_pp + d2, a_mm2 = a_mm * a_mm + d2;
    for (long j = 0; j <= n; ++j) {
      const double b_pp = -0.5 + static_cast<double>(j) * step;
      const double b_mm = b_pp - delta / 2.0;
      const double bp2 = b_pp * b_pp, bm2 = b_mm * b_mm;
      const double diag = std::max(a_pp2 + bp2, a_mm2 + bm2);   // r_++, r_--
      const double cross = std::max(a_mm2 + bp2, a_pp2 + bm2);  // r_+-, r_-+
      const double slack = std::sqrt(diag) + std::sqrt(cross) - 0.5;
      if (slack < best.min_slack) best = {slack, a_pp, b_pp};
    }
  }
  return best;
}

// ---- master equation ------------------------------------------------------

// exp(t L) with L built in row-major vectorization vec(A X B) = (A (x) B^T) vec(X).
inline Mat lindblad_exact(const Mat& h, const std::vector<Mat>& jumps, const Mat& rho0, double t, double hbar = 1.0) {
  const Eigen::Index n = h.rows();
  const Mat id = Mat::Identity(n, n);
  Mat k = Mat::Zero(n, n);
  for (const auto& l : jumps) k += l.adjoint() * l;
  const cd mi(0.0, -1.0 / hbar);
  Mat super = mi * (kron(h, id) - kron(id, Mat(h.transpose())));
  for (const auto& l : jumps) super += kron(l, Mat(l.conjugate()));
  super -= 0.5 * (kron(k, id) + kron(id, Mat(k.transpose())));
  Vec v(n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) v(i * n + j) = rho0(i, j);
  const Vec out = (super * t).exp() * v;
  Mat rho(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) rho(i, j) = out(i * n + j);
  return rho;
}

// Independent dense generator, written as the textbook commutator form.
inline Mat lindblad_rhs(const Mat& h, const std::vector<Mat>& jumps, const Mat& rho, double hbar = 1.0) {
  Mat out = cd(0.0, -1.0 / hbar) * (h * rho - rho * h);
  for (const auto& l : jumps) {
    const Mat ldl = l.adjoint() * l;
    out += l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
  }
  return out;
}

// ---- experiments ----------------------------------------------------------

// Qubit Bloch vector (x, y, z) of rho.
inline std::array<double, 3> bloch(const Mat& rho) {
  return {2.0 * rho(0, 1).real(), -2.0 * rho(0, 1).imag(), (rho(0, 0) - rho(1, 1)).real()};
}

// Non-selective unsharp x-measurement of strength eps scales y and z by
// sqrt(1 - eps^2); the following z-projection gives p_+- = (1 +- z')/2.
inline std::pair<double, double> sequential_probabilities(double eps, const Mat& rho) {
  const double z = bloch(rho)[2] * std::sqrt(1.0 - eps * eps);
  return {(1.0 + z) / 2.0, (1.0 - z) / 2.0};
}

// Sorkin combination from |sum_{i in A} c_i|^2, no matrices involved.
inline double sorkin_direct(const std::array<cd, 3>& c, double eps, int copies) {
  static const int subsets[7][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}};
  static const double sign[7] = {1, 1, 1, -1, -1, -1, 1};
  double total = 0.0;
  for (int a = 0; a < 7; ++a) {
    cd amp = 0.0;
    for (int i = 0; i < 3; ++i) amp += static_cast<double>(subsets[a][i]) * c[static_cast<std::size_t>(i)];
    const double p = std::norm(amp);
    total += sign[a] * (copies == 1 ? p : 2.0 * p + eps * p * p);
  }
  return total;
}

// Continuous-time transform of A e^{-g t} cos(w0 t) on t >= 0.
inline cd damped_cosine_transform(double amp, double g, double w0, double omega) {
  const cd i(0.0, 1.0);
  return 0.5 * amp * (1.0 / (g - i * (omega - w0)) + 1.0 / (g - i * (omega + w0)));
}

// Trapezoid average of cos^{2m} over one period.
inline double cos_power_mean(int m, int samples = 200000) {
  double acc = 0.0;
  for (int i = 0; i < samples; ++i) acc += std::pow(std::cos(M_PI * (i + 0.5) / samples), 2 * m);
  return acc / samples;
}

}  // namespace oracle
