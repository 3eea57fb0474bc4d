#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>

// Counter-based deterministic RNG. Every consumer derives an independent
// stream from (seed, key); per-sample streams keyed by the sample index make
// chunked parallel sampling reproduce the serial sequence byte for byte.

namespace epc::rng {

inline uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline uint64_t derive(uint64_t seed, uint64_t tag) {
  return mix64(seed ^ mix64(tag + 0x9E3779B97F4A7C15ull));
}

class Stream {
 public:
  Stream(uint64_t seed, uint64_t key) : state_(derive(seed, key)) {}

  uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix64(state_);
  }

  // Uniform on (0,1]; never returns 0, safe under log().
  double next_unit() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1p-53; }

  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_unit();
    double u2 = next_unit();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

inline Eigen::VectorXd normal_vector(int n, Stream& s) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = s.next_normal();
  return v;
}

// Haar-ish orthogonal matrix: QR of a Gaussian matrix with sign-fixed R diagonal.
inline Eigen::MatrixXd random_orthogonal(int n, Stream& s) {
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = s.next_normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i)
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  return q;
}

// Symmetric matrix with eigenvalues drawn uniformly from [lo, hi].
inline Eigen::MatrixXd random_sym_eig(int n, Stream& s, double lo, double hi) {
  Eigen::MatrixXd q = random_orthogonal(n, s);
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d[i] = s.next_uniform(lo, hi);
  Eigen::MatrixXd m = q * d.asDiagonal() * q.transpose();
  return 0.5 * (m + m.transpose());
}

}  // namespace epc::rng
