#ifndef TL_TYPES_HPP
#define TL_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace tl {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Relative thresholds shared by every rank, invertibility and norm decision.
struct Tolerances {
  double rank_tol = 1e-9;    ///< singular values below rank_tol * largest count as zero
  double invert_tol = 1e-8;  ///< invertible iff smallest singular value > invert_tol * norm
  double norm_tol = 1e-10;   ///< slack accepted when comparing norm identities

  bool valid() const {
    auto ok = [](double t) { return t > 0.0 && t < 1.0; };
    return ok(rank_tol) && ok(invert_tol) && ok(norm_tol);
  }
};

struct precondition_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct unsupported_operation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct membership_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Seeded random source with a fixed engine and a fixed bits-to-double
/// mapping, so a given seed produces the same stream everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform in [-1, 1).
  double symmetric() { return 2.0 * uniform() - 1.0; }

  Complex complex_box() {
    double re = symmetric();
    double im = symmetric();
    return {re, im};
  }

  std::uint64_t below(std::uint64_t n) { return gen_() % n; }

  Matrix matrix(Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = complex_box();
    return m;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace tl

#endif
