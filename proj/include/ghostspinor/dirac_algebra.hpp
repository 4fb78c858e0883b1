#ifndef GHOSTSPINOR_DIRAC_ALGEBRA_HPP
#define GHOSTSPINOR_DIRAC_ALGEBRA_HPP

// Fixed-size complex 4x4 algebra for the standard-representation gamma
// matrices, Minkowski metric (+,-,-,-) and bispinors.

#include <array>
#include <complex>
#include <stdexcept>

namespace ghostspinor {

using complexd = std::complex<double>;

class ComplexMatrix4 {
 public:
  ComplexMatrix4() = default;

  complexd& operator()(int row, int col) { return e_[row * 4 + col]; }
  const complexd& operator()(int row, int col) const { return e_[row * 4 + col]; }

  static ComplexMatrix4 identity();
  static ComplexMatrix4 zero();

  friend ComplexMatrix4 operator+(const ComplexMatrix4& a, const ComplexMatrix4& b);
  friend ComplexMatrix4 operator-(const ComplexMatrix4& a, const ComplexMatrix4& b);
  friend ComplexMatrix4 operator*(const ComplexMatrix4& a, const ComplexMatrix4& b);
  friend ComplexMatrix4 operator*(complexd s, const ComplexMatrix4& a);
  friend bool operator==(const ComplexMatrix4& a, const ComplexMatrix4& b);

  // Largest entry magnitude; handy for exact-zero checks on integer-entry products.
  double max_abs() const;

 private:
  std::array<complexd, 16> e_{};
};

struct Bispinor {
  std::array<complexd, 4> c{};

  Bispinor() = default;
  Bispinor(complexd c0, complexd c1, complexd c2, complexd c3) : c{c0, c1, c2, c3} {}

  complexd& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
  const complexd& operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

  friend Bispinor operator+(const Bispinor& a, const Bispinor& b);
  friend Bispinor operator-(const Bispinor& a, const Bispinor& b);
  friend Bispinor operator*(complexd s, const Bispinor& a);
  friend Bispinor operator*(const Bispinor& a, complexd s) { return s * a; }
  friend Bispinor operator-(const Bispinor& a);

  // psi^dagger psi, real and >= 0.
  double norm_squared() const;
  double max_abs() const;
};

// Matrix acting on a bispinor.
Bispinor operator*(const ComplexMatrix4& m, const Bispinor& v);

// The four upper-index gamma matrices of the standard (Dirac) representation.
// Entries are exact 0, +-1, +-i literals; identities hold bit-exactly.
struct GammaMatrices {
  std::array<ComplexMatrix4, 4> upper;
  const ComplexMatrix4& operator[](int k) const { return upper[static_cast<std::size_t>(k)]; }
};

const GammaMatrices& standard_gammas();

// diag(+1,-1,-1,-1)
struct MinkowskiMetric {
  static constexpr std::array<double, 4> diag{1.0, -1.0, -1.0, -1.0};
};

inline double metric_diag(int i) {
  if (i < 0 || i > 3) throw std::out_of_range("metric index must be 0..3");
  return MinkowskiMetric::diag[static_cast<std::size_t>(i)];
}

// gamma_i = g_{ii} gamma^(i) (diagonal metric).
ComplexMatrix4 lower_index(const GammaMatrices& g, int i);

// psi^dagger M phi
complexd sesquilinear_form(const Bispinor& psi, const ComplexMatrix4& m, const Bispinor& phi);

}  // namespace ghostspinor

#endif
