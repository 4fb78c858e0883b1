#include "ghostspinor/dirac_algebra.hpp"

#include <algorithm>
#include <cmath>

namespace ghostspinor {

ComplexMatrix4 ComplexMatrix4::identity() {
  ComplexMatrix4 m;
  for (int i = 0; i < 4; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix4 ComplexMatrix4::zero() { return ComplexMatrix4{}; }

ComplexMatrix4 operator+(const ComplexMatrix4& a, const ComplexMatrix4& b) {
  ComplexMatrix4 r;
  for (std::size_t i = 0; i < 16; ++i) r.e_[i] = a.e_[i] + b.e_[i];
  return r;
}

ComplexMatrix4 operator-(const ComplexMatrix4& a, const ComplexMatrix4& b) {
  ComplexMatrix4 r;
  for (std::size_t i = 0; i < 16; ++i) r.e_[i] = a.e_[i] - b.e_[i];
  return r;
}

ComplexMatrix4 operator*(const ComplexMatrix4& a, const ComplexMatrix4& b) {
  ComplexMatrix4 r;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      complexd s = 0.0;
      for (int j = 0; j < 4; ++j) s += a(i, j) * b(j, k);
      r(i, k) = s;
    }
  return r;
}

ComplexMatrix4 operator*(complexd s, const ComplexMatrix4& a) {
  ComplexMatrix4 r;
  for (std::size_t i = 0; i < 16; ++i) r.e_[i] = s * a.e_[i];
  return r;
}

bool operator==(const ComplexMatrix4& a, const ComplexMatrix4& b) { return a.e_ == b.e_; }

double ComplexMatrix4::max_abs() const {
  double m = 0.0;
  for (const auto& v : e_) m = std::max(m, std::abs(v));
  return m;
}

Bispinor operator+(const Bispinor& a, const Bispinor& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}

Bispinor operator-(const Bispinor& a, const Bispinor& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}

Bispinor operator*(complexd s, const Bispinor& a) {
  return {s * a[0], s * a[1], s * a[2], s * a[3]};
}

Bispinor operator-(const Bispinor& a) { return {-a[0], -a[1], -a[2], -a[3]}; }

double Bispinor::norm_squared() const {
  double s = 0.0;
  for (const auto& v : c) s += std::norm(v);
  return s;
}

double Bispinor::max_abs() const {
  double m = 0.0;
  for (const auto& v : c) m = std::max(m, std::abs(v));
  return m;
}

Bispinor operator*(const ComplexMatrix4& m, const Bispinor& v) {
  Bispinor r;
  for (int i = 0; i < 4; ++i) {
    complexd s = 0.0;
    for (int j = 0; j < 4; ++j) s += m(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

namespace {

constexpr complexd kOne{1.0, 0.0};
constexpr complexd kI{0.0, 1.0};

GammaMatrices build_standard_gammas() {
  GammaMatrices g;

  // gamma^(0) = diag(I, -I)
  g.upper[0](0, 0) = kOne;
  g.upper[0](1, 1) = kOne;
  g.upper[0](2, 2) = -kOne;
  g.upper[0](3, 3) = -kOne;

  // gamma^(alpha) = [[0, sigma_alpha], [-sigma_alpha, 0]]
  // sigma_1 = [[0,1],[1,0]]
  g.upper[1](0, 3) = kOne;
  g.upper[1](1, 2) = kOne;
  g.upper[1](2, 1) = -kOne;
  g.upper[1](3, 0) = -kOne;

  // sigma_2 = [[0,-i],[i,0]]
  g.upper[2](0, 3) = -kI;
  g.upper[2](1, 2) = kI;
  g.upper[2](2, 1) = kI;
  g.upper[2](3, 0) = -kI;

  // sigma_3 = [[1,0],[0,-1]]
  g.upper[3](0, 2) = kOne;
  g.upper[3](1, 3) = -kOne;
  g.upper[3](2, 0) = -kOne;
  g.upper[3](3, 1) = kOne;

  return g;
}

}  // namespace

const GammaMatrices& standard_gammas() {
  static const GammaMatrices g = build_standard_gammas();
  return g;
}

ComplexMatrix4 lower_index(const GammaMatrices& g, int i) {
  if (i < 0 || i > 3) throw std::out_of_range("gamma index must be 0..3");
  return complexd{metric_diag(i), 0.0} * g[i];
}

complexd sesquilinear_form(const Bispinor& psi, const ComplexMatrix4& m, const Bispinor& phi) {
  complexd s = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) s += std::conj(psi[a]) * m(a, b) * phi[b];
  return s;
}

}  // namespace ghostspinor
