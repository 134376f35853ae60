#include "rsdual/rng.hpp"

#include <cmath>

namespace rsd {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Rng Rng::for_trial(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(splitmix64(seed) ^ (index * 0xD1B54A32D192ED03ULL)));
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * kPi * u2);
  has_spare_ = true;
  return r * std::cos(2.0 * kPi * u2);
}

double Rng::exponential() {
  double u = uniform();
  while (u <= 0.0) u = uniform();
  return -std::log(u);
}

UnitaryMatrix random_special_unitary(int n, Rng& rng) {
  CMatrix z(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) z(i, j) = rng.complex_normal() / std::sqrt(2.0);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix column phases so the distribution is Haar (Mezzadri's correction).
  for (int j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  const Complex det = q.determinant();
  q *= std::pow(det, -1.0 / n);
  return UnitaryMatrix::trusted(std::move(q));
}

LieAlgebraVector random_lie_algebra(int n, Rng& rng) {
  const auto basis = su_basis(n);
  CMatrix x = CMatrix::Zero(n, n);
  for (const auto& e : basis) x += rng.normal() * e;
  return LieAlgebraVector::project(x);
}

}  // namespace rsd
