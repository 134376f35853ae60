#include "rsdual/duality.hpp"

#include <cmath>
#include <string>

namespace rsd {

namespace {
// eigenphase roundoff makes smaller gaps indistinguishable from the wall
constexpr double kSpectralFloor = 1e-14;
}  // namespace

UnitaryMatrix mu0_matrix(const Coupling& c) {
  const int n = c.n;
  const double y = c.abs_y();
  CMatrix m = CMatrix::Zero(n, n);
  for (int j = 0; j + 1 < n; ++j) m(j, j) = std::polar(1.0, 2.0 * y);
  m(n - 1, n - 1) = std::polar(1.0, 2.0 * (1 - n) * y);
  return UnitaryMatrix::trusted(std::move(m));
}

UnitaryMatrix g_matrix(const Coupling& c, const RVector& xi) {
  const int n = c.n;
  const double y = c.abs_y();
  const RVector v = std::sqrt(std::sin(y) / std::sin(n * y)) * w_factor(c, xi, +1);
  CMatrix g = CMatrix::Zero(n, n);
  for (int j = 0; j + 1 < n; ++j) {
    g(j, n - 1) = v(j);
    g(n - 1, j) = -v(j);
    for (int l = 0; l + 1 < n; ++l) g(j, l) = (j == l ? 1.0 : 0.0) - v(j) * v(l) / (1.0 + v(n - 1));
  }
  g(n - 1, n - 1) = v(n - 1);
  return UnitaryMatrix::trusted(std::move(g));
}

ConstraintPoint f0_map(const Coupling& c, const ProjectivePoint& q, double tol) {
  const LocalPoint p = embed_inverse(c, q);
  const int n = c.n;
  const UnitaryMatrix g = g_matrix(c, p.xi);
  CMatrix delta_tau = CMatrix::Identity(n, n);
  for (int k = 0; k + 1 < n; ++k) delta_tau(k, k) = std::polar(1.0, p.theta(k));
  const UnitaryMatrix conj_tau = UnitaryMatrix::trusted(std::move(delta_tau));

  const UnitaryMatrix gi = g.inverse();
  ConstraintPoint out{{gi * conj_tau * lax_local(c, p) * conj_tau.inverse() * g,
                       gi * delta_matrix(p.xi) * g},
                      mu0_matrix(c)};
  const double res = out.residual();
  if (!(res <= tol))
    throw Error(ErrorKind::ConstraintViolation,
                "moment map misses mu0 by " + std::to_string(res));
  return out;
}

ProjectivePoint f0_inverse(const Coupling& c, const DoublePoint& x, double tol) {
  const int n = c.n;
  const double y = c.abs_y();
  const double res = max_abs(moment(x).matrix() - mu0_matrix(c).matrix());
  if (!(res <= tol))
    throw Error(ErrorKind::NotOnConstraint, "moment map misses mu0 by " + std::to_string(res));

  const AlcoveFrame af = alcove_frame(x.B);
  const RVector gaps = cyclic_gaps(af.alcove.xi);
  for (int k = 0; k < n; ++k)
    if (!(gaps(k) - y > kSpectralFloor))
      throw Error(ErrorKind::PatchBoundary, "spectrum of B lies on the polytope boundary");

  const RVector wp = w_factor(c, af.alcove.xi, +1);
  const RVector wm = w_factor(c, af.alcove.xi, -1);
  CVector theta_diag(n);
  for (int j = 0; j < n; ++j) {
    const double cjj = wp(j) * wm(j);
    if (!(cjj > kTolPatch)) throw Error(ErrorKind::GaugeDegenerate, "vanishing diagonal Lax factor");
    const CVector v = af.frame.col(j);
    const Complex t = v.dot(x.A.matrix() * v) / cjj;  // v†Av / C_jj
    if (std::abs(std::abs(t) - 1.0) > 1e-6)
      throw Error(ErrorKind::NotOnConstraint, "diagonal of A is inconsistent with the Lax form");
    theta_diag(j) = t / std::abs(t);
  }

  // Θ_j = τ_{j−1}/τ_j with τ_0 = 1.
  CVector u(n);
  Complex tau(1.0, 0.0);
  for (int k = 0; k + 1 < n; ++k) {
    tau *= std::conj(theta_diag(k));
    u(k) = tau * std::sqrt(gaps(k) - y);
  }
  u(n - 1) = std::sqrt(gaps(n - 1) - y);
  return ProjectivePoint::from_homogeneous(c, u);
}

ProjectivePoint duality_map(const Coupling& c, const ProjectivePoint& q) {
  return f0_inverse(c, sd_map(f0_map(c, q).point));
}

ProjectivePoint dehn_twist_map(const Coupling& c, const ProjectivePoint& q) {
  return f0_inverse(c, td_map(f0_map(c, q).point));
}

ProjectivePoint involution_r(const Coupling& c, const ProjectivePoint& q) {
  return f0_inverse(c, rho_map(sd_map(sd_map(f0_map(c, q).point))));
}

ProjectivePoint center_action(const Coupling& c, int z1, int z2, const ProjectivePoint& q) {
  return f0_inverse(c, center_map(z1, z2, f0_map(c, q).point));
}

ProjectivePoint complex_conjugation(const Coupling& c, const ProjectivePoint& q) {
  return ProjectivePoint::from_homogeneous(c, q.u().conjugate());
}

ProjectivePoint apply_word(const Coupling& c, std::string_view word, const ProjectivePoint& q) {
  ProjectivePoint cur = q;
  for (const char letter : word) {
    switch (letter) {
      case 'S': cur = duality_map(c, cur); break;
      case 'T': cur = dehn_twist_map(c, cur); break;
      case 'R': cur = involution_r(c, cur); break;
      default:
        throw Error(ErrorKind::InvalidArgument,
                    std::string("unknown mapping-class letter '") + letter + "'");
    }
  }
  return cur;
}

}  // namespace rsd
