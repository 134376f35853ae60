#include "rsdual/rs3b.hpp"

#include <cmath>
#include <string>

namespace rsd {

namespace {

constexpr Complex kI(0.0, 1.0);

int next_index(int j, int n) { return (j + 1) % n; }
int prev_index(int j, int n) { return (j + n - 1) % n; }

// sin(t)/t, smooth through t = 0.
double sinc(double t) {
  if (std::abs(t) < 1e-4) return 1.0 - t * t / 6.0;
  return std::sin(t) / t;
}

double pair_ratio(double d, double y) { return std::sin(d + y) / std::sin(d); }

// θ padded with θ_n = 0.
RVector full_angles(const RVector& theta) {
  RVector t = RVector::Zero(theta.size() + 1);
  t.head(theta.size()) = theta;
  return t;
}

// ∂x_a/∂ξ_m
double dx_dxi(int a, int m, int n) { return (m >= a ? -1.0 : 0.0) + (m + 1.0) / n; }

Complex coupling_factor(double d, double y) {
  return 2.0 * kI * std::sin(y) / (std::exp(kI * y) * std::exp(2.0 * kI * d) - std::exp(-kI * y));
}

}  // namespace

Coupling Coupling::make(int n, double y, double lambda) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "n must be at least 2");
  const double ay = std::abs(y);
  if (!(ay > 0.0 && ay < kPi / n))
    throw Error(ErrorKind::InvalidArgument,
                "coupling must satisfy 0 < |y| < pi/n (got y = " + std::to_string(y) + ")");
  if (!(lambda > 0.0)) throw Error(ErrorKind::InvalidArgument, "lambda must be positive");
  return Coupling{n, y, kPi - n * ay, lambda};
}

bool LocalPoint::in_open_polytope(const Coupling& c) const {
  if (xi.size() != c.n - 1 || theta.size() != c.n - 1) return false;
  const double y = c.abs_y();
  return xi.minCoeff() > y && xi.sum() < kPi - y;
}

ProjectivePoint ProjectivePoint::from_homogeneous(const Coupling& c, const CVector& u) {
  if (u.size() != c.n) throw Error(ErrorKind::InvalidArgument, "homogeneous vector has wrong length");
  const double norm = u.norm();
  if (!(norm > 0.0)) throw Error(ErrorKind::InvalidArgument, "zero homogeneous vector");
  CVector v = u * (std::sqrt(c.chi0) / norm);
  Eigen::Index big = 0;
  for (Eigen::Index k = 0; k < v.size(); ++k)
    if (std::abs(v(k)) >= std::abs(v(big))) big = k;
  const Complex phase = v(big) / std::abs(v(big));
  v *= std::conj(phase);
  v(big) = std::abs(v(big));
  return ProjectivePoint(std::move(v));
}

double distance(const ProjectivePoint& a, const ProjectivePoint& b) {
  const Complex overlap = b.u().dot(a.u());  // Σ conj(b) a
  const Complex phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : Complex(1.0);
  return (a.u() - phase * b.u()).cwiseAbs().maxCoeff();
}

RVector w_factor(const Coupling& c, const RVector& xi, int sign) {
  const int n = c.n;
  const double y = sign * c.abs_y();
  const RVector x = diagonal_positions(xi);
  RVector w(n);
  for (int j = 0; j < n; ++j) {
    double prod = 1.0;
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      const double r = pair_ratio(x(j) - x(k), y);
      if (!(r > 0.0))
        throw Error(ErrorKind::DomainError, "W factor not positive: xi outside the open polytope");
      prod *= r;
    }
    w(j) = std::sqrt(prod);
  }
  return w;
}

UnitaryMatrix lax_local(const Coupling& c, const LocalPoint& p) {
  const int n = c.n;
  const double y = c.abs_y();
  const RVector x = diagonal_positions(p.xi);
  const RVector wp = w_factor(c, p.xi, +1);
  const RVector wm = w_factor(c, p.xi, -1);
  const RVector th = full_angles(p.theta);
  CMatrix L(n, n);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l)
      L(j, l) = coupling_factor(x(j) - x(l), y) * wp(j) * wm(l) *
                std::polar(1.0, th(prev_index(l, n)) - th(j));
  return UnitaryMatrix::trusted(std::move(L));
}

std::vector<CMatrix> lax_local_derivatives(const Coupling& c, const LocalPoint& p) {
  const int n = c.n;
  const double y = c.abs_y();
  const RVector x = diagonal_positions(p.xi);
  const CMatrix L = lax_local(c, p).matrix();

  // Log-derivatives of W_j(±y) with respect to each x_a.
  RMatrix dlog_wp = RMatrix::Zero(n, n);  // (j, a)
  RMatrix dlog_wm = RMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      const double d = x(j) - x(k);
      const double cp = 0.5 * (1.0 / std::tan(d + y) - 1.0 / std::tan(d));
      const double cm = 0.5 * (1.0 / std::tan(d - y) - 1.0 / std::tan(d));
      dlog_wp(j, j) += cp;
      dlog_wp(j, k) -= cp;
      dlog_wm(j, j) += cm;
      dlog_wm(j, k) -= cm;
    }
  }

  std::vector<CMatrix> out;
  out.reserve(static_cast<std::size_t>(2 * (n - 1)));
  for (int m = 0; m + 1 < n; ++m) {
    CMatrix d(n, n);
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < n; ++l) {
        Complex g = 0.0;
        if (j != l) {
          const Complex e = std::exp(kI * y) * std::exp(2.0 * kI * (x(j) - x(l)));
          g += -2.0 * kI * e / (e - std::exp(-kI * y)) * (dx_dxi(j, m, n) - dx_dxi(l, m, n));
        }
        for (int a = 0; a < n; ++a)
          g += (dlog_wp(j, a) + dlog_wm(l, a)) * dx_dxi(a, m, n);
        d(j, l) = g * L(j, l);
      }
    }
    out.push_back(std::move(d));
  }
  for (int m = 0; m + 1 < n; ++m) {
    CMatrix d(n, n);
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        const double s = (prev_index(l, n) == m ? 1.0 : 0.0) - (j == m ? 1.0 : 0.0);
        d(j, l) = kI * s * L(j, l);
      }
    out.push_back(std::move(d));
  }
  return out;
}

RVector momenta(const RVector& theta) {
  const RVector th = full_angles(theta);
  const auto n = th.size();
  RVector p(n);
  for (Eigen::Index j = 0; j < n; ++j) p(j) = th(j) - (j == 0 ? 0.0 : th(j - 1));
  return p;
}

double hamiltonian(const Coupling& c, const LocalPoint& p) {
  const int n = c.n;
  const double s2 = std::pow(std::sin(c.abs_y()), 2);
  const RVector x = diagonal_positions(p.xi);
  const RVector mom = momenta(p.theta);
  double h = 0.0;
  for (int j = 0; j < n; ++j) {
    double prod = 1.0;
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      const double f = 1.0 - s2 / std::pow(std::sin(x(j) - x(k)), 2);
      if (!(f > 0.0)) throw Error(ErrorKind::DomainError, "Hamiltonian root factor not positive");
      prod *= f;
    }
    h += std::cos(mom(j)) * std::sqrt(prod);
  }
  return h;
}

CVector embed_lift(const Coupling& c, const LocalPoint& p) {
  if (!p.in_open_polytope(c))
    throw Error(ErrorKind::DomainError, "local point outside the open polytope");
  const RVector gaps = cyclic_gaps(p.xi);
  const double y = c.abs_y();
  CVector u(c.n);
  for (int k = 0; k < c.n; ++k) {
    const double r = std::sqrt(gaps(k) - y);
    u(k) = k + 1 < c.n ? std::polar(r, p.theta(k)) : Complex(r, 0.0);
  }
  return u;
}

ProjectivePoint embed(const Coupling& c, const LocalPoint& p) {
  return ProjectivePoint::from_homogeneous(c, embed_lift(c, p));
}

LocalPoint embed_inverse(const Coupling& c, const ProjectivePoint& q, double tol) {
  if (!q.in_dense_patch(tol))
    throw Error(ErrorKind::PatchBoundary, "a homogeneous coordinate vanishes");
  const int n = c.n;
  const CVector& u = q.u();
  const Complex ref = u(n - 1) / std::abs(u(n - 1));
  LocalPoint p{RVector(n - 1), RVector(n - 1)};
  for (int k = 0; k + 1 < n; ++k) {
    p.xi(k) = std::norm(u(k)) + c.abs_y();
    double t = std::arg(u(k) / ref);
    if (t < 0) t += 2.0 * kPi;
    p.theta(k) = t;
  }
  return p;
}

UnitaryMatrix lax_global(const Coupling& c, const ProjectivePoint& q) {
  const int n = c.n;
  const double y = c.abs_y();
  const CVector& u = q.u();
  RVector gaps(n);
  for (int k = 0; k < n; ++k) gaps(k) = std::norm(u(k)) + y;
  const RVector x = diagonal_positions(gaps.head(n - 1));

  // Ŵ_j(±): W_j(ξ, ±y) with the factor vanishing on the polytope wall divided
  // out, leaving sqrt(sinc(ξ_gap − y) / sin ξ_gap) in its place.
  RVector hat_p(n), hat_m(n);
  for (int j = 0; j < n; ++j) {
    const int jn = next_index(j, n);
    const int jp = prev_index(j, n);
    double pp = sinc(gaps(j) - y) / std::sin(gaps(j));
    double pm = sinc(gaps(jp) - y) / std::sin(gaps(jp));
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      const double d = x(j) - x(k);
      if (k != jn) pp *= pair_ratio(d, y);
      if (k != jp) pm *= pair_ratio(d, -y);
    }
    hat_p(j) = std::sqrt(pp);
    hat_m(j) = std::sqrt(pm);
  }

  CMatrix L(n, n);
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) {
      const double w = hat_p(j) * hat_m(l);
      if (l == next_index(j, n)) {
        L(j, l) = -std::sin(y) * std::polar(1.0, gaps(j)) / sinc(gaps(j) - y) * w;
      } else {
        L(j, l) = coupling_factor(x(j) - x(l), y) * w * std::conj(u(j)) * u(prev_index(l, n));
      }
    }
  }
  return UnitaryMatrix::trusted(std::move(L));
}

RVector position_map(const Coupling& c, const ProjectivePoint& q) {
  RVector j(c.n - 1);
  for (int k = 0; k + 1 < c.n; ++k) j(k) = std::norm(q.u()(k)) + c.abs_y();
  return j;
}

RVector action_map(const Coupling& c, const ProjectivePoint& q) {
  return alcove_coordinates(lax_global(c, q)).xi;
}

double polytope_violation(const Coupling& c, const RVector& xi) {
  const double y = c.abs_y();
  double v = xi.sum() - (kPi - y);
  for (Eigen::Index k = 0; k < xi.size(); ++k) v = std::max(v, y - xi(k));
  return v;
}

LocalPoint sample_local_point(const Coupling& c, Rng& rng, double margin) {
  const int n = c.n;
  const double floor = c.abs_y() + margin;
  const double free = kPi - n * floor;
  if (!(free > 0.0)) throw Error(ErrorKind::InvalidArgument, "sampling margin too large");
  RVector e(n);
  for (int k = 0; k < n; ++k) e(k) = rng.exponential();
  e /= e.sum();
  LocalPoint p{RVector(n - 1), RVector(n - 1)};
  for (int k = 0; k + 1 < n; ++k) {
    p.xi(k) = floor + free * e(k);
    p.theta(k) = rng.uniform(0.0, 2.0 * kPi);
  }
  return p;
}

ProjectivePoint sample_projective_point(const Coupling& c, Rng& rng) {
  CVector u(c.n);
  for (int k = 0; k < c.n; ++k) u(k) = rng.complex_normal();
  return ProjectivePoint::from_homogeneous(c, u);
}

}  // namespace rsd
