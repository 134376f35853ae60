#include "rsdual/pullback.hpp"

#include <cmath>

namespace rsd {

namespace {

ProjectivePoint displaced(const Coupling& c, const ProjectivePoint& q, const CVector& v, double s) {
  return ProjectivePoint::from_homogeneous(c, q.u() + s * v);
}

// Phase of the lift u that maximizes overlap with ref.
CVector aligned(const CVector& u, const CVector& ref) {
  const Complex overlap = u.dot(ref);  // Σ conj(u) ref
  if (std::abs(overlap) == 0.0) return u;
  return u * (overlap / std::abs(overlap));
}

}  // namespace

double fubini_study_form(const CVector& v, const CVector& w) { return -2.0 * v.dot(w).imag(); }

double local_form(const RVector& a, const RVector& b) {
  const auto m = a.size() / 2;
  return a.tail(m).dot(b.head(m)) - b.tail(m).dot(a.head(m));
}

CVector horizontal_tangent(const CVector& u, Rng& rng) {
  CVector v(u.size());
  for (Eigen::Index k = 0; k < u.size(); ++k) v(k) = rng.complex_normal();
  v -= (u.dot(v) / u.squaredNorm()) * u;
  return v.normalized();
}

CVector pushforward(const Coupling& c, const ProjectiveMap& f, const ProjectivePoint& q,
                    const CVector& v, double h) {
  const CVector base = f(q).u();
  const CVector plus = aligned(f(displaced(c, q, v, h)).u(), base);
  const CVector minus = aligned(f(displaced(c, q, v, -h)).u(), base);
  return (plus - minus) / (2.0 * h);
}

DoubleTangent f0_pushforward(const Coupling& c, const ProjectivePoint& q, const CVector& v,
                             double h) {
  const DoublePoint base = f0_map(c, q).point;
  const DoublePoint plus = f0_map(c, displaced(c, q, v, h)).point;
  const DoublePoint minus = f0_map(c, displaced(c, q, v, -h)).point;
  return {base, (plus.A.matrix() - minus.A.matrix()) / (2.0 * h),
          (plus.B.matrix() - minus.B.matrix()) / (2.0 * h)};
}

double embedding_pullback_residual(const Coupling& c, const LocalPoint& p, const RVector& a,
                                   const RVector& b, double h) {
  const auto m = p.xi.size();
  auto push = [&](const RVector& dir) {
    const LocalPoint pp{p.xi + h * dir.head(m), p.theta + h * dir.tail(m)};
    const LocalPoint pm{p.xi - h * dir.head(m), p.theta - h * dir.tail(m)};
    return CVector((embed_lift(c, pp) - embed_lift(c, pm)) / (2.0 * h));
  };
  return std::abs(fubini_study_form(push(a), push(b)) - local_form(a, b));
}

double f0_pullback_residual(const Coupling& c, const ProjectivePoint& q, const CVector& v,
                            const CVector& w, double h) {
  const double lhs = omega_eval(f0_pushforward(c, q, v, h), f0_pushforward(c, q, w, h));
  return std::abs(lhs - fubini_study_form(v, w));
}

double map_pullback_residual(const Coupling& c, const ProjectiveMap& f, const ProjectivePoint& q,
                             const CVector& v, const CVector& w, int sign, double h) {
  const CVector fv = pushforward(c, f, q, v, h);
  const CVector fw = pushforward(c, f, q, w, h);
  return std::abs(fubini_study_form(fv, fw) - sign * fubini_study_form(v, w));
}

}  // namespace rsd
