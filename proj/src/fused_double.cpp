#include "rsdual/fused_double.hpp"

#include <cmath>
#include <queue>
#include <string>

namespace rsd {

namespace {

constexpr double kBaseMatchTol = 1e-12;

struct OmegaTerms {
  CMatrix a1, b1, a2, b2, a3, b3;
};

OmegaTerms omega_terms(const DoubleTangent& t) {
  const CMatrix& A = t.base.A.matrix();
  const CMatrix& B = t.base.B.matrix();
  const CMatrix Ai = A.adjoint();
  const CMatrix Bi = B.adjoint();
  return {Ai * t.vA,
          t.vB * Bi,
          t.vA * Ai,
          Bi * t.vB,
          Bi * Ai * (t.vA * B + A * t.vB),
          Ai * Bi * (t.vB * A + B * t.vA)};
}

double wedge(const CMatrix& a1, const CMatrix& b1, const CMatrix& a2, const CMatrix& b2,
             double lambda) {
  return scalar_product(a1, b2, lambda) - scalar_product(a2, b1, lambda);
}

InvariantFunction::Gradient spectral_gradient(const UnitaryMatrix& g, int k) {
  const AlcoveFrame af = alcove_frame(g);
  const CVector lo = af.frame.col(k - 1);
  const CVector hi = af.frame.col(k);
  const CMatrix p = hi * hi.adjoint() - lo * lo.adjoint();
  return {LieAlgebraVector::project(Complex(0.0, 1.0) * p), LieAlgebraVector::zero(g.dim())};
}

void check_index(int k, int n) {
  if (k < 1 || k >= n) throw Error(ErrorKind::InvalidArgument, "spectral index out of range");
}

}  // namespace

DoubleTangent DoubleTangent::from_left(const DoublePoint& base, const CMatrix& a, const CMatrix& b) {
  return {base, base.A.matrix() * a, base.B.matrix() * b};
}

double InvariantFunction::differential(const DoubleTangent& t) const {
  const auto [ga, gb] = gradient(t.base);
  return scalar_product(ga.matrix(), t.left_a()) + scalar_product(gb.matrix(), t.left_b());
}

InvariantFunction alpha_function(int k) {
  return {"alpha_" + std::to_string(k),
          [k](const DoublePoint& x) {
            check_index(k, x.dim());
            return alcove_coordinates(x.A).xi(k - 1);
          },
          [k](const DoublePoint& x) {
            check_index(k, x.dim());
            return spectral_gradient(x.A, k);
          }};
}

InvariantFunction beta_function(int k) {
  return {"beta_" + std::to_string(k),
          [k](const DoublePoint& x) {
            check_index(k, x.dim());
            return alcove_coordinates(x.B).xi(k - 1);
          },
          [k](const DoublePoint& x) {
            check_index(k, x.dim());
            auto g = spectral_gradient(x.B, k);
            return InvariantFunction::Gradient{g.second, g.first};
          }};
}

InvariantFunction re_trace_a() {
  return {"re_tr_A", [](const DoublePoint& x) { return x.A.matrix().trace().real(); },
          [](const DoublePoint& x) {
            return InvariantFunction::Gradient{LieAlgebraVector::project(-2.0 * x.A.matrix()),
                                               LieAlgebraVector::zero(x.dim())};
          }};
}

InvariantFunction re_trace_b() {
  return {"re_tr_B", [](const DoublePoint& x) { return x.B.matrix().trace().real(); },
          [](const DoublePoint& x) {
            return InvariantFunction::Gradient{LieAlgebraVector::zero(x.dim()),
                                               LieAlgebraVector::project(-2.0 * x.B.matrix())};
          }};
}

InvariantFunction constant_function(double c) {
  return {"constant", [c](const DoublePoint&) { return c; },
          [](const DoublePoint& x) {
            return InvariantFunction::Gradient{LieAlgebraVector::zero(x.dim()),
                                               LieAlgebraVector::zero(x.dim())};
          }};
}

DoublePoint psi(const UnitaryMatrix& g, const DoublePoint& x) {
  const UnitaryMatrix gi = g.inverse();
  return {g * x.A * gi, g * x.B * gi};
}

DoubleTangent psi_push(const UnitaryMatrix& g, const DoubleTangent& t) {
  const CMatrix& gm = g.matrix();
  return {psi(g, t.base), gm * t.vA * gm.adjoint(), gm * t.vB * gm.adjoint()};
}

UnitaryMatrix moment(const DoublePoint& x) { return x.A * x.B * x.A.inverse() * x.B.inverse(); }

CMatrix moment_differential(const DoubleTangent& t) {
  const CMatrix& A = t.base.A.matrix();
  const CMatrix& B = t.base.B.matrix();
  const CMatrix Ai = A.adjoint();
  const CMatrix Bi = B.adjoint();
  const CMatrix dAi = -Ai * t.vA * Ai;
  const CMatrix dBi = -Bi * t.vB * Bi;
  return t.vA * B * Ai * Bi + A * t.vB * Ai * Bi + A * B * dAi * Bi + A * B * Ai * dBi;
}

double omega_eval(const DoubleTangent& t1, const DoubleTangent& t2, double lambda) {
  if (max_abs(t1.base.A.matrix() - t2.base.A.matrix()) > kBaseMatchTol ||
      max_abs(t1.base.B.matrix() - t2.base.B.matrix()) > kBaseMatchTol)
    throw Error(ErrorKind::BasePointMismatch, "tangents live at different base points");
  const OmegaTerms p = omega_terms(t1);
  const OmegaTerms q = omega_terms(t2);
  const double twice = wedge(p.a1, p.b1, q.a1, q.b1, lambda) +
                       wedge(p.a2, p.b2, q.a2, q.b2, lambda) -
                       wedge(p.a3, p.b3, q.a3, q.b3, lambda);
  return 0.5 * twice;
}

DoubleTangent infinitesimal_action(const LieAlgebraVector& zeta, const DoublePoint& x) {
  const CMatrix& z = zeta.matrix();
  const CMatrix& A = x.A.matrix();
  const CMatrix& B = x.B.matrix();
  return {x, z * A - A * z, z * B - B * z};
}

double moment_map_identity_residual(const DoublePoint& x, const LieAlgebraVector& zeta,
                                    const DoubleTangent& t, double lambda) {
  const double lhs = omega_eval(infinitesimal_action(zeta, x), t, lambda);
  const CMatrix mu = moment(x).matrix();
  const CMatrix dmu = moment_differential(t);
  const CMatrix form = mu.adjoint() * dmu + dmu * mu.adjoint();
  const double rhs = 0.5 * scalar_product(form, zeta.matrix(), lambda);
  return std::abs(lhs - rhs);
}

DoublePoint sd_map(const DoublePoint& x) {
  const UnitaryMatrix bi = x.B.inverse();
  return {bi, x.B * x.A * bi};
}

DoublePoint td_map(const DoublePoint& x) { return {x.A * x.B, x.B}; }

DoublePoint q_map(const DoublePoint& x) { return psi(moment(x).inverse(), x); }

DoublePoint rho_map(const DoublePoint& x) { return {x.B.conjugate(), x.A.conjugate()}; }

DoublePoint center_map(int z1, int z2, const DoublePoint& x) {
  const int n = x.dim();
  const Complex w1 = std::polar(1.0, 2.0 * kPi * z1 / n);
  const Complex w2 = std::polar(1.0, 2.0 * kPi * z2 / n);
  return {UnitaryMatrix::trusted(w1 * x.A.matrix()), UnitaryMatrix::trusted(w2 * x.B.matrix())};
}

DoubleTangent sd_push(const DoubleTangent& t) {
  const CMatrix& A = t.base.A.matrix();
  const CMatrix& B = t.base.B.matrix();
  const CMatrix Bi = B.adjoint();
  const CMatrix dBi = -Bi * t.vB * Bi;
  return {sd_map(t.base), dBi, t.vB * A * Bi + B * t.vA * Bi + B * A * dBi};
}

DoubleTangent td_push(const DoubleTangent& t) {
  return {td_map(t.base), t.vA * t.base.B.matrix() + t.base.A.matrix() * t.vB, t.vB};
}

namespace {

std::vector<DoubleTangent> basis_tangents(const DoublePoint& x, const std::vector<CMatrix>& e) {
  const int n = x.dim();
  const CMatrix zero = CMatrix::Zero(n, n);
  std::vector<DoubleTangent> w;
  w.reserve(2 * e.size());
  for (const auto& ei : e) w.push_back(DoubleTangent::from_left(x, ei, zero));
  for (const auto& ei : e) w.push_back(DoubleTangent::from_left(x, zero, ei));
  return w;
}

}  // namespace

RMatrix omega_gram(const DoublePoint& x, double lambda) {
  const auto e = su_basis(x.dim());
  const auto w = basis_tangents(x, e);
  const auto m = static_cast<Eigen::Index>(w.size());
  RMatrix g(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    g(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < m; ++j) {
      g(i, j) = omega_eval(w[static_cast<std::size_t>(i)], w[static_cast<std::size_t>(j)], lambda);
      g(j, i) = -g(i, j);
    }
  }
  return g;
}

VectorFieldSolution qh_vector_field(const InvariantFunction& h, const DoublePoint& x,
                                    double lambda, double tol) {
  const int n = x.dim();
  const auto e = su_basis(n);
  const auto dim = static_cast<Eigen::Index>(e.size());
  const auto w = basis_tangents(x, e);
  const RMatrix gram = omega_gram(x, lambda);

  const auto [ga, gb] = h.gradient(x);
  RVector dh(2 * dim);
  dh.head(dim) = su_coordinates(ga.matrix(), e);
  dh.tail(dim) = su_coordinates(gb.matrix(), e);

  // Rows: ω(v, w_m) = dh(w_m), then the su(n) coordinates of μ⁻¹dμ(v) = 0.
  const CMatrix mu_inv = moment(x).matrix().adjoint();
  RMatrix sys(3 * dim, 2 * dim);
  sys.topRows(2 * dim) = gram.transpose();
  for (Eigen::Index i = 0; i < 2 * dim; ++i)
    sys.block(2 * dim, i, dim, 1) =
        su_coordinates(mu_inv * moment_differential(w[static_cast<std::size_t>(i)]), e);
  RVector rhs = RVector::Zero(3 * dim);
  rhs.head(2 * dim) = dh;

  Eigen::CompleteOrthogonalDecomposition<RMatrix> cod(sys);
  cod.setThreshold(1e-10);
  const RVector c = cod.solve(rhs);

  CMatrix a = CMatrix::Zero(n, n);
  CMatrix b = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < dim; ++i) {
    a += c(i) * e[static_cast<std::size_t>(i)];
    b += c(dim + i) * e[static_cast<std::size_t>(i)];
  }
  VectorFieldSolution sol{DoubleTangent::from_left(x, a, b), 0.0, 0.0};
  const RVector r = sys * c - rhs;
  sol.omega_residual = r.head(2 * dim).cwiseAbs().maxCoeff();
  sol.moment_residual = r.tail(dim).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, dh.cwiseAbs().maxCoeff());
  if (!(sol.omega_residual <= tol * scale && sol.moment_residual <= tol * scale))
    throw Error(ErrorKind::SolveFailure,
                "quasi-Hamiltonian system residual " +
                    std::to_string(std::max(sol.omega_residual, sol.moment_residual)));
  return sol;
}

double poisson_bracket(const InvariantFunction& f, const InvariantFunction& h,
                       const DoublePoint& x, double lambda) {
  const auto vf = qh_vector_field(f, x, lambda);
  const auto vh = qh_vector_field(h, x, lambda);
  return omega_eval(vf.field, vh.field, lambda);
}

double distance(const DoublePoint& x, const DoublePoint& y) {
  return std::max(max_abs(x.A.matrix() - y.A.matrix()), max_abs(x.B.matrix() - y.B.matrix()));
}

GaugeMatch gauge_equivalent(const DoublePoint& x, const DoublePoint& xp, double tol) {
  const int n = x.dim();
  if (xp.dim() != n) return {};
  const AlcoveFrame fb = alcove_frame(x.B);
  const AlcoveFrame fbp = alcove_frame(xp.B);
  if (fb.alcove.degenerate || fbp.alcove.degenerate)
    throw Error(ErrorKind::AmbiguousMatch, "B is not regular; compare invariants instead");
  if ((fb.lifted_phases - fbp.lifted_phases).cwiseAbs().maxCoeff() > tol) return {};
  if ((alcove_coordinates(x.A).xi - alcove_coordinates(xp.A).xi).cwiseAbs().maxCoeff() > tol)
    return {};

  // In the B-eigenframes the remaining freedom is a diagonal torus t:
  // t_j conj(t_l) M_jl = M′_jl.
  const CMatrix m = fb.frame.adjoint() * x.A.matrix() * fb.frame;
  const CMatrix mp = fbp.frame.adjoint() * xp.A.matrix() * fbp.frame;
  if (max_abs(m.cwiseAbs() - mp.cwiseAbs()) > tol) return {};

  const double edge = 1e-6 * std::max(max_abs(m), 1e-300);
  CVector t = CVector::Zero(n);
  std::vector<bool> known(static_cast<std::size_t>(n), false);
  for (int root = 0; root < n; ++root) {
    if (known[static_cast<std::size_t>(root)]) continue;
    t(root) = 1.0;
    known[static_cast<std::size_t>(root)] = true;
    std::queue<int> todo;
    todo.push(root);
    while (!todo.empty()) {
      const int j = todo.front();
      todo.pop();
      for (int l = 0; l < n; ++l) {
        if (known[static_cast<std::size_t>(l)] || std::abs(m(j, l)) <= edge) continue;
        const Complex ratio = mp(j, l) / (t(j) * m(j, l));
        t(l) = std::conj(ratio / std::abs(ratio));
        known[static_cast<std::size_t>(l)] = true;
        todo.push(l);
      }
    }
  }

  CMatrix g = fbp.frame * t.asDiagonal() * fb.frame.adjoint();
  g *= std::pow(g.determinant(), -1.0 / n);
  const UnitaryMatrix gu = UnitaryMatrix::trusted(std::move(g));
  if (distance(psi(gu, x), xp) > tol) return {};
  return {true, gu};
}

}  // namespace rsd
