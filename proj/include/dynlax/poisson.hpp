#pragma once

#include <functional>
#include <memory>

#include "dynlax/dynr.hpp"
#include "dynlax/random.hpp"

namespace dynlax {

// Point of a bundle with coordinates (q, l, X): l is lambda on A-Gamma and the
// momentum p on the cotangent-type spaces.
struct Point3 {
  CartanPoint q;
  CartanPoint l;
  GElement X;
};

struct Tangent3 {
  CartanPoint dq;
  CartanPoint dl;
  GElement dX;
};

// Function of (q, l, X) with its partial derivatives. d is the gradient in the
// third slot with respect to the invariant form: (d, Y) is the derivative along Y.
struct SmoothFunction3 {
  std::function<double(const Point3&)> eval;
  std::function<CartanPoint(const Point3&)> d1;
  std::function<CartanPoint(const Point3&)> d2;
  std::function<GElement(const Point3&)> d;
};

// Derivative of g along the tangent vector v at the point.
inline double directional(const LieAlgebraData& alg, const SmoothFunction3& g, const Point3& pt, const Tangent3& v) {
  return g.d1(pt).dot(v.dq) + g.d2(pt).dot(v.dl) + form(alg, g.d(pt), v.dX);
}

// ---- coordinates -------------------------------------------------------

inline Vec flatten(const Point3& p) {
  const Eigen::Index r = p.q.size(), nr = p.X.roots.size();
  Vec z(3 * r + nr);
  z << p.q.coeffs, p.l.coeffs, p.X.h, p.X.roots;
  return z;
}

inline Point3 unflatten(const LieAlgebraData& alg, const Vec& z) {
  const Eigen::Index r = alg.rank, nr = static_cast<Eigen::Index>(alg.num_roots());
  return {CartanPoint(z.segment(0, r)), CartanPoint(z.segment(r, r)),
          GElement(z.segment(2 * r, r), z.segment(3 * r, nr))};
}

// Converts a coordinate gradient into the (d1, d2, d) triple.
inline void split_gradient(const LieAlgebraData& alg, const Vec& grad, CartanPoint& g1, CartanPoint& g2, GElement& g) {
  const Eigen::Index r = alg.rank;
  g1 = CartanPoint(grad.segment(0, r));
  g2 = CartanPoint(grad.segment(r, r));
  g = zero_element(alg);
  g.h = grad.segment(2 * r, r);
  for (std::size_t a = 0; a < alg.num_roots(); ++a)
    g.roots[static_cast<Eigen::Index>(alg.negative_of[a])] = grad[3 * r + static_cast<Eigen::Index>(a)];
}

// Fourth-order central differences in every coordinate.
inline Vec numeric_gradient(const std::function<double(const Vec&)>& f, const Vec& z, double h) {
  Vec g(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    Vec e = Vec::Zero(z.size());
    e[i] = h;
    g[i] = (-f(z + 2 * e) + 8 * f(z + e) - 8 * f(z - e) + f(z - 2 * e)) / (12 * h);
  }
  return g;
}

// Wraps a plain function, supplying partials by finite differences.
inline SmoothFunction3 numeric_function(AlgebraPtr alg, std::function<double(const Point3&)> f, double h = 1e-4) {
  auto fz = std::make_shared<std::function<double(const Vec&)>>(
      [alg, f](const Vec& z) { return f(unflatten(*alg, z)); });
  auto grad = [alg, fz, h](const Point3& p) { return numeric_gradient(*fz, flatten(p), h); };
  SmoothFunction3 s;
  s.eval = f;
  s.d1 = [alg, grad](const Point3& p) {
    CartanPoint a, b;
    GElement g;
    split_gradient(*alg, grad(p), a, b, g);
    return a;
  };
  s.d2 = [alg, grad](const Point3& p) {
    CartanPoint a, b;
    GElement g;
    split_gradient(*alg, grad(p), a, b, g);
    return b;
  };
  s.d = [alg, grad](const Point3& p) {
    CartanPoint a, b;
    GElement g;
    split_gradient(*alg, grad(p), a, b, g);
    return g;
  };
  return s;
}

// Largest discrepancy between the analytic partials and finite differences.
inline double check_partials(AlgebraPtr alg, const SmoothFunction3& f, const Point3& p, double h = 1e-4) {
  const SmoothFunction3 num = numeric_function(alg, f.eval, h);
  double e = (f.d1(p) - num.d1(p)).norm();
  e = std::max(e, (f.d2(p) - num.d2(p)).norm());
  e = std::max(e, (f.d(p) - num.d(p)).norm());
  return e;
}

// c + b.z + z'Az/2 + (u.z)^3/6 in flattened coordinates.
inline SmoothFunction3 random_polynomial(AlgebraPtr alg, Rng& rng, double scale = 1.0) {
  const Eigen::Index n = 3 * alg->rank + static_cast<Eigen::Index>(alg->num_roots());
  const double c = rng.uniform(-scale, scale);
  const Vec b = rng.uniform_vec(n, -scale, scale);
  Mat a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = rng.uniform(-scale, scale);
  a = (0.5 * (a + a.transpose())).eval();
  const Vec u = rng.uniform_vec(n, -scale, scale);
  auto grad = [b, a, u](const Vec& z) {
    const double s = u.dot(z);
    return Vec(b + a * z + 0.5 * s * s * u);
  };
  SmoothFunction3 f;
  f.eval = [c, b, a, u](const Point3& p) {
    const Vec z = flatten(p);
    const double s = u.dot(z);
    return c + b.dot(z) + 0.5 * z.dot(a * z) + s * s * s / 6.0;
  };
  f.d1 = [alg, grad](const Point3& p) {
    CartanPoint g1, g2;
    GElement g;
    split_gradient(*alg, grad(flatten(p)), g1, g2, g);
    return g1;
  };
  f.d2 = [alg, grad](const Point3& p) {
    CartanPoint g1, g2;
    GElement g;
    split_gradient(*alg, grad(flatten(p)), g1, g2, g);
    return g2;
  };
  f.d = [alg, grad](const Point3& p) {
    CartanPoint g1, g2;
    GElement g;
    split_gradient(*alg, grad(flatten(p)), g1, g2, g);
    return g;
  };
  return f;
}

inline SmoothFunction3 product(const SmoothFunction3& f, const SmoothFunction3& g) {
  SmoothFunction3 h;
  h.eval = [f, g](const Point3& p) { return f.eval(p) * g.eval(p); };
  h.d1 = [f, g](const Point3& p) { return f.d1(p) * g.eval(p) + g.d1(p) * f.eval(p); };
  h.d2 = [f, g](const Point3& p) { return f.d2(p) * g.eval(p) + g.d2(p) * f.eval(p); };
  h.d = [f, g](const Point3& p) { return f.d(p) * g.eval(p) + g.d(p) * f.eval(p); };
  return h;
}

// ---- dual of the dynamical algebroid A-Gamma ------------------------------

inline double bracket_AGamma(const RFamily& r, const SmoothFunction3& f, const SmoothFunction3& g, const Point3& pt) {
  const auto& alg = r.alg();
  const GElement df = f.d(pt), dg = g.d(pt);
  const GElement uf = r_apply(r, pt.q, df) - cartan_element(alg, f.d2(pt));
  const GElement ug = r_apply(r, pt.q, dg) - cartan_element(alg, g.d2(pt));
  double v = form(alg, dr_apply(r, pt.q, pt.l, df), dg);
  v += form(alg, pt.X, bracket(alg, uf, dg) - bracket(alg, ug, df));
  v += g.d1(pt).coeffs.dot(df.h) - f.d1(pt).coeffs.dot(dg.h);
  return v;
}

inline Tangent3 ham_vf_AGamma(const RFamily& r, const SmoothFunction3& f, const Point3& pt) {
  const auto& alg = r.alg();
  const GElement df = f.d(pt);
  const GElement u = r_apply(r, pt.q, df) - cartan_element(alg, f.d2(pt));
  const GElement xdf = bracket(alg, pt.X, df);
  Tangent3 t;
  t.dq = cartan_part(df);
  t.dl = -cartan_part(xdf);
  t.dX = bracket(alg, pt.X, u) + dr_apply(r, pt.q, pt.l, df) - cartan_element(alg, f.d1(pt)) - r_apply(r, pt.q, xdf);
  return t;
}

// Ad-invariant function of X given in the defining representation.
struct InvariantFunction {
  std::function<double(const Mat&)> value;
  std::function<Mat(const Mat&)> gradient;  // matrix G with d/ds f(X + sY) = tr(G Y)
};

// tr(X^k)/k.
inline InvariantFunction trace_power(int k) {
  InvariantFunction f;
  f.value = [k](const Mat& x) {
    Mat p = Mat::Identity(x.rows(), x.cols());
    for (int i = 0; i < k; ++i) p = p * x;
    return p.trace() / k;
  };
  f.gradient = [k](const Mat& x) {
    Mat p = Mat::Identity(x.rows(), x.cols());
    for (int i = 0; i < k - 1; ++i) p = p * x;
    return p;
  };
  return f;
}

// Pr_3^* f, a function on A-Gamma depending only on X.
inline SmoothFunction3 pullback_pr3(AlgebraPtr alg, const InvariantFunction& f) {
  SmoothFunction3 s;
  s.eval = [alg, f](const Point3& p) { return f.value(to_matrix(*alg, p.X)); };
  s.d1 = [alg](const Point3&) { return CartanPoint::zero(alg->rank); };
  s.d2 = [alg](const Point3&) { return CartanPoint::zero(alg->rank); };
  s.d = [alg, f](const Point3& p) { return from_matrix(*alg, f.gradient(to_matrix(*alg, p.X))); };
  return s;
}

// Closed form of {Pr_3^* f1, Pr_3^* f2} for invariant f1, f2.
inline double invariant_bracket(const RFamily& r, const InvariantFunction& f1, const InvariantFunction& f2,
                                const Point3& pt) {
  const auto& alg = r.alg();
  const Mat x = to_matrix(alg, pt.X);
  const GElement d1 = from_matrix(alg, f1.gradient(x));
  const GElement d2 = from_matrix(alg, f2.gradient(x));
  return form(alg, dr_apply(r, pt.q, pt.l, d1), d2);
}

// ---- product structure T*U x g* ------------------------------------------

inline double bracket_product(const LieAlgebraData& alg, const SmoothFunction3& f, const SmoothFunction3& g,
                              const Point3& pt) {
  return f.d2(pt).dot(g.d1(pt)) - f.d1(pt).dot(g.d2(pt)) + form(alg, pt.X, bracket(alg, f.d(pt), g.d(pt)));
}

inline Tangent3 ham_vf_product(const LieAlgebraData& alg, const SmoothFunction3& f, const Point3& pt) {
  return {f.d2(pt), -f.d1(pt), bracket(alg, pt.X, f.d(pt))};
}

// ---- semi-direct structure on S* ------------------------------------------

inline double bracket_Sstar(const LieAlgebraData& alg, const SmoothFunction3& f, const SmoothFunction3& g,
                            const Point3& pt) {
  const GElement df = f.d(pt), dg = g.d(pt);
  const GElement s = bracket(alg, project_h(df), project_h_perp(dg)) + bracket(alg, project_h_perp(df), project_h(dg));
  return g.d1(pt).dot(f.d2(pt)) - f.d1(pt).dot(g.d2(pt)) + form(alg, pt.X, s);
}

inline Tangent3 ham_vf_Sstar(const LieAlgebraData& alg, const SmoothFunction3& f, const Point3& pt) {
  const GElement df = f.d(pt);
  return {f.d2(pt), -f.d1(pt), bracket(alg, pt.X, project_h(df)) + project_h(bracket(alg, pt.X, df))};
}

// ---- bracket on the dual of the constant-r algebroid ----------------------

inline double bracket_boldA(const LieAlgebraData& alg, const SmoothFunction3& f, const SmoothFunction3& g,
                            const Point3& pt) {
  const GElement df = f.d(pt), dg = g.d(pt);
  const GElement uf = const_r_apply(alg, df) - cartan_element(alg, f.d2(pt));
  const GElement ug = const_r_apply(alg, dg) - cartan_element(alg, g.d2(pt));
  double v = form(alg, pt.X, bracket(alg, uf, dg) + bracket(alg, df, ug));
  v += g.d1(pt).coeffs.dot(df.h) - f.d1(pt).coeffs.dot(dg.h);
  return v;
}

inline Tangent3 ham_vf_boldA(const LieAlgebraData& alg, const SmoothFunction3& f, const Point3& pt) {
  const GElement df = f.d(pt);
  const GElement u = const_r_apply(alg, df) - cartan_element(alg, f.d2(pt));
  const GElement xdf = bracket(alg, pt.X, df);
  return {cartan_part(df), -cartan_part(xdf),
          bracket(alg, pt.X, u) - const_r_apply(alg, xdf) - cartan_element(alg, f.d1(pt))};
}

}  // namespace dynlax
