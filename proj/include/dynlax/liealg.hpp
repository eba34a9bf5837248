#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "dynlax/errors.hpp"

namespace dynlax {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class Series { A, B, C, D, E, F, G };

inline Series parse_series(std::string_view s) {
  if (s == "A") return Series::A;
  if (s == "B") return Series::B;
  if (s == "C") return Series::C;
  if (s == "D") return Series::D;
  if (s == "E") return Series::E;
  if (s == "F") return Series::F;
  if (s == "G") return Series::G;
  throw UnsupportedAlgebra("unknown series '" + std::string(s) + "'");
}

inline std::string series_name(Series s) {
  static const char* names[] = {"A", "B", "C", "D", "E", "F", "G"};
  return names[static_cast<int>(s)];
}

// Element of the Cartan subalgebra in the orthonormal basis x_1..x_N.
// Used for positions q, x as well as momenta p and directions lambda.
struct CartanPoint {
  Vec coeffs;

  CartanPoint() = default;
  explicit CartanPoint(Vec c) : coeffs(std::move(c)) {}
  static CartanPoint zero(int rank) { return CartanPoint(Vec::Zero(rank)); }

  int size() const { return static_cast<int>(coeffs.size()); }
  double operator[](int i) const { return coeffs[i]; }
  double& operator[](int i) { return coeffs[i]; }
  double norm() const { return coeffs.norm(); }
  double dot(const CartanPoint& o) const { return coeffs.dot(o.coeffs); }

  CartanPoint& operator+=(const CartanPoint& o) { coeffs += o.coeffs; return *this; }
  CartanPoint& operator-=(const CartanPoint& o) { coeffs -= o.coeffs; return *this; }
  CartanPoint& operator*=(double s) { coeffs *= s; return *this; }
};

inline CartanPoint operator+(CartanPoint a, const CartanPoint& b) { return a += b; }
inline CartanPoint operator-(CartanPoint a, const CartanPoint& b) { return a -= b; }
inline CartanPoint operator-(CartanPoint a) { a.coeffs = -a.coeffs; return a; }
inline CartanPoint operator*(double s, CartanPoint a) { return a *= s; }
inline CartanPoint operator*(CartanPoint a, double s) { return a *= s; }

// x = sum_i h[i] x_i + sum_a roots[a] e_a, with roots indexed as in LieAlgebraData::roots.
struct GElement {
  Vec h;
  Vec roots;

  GElement() = default;
  GElement(Vec h_, Vec r_) : h(std::move(h_)), roots(std::move(r_)) {}

  double norm() const { return std::sqrt(h.squaredNorm() + roots.squaredNorm()); }
  double max_abs() const {
    double m = 0;
    if (h.size()) m = h.cwiseAbs().maxCoeff();
    if (roots.size()) m = std::max(m, roots.cwiseAbs().maxCoeff());
    return m;
  }

  GElement& operator+=(const GElement& o) { h += o.h; roots += o.roots; return *this; }
  GElement& operator-=(const GElement& o) { h -= o.h; roots -= o.roots; return *this; }
  GElement& operator*=(double s) { h *= s; roots *= s; return *this; }
};

inline GElement operator+(GElement a, const GElement& b) { return a += b; }
inline GElement operator-(GElement a, const GElement& b) { return a -= b; }
inline GElement operator-(GElement a) { a *= -1.0; return a; }
inline GElement operator*(double s, GElement a) { return a *= s; }
inline GElement operator*(GElement a, double s) { return a *= s; }

struct Root {
  std::vector<int> coords;  // simple-root coordinates m^1..m^N
  int height = 0;
  bool positive = true;
  // Matrix position of e_alpha = E_{row,col} in the defining representation.
  int row = 0;
  int col = 0;
};

struct LieAlgebraData {
  Series series = Series::A;
  int rank = 0;
  int rep_dim = 0;
  std::vector<Root> roots;                 // positive roots (height, then lex), then negatives
  std::vector<std::size_t> simple_roots;   // indices into roots
  std::vector<std::size_t> negative_of;    // index of -alpha
  Eigen::MatrixXi cartan_matrix;
  Mat cartan_inverse;
  std::vector<Mat> h_basis;
  std::vector<Mat> root_vectors;
  // Row a holds alpha_a(x_k); since the x_k are orthonormal this is also H_alpha in the x basis.
  Mat coroot_map;
  // structure_constants(a, b) = N_{a,b}; sum_index(a, b) = index of alpha_a + alpha_b or -1.
  Mat structure_constants;
  Eigen::MatrixXi sum_index;
  // Gram matrix of the form on the basis (x_1..x_N, e_0..e_{|Delta|-1}).
  Mat form_gram;

  struct Term {
    std::size_t a, b, c;
    double n;
  };
  std::vector<Term> nonzero_brackets;  // [e_a, e_b] = n e_c
  std::map<std::vector<int>, std::size_t> index_by_coords;

  int dim() const { return rank + static_cast<int>(roots.size()); }
  std::size_t num_roots() const { return roots.size(); }
  std::size_t num_positive() const { return roots.size() / 2; }

  std::size_t root_index(const std::vector<int>& coords) const {
    auto it = index_by_coords.find(coords);
    if (it == index_by_coords.end()) throw DimensionError("not a root of this algebra");
    return it->second;
  }
  std::size_t simple(int i) const { return simple_roots.at(static_cast<std::size_t>(i)); }

  double alpha(std::size_t a, const CartanPoint& q) const {
    return coroot_map.row(static_cast<Eigen::Index>(a)).dot(q.coeffs);
  }
  double alpha(std::size_t a, const Vec& h) const {
    return coroot_map.row(static_cast<Eigen::Index>(a)).dot(h);
  }
  CartanPoint coroot(std::size_t a) const {
    return CartanPoint(coroot_map.row(static_cast<Eigen::Index>(a)).transpose());
  }
  double root_norm2(std::size_t a) const {
    return coroot_map.row(static_cast<Eigen::Index>(a)).squaredNorm();
  }
};

using AlgebraPtr = std::shared_ptr<const LieAlgebraData>;

namespace detail {

inline Mat elementary(int n, int i, int j) {
  Mat m = Mat::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

inline AlgebraPtr build_type_a(int rank) {
  auto alg = std::make_shared<LieAlgebraData>();
  const int n = rank + 1;
  alg->series = Series::A;
  alg->rank = rank;
  alg->rep_dim = n;

  for (int k = 1; k <= rank; ++k) {
    Mat x = Mat::Zero(n, n);
    for (int i = 0; i < k; ++i) x(i, i) = 1.0;
    x(k, k) = -static_cast<double>(k);
    x /= std::sqrt(static_cast<double>(k * (k + 1)));
    alg->h_basis.push_back(x);
  }

  std::vector<Root> pos;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Root r;
      r.coords.assign(static_cast<std::size_t>(rank), 0);
      for (int k = i; k < j; ++k) r.coords[static_cast<std::size_t>(k)] = 1;
      r.height = j - i;
      r.positive = true;
      r.row = i;
      r.col = j;
      pos.push_back(r);
    }
  std::sort(pos.begin(), pos.end(), [](const Root& a, const Root& b) {
    if (a.height != b.height) return a.height < b.height;
    return a.coords > b.coords;
  });
  alg->roots = pos;
  for (const Root& r : pos) {
    Root m = r;
    for (int& c : m.coords) c = -c;
    m.height = -r.height;
    m.positive = false;
    std::swap(m.row, m.col);
    alg->roots.push_back(m);
  }

  const std::size_t nr = alg->roots.size();
  const std::size_t np = nr / 2;
  alg->negative_of.resize(nr);
  for (std::size_t a = 0; a < np; ++a) {
    alg->negative_of[a] = a + np;
    alg->negative_of[a + np] = a;
  }
  for (std::size_t a = 0; a < nr; ++a) {
    alg->index_by_coords[alg->roots[a].coords] = a;
    alg->root_vectors.push_back(elementary(n, alg->roots[a].row, alg->roots[a].col));
  }
  for (int i = 0; i < rank; ++i) {
    std::vector<int> c(static_cast<std::size_t>(rank), 0);
    c[static_cast<std::size_t>(i)] = 1;
    alg->simple_roots.push_back(alg->index_by_coords.at(c));
  }

  alg->coroot_map = Mat::Zero(static_cast<Eigen::Index>(nr), rank);
  for (std::size_t a = 0; a < nr; ++a)
    for (int k = 0; k < rank; ++k) {
      const Mat& x = alg->h_basis[static_cast<std::size_t>(k)];
      const Root& r = alg->roots[a];
      alg->coroot_map(static_cast<Eigen::Index>(a), k) = x(r.row, r.row) - x(r.col, r.col);
    }

  alg->cartan_matrix = Eigen::MatrixXi::Zero(rank, rank);
  for (int i = 0; i < rank; ++i) {
    alg->cartan_matrix(i, i) = 2;
    if (i + 1 < rank) {
      alg->cartan_matrix(i, i + 1) = -1;
      alg->cartan_matrix(i + 1, i) = -1;
    }
  }
  alg->cartan_inverse = alg->cartan_matrix.cast<double>().inverse();

  alg->structure_constants = Mat::Zero(static_cast<Eigen::Index>(nr), static_cast<Eigen::Index>(nr));
  alg->sum_index = Eigen::MatrixXi::Constant(static_cast<Eigen::Index>(nr), static_cast<Eigen::Index>(nr), -1);
  for (std::size_t a = 0; a < nr; ++a)
    for (std::size_t b = 0; b < nr; ++b) {
      std::vector<int> s(static_cast<std::size_t>(rank));
      for (int k = 0; k < rank; ++k)
        s[static_cast<std::size_t>(k)] = alg->roots[a].coords[static_cast<std::size_t>(k)] +
                                         alg->roots[b].coords[static_cast<std::size_t>(k)];
      auto it = alg->index_by_coords.find(s);
      if (it == alg->index_by_coords.end()) continue;
      const std::size_t c = it->second;
      const Mat comm = alg->root_vectors[a] * alg->root_vectors[b] - alg->root_vectors[b] * alg->root_vectors[a];
      const double nab = (comm * alg->root_vectors[alg->negative_of[c]]).trace();
      const auto ia = static_cast<Eigen::Index>(a), ib = static_cast<Eigen::Index>(b);
      alg->structure_constants(ia, ib) = nab;
      alg->sum_index(ia, ib) = static_cast<int>(c);
      alg->nonzero_brackets.push_back({a, b, c, nab});
    }

  const int d = alg->dim();
  alg->form_gram = Mat::Zero(d, d);
  for (int k = 0; k < rank; ++k) alg->form_gram(k, k) = 1.0;
  for (std::size_t a = 0; a < nr; ++a)
    alg->form_gram(rank + static_cast<int>(a), rank + static_cast<int>(alg->negative_of[a])) = 1.0;
  return alg;
}

}  // namespace detail

inline AlgebraPtr build_algebra(Series series, int rank) {
  if (rank < 1) throw UnsupportedAlgebra("rank must be positive");
  if (series != Series::A)
    throw UnsupportedAlgebra("series " + series_name(series) + " is not implemented");
  return detail::build_type_a(rank);
}

inline GElement zero_element(const LieAlgebraData& alg) {
  return GElement(Vec::Zero(alg.rank), Vec::Zero(static_cast<Eigen::Index>(alg.num_roots())));
}

inline GElement root_element(const LieAlgebraData& alg, std::size_t a, double c = 1.0) {
  GElement x = zero_element(alg);
  x.roots[static_cast<Eigen::Index>(a)] = c;
  return x;
}

inline GElement cartan_element(const LieAlgebraData& alg, const CartanPoint& h) {
  if (h.size() != alg.rank) throw DimensionError("Cartan vector has wrong length");
  return GElement(h.coeffs, Vec::Zero(static_cast<Eigen::Index>(alg.num_roots())));
}

inline void check_element(const LieAlgebraData& alg, const GElement& x) {
  if (x.h.size() != alg.rank || x.roots.size() != static_cast<Eigen::Index>(alg.num_roots()))
    throw DimensionError("element does not belong to this algebra");
}

inline GElement bracket(const LieAlgebraData& alg, const GElement& x, const GElement& y) {
  check_element(alg, x);
  check_element(alg, y);
  GElement z = zero_element(alg);
  const std::size_t nr = alg.num_roots();
  for (std::size_t a = 0; a < nr; ++a) {
    const auto ia = static_cast<Eigen::Index>(a);
    const double xa = x.roots[ia], ya = y.roots[ia];
    z.roots[ia] += alg.alpha(a, x.h) * ya - alg.alpha(a, y.h) * xa;
    const double c = xa * y.roots[static_cast<Eigen::Index>(alg.negative_of[a])];
    if (c != 0.0) z.h += c * alg.coroot_map.row(ia).transpose();
  }
  for (const auto& t : alg.nonzero_brackets)
    z.roots[static_cast<Eigen::Index>(t.c)] +=
        t.n * x.roots[static_cast<Eigen::Index>(t.a)] * y.roots[static_cast<Eigen::Index>(t.b)];
  return z;
}

inline double form(const LieAlgebraData& alg, const GElement& x, const GElement& y) {
  check_element(alg, x);
  check_element(alg, y);
  double s = x.h.dot(y.h);
  for (std::size_t a = 0; a < alg.num_roots(); ++a)
    s += x.roots[static_cast<Eigen::Index>(a)] * y.roots[static_cast<Eigen::Index>(alg.negative_of[a])];
  return s;
}

inline GElement project_h(const GElement& x) {
  return GElement(x.h, Vec::Zero(x.roots.size()));
}

inline GElement project_h_perp(const GElement& x) {
  return GElement(Vec::Zero(x.h.size()), x.roots);
}

inline CartanPoint cartan_part(const GElement& x) { return CartanPoint(x.h); }

inline Mat to_matrix(const LieAlgebraData& alg, const GElement& x) {
  check_element(alg, x);
  Mat m = Mat::Zero(alg.rep_dim, alg.rep_dim);
  for (int k = 0; k < alg.rank; ++k) m += x.h[k] * alg.h_basis[static_cast<std::size_t>(k)];
  for (std::size_t a = 0; a < alg.num_roots(); ++a)
    m(alg.roots[a].row, alg.roots[a].col) += x.roots[static_cast<Eigen::Index>(a)];
  return m;
}

// Coefficients are read off by the trace pairing, so a non-traceless input is
// projected onto sl(n) along the identity.
inline GElement from_matrix(const LieAlgebraData& alg, const Mat& m) {
  if (m.rows() != alg.rep_dim || m.cols() != alg.rep_dim) throw DimensionError("matrix has wrong size");
  GElement x = zero_element(alg);
  for (int k = 0; k < alg.rank; ++k)
    x.h[k] = m.diagonal().dot(alg.h_basis[static_cast<std::size_t>(k)].diagonal());
  for (std::size_t a = 0; a < alg.num_roots(); ++a)
    x.roots[static_cast<Eigen::Index>(a)] = m(alg.roots[a].row, alg.roots[a].col);
  return x;
}

inline Mat cartan_matrix_of(const LieAlgebraData& alg, const CartanPoint& h) {
  return to_matrix(alg, cartan_element(alg, h));
}

// exp(h) in the defining representation.
inline Mat torus_element(const LieAlgebraData& alg, const CartanPoint& h) {
  Vec d = cartan_matrix_of(alg, h).diagonal();
  return d.array().exp().matrix().asDiagonal();
}

// Ad_g x = g x g^{-1}.
inline GElement adjoint(const LieAlgebraData& alg, const Mat& g, const GElement& x) {
  return from_matrix(alg, g * to_matrix(alg, x) * g.inverse());
}

// Ad_{exp h} x for h in the Cartan subalgebra: root coefficients scale by e^{alpha(h)}.
inline GElement torus_adjoint(const LieAlgebraData& alg, const CartanPoint& h, const GElement& x) {
  check_element(alg, x);
  GElement y = x;
  for (std::size_t a = 0; a < alg.num_roots(); ++a)
    y.roots[static_cast<Eigen::Index>(a)] *= std::exp(alg.alpha(a, h));
  return y;
}

inline CartanPoint weyl_vector_w(const LieAlgebraData& alg) {
  CartanPoint w = CartanPoint::zero(alg.rank);
  for (std::size_t a = 0; a < alg.num_positive(); ++a) w += alg.coroot(a) * (1.0 / alg.root_norm2(a));
  return w;
}

// Simple-root coefficient of root a with respect to alpha_j (0-based j).
inline int root_coord(const LieAlgebraData& alg, std::size_t a, int j) {
  return alg.roots[a].coords[static_cast<std::size_t>(j)];
}

inline std::string root_key(const LieAlgebraData& alg, std::size_t a) {
  std::string s;
  for (std::size_t k = 0; k < alg.roots[a].coords.size(); ++k) {
    if (k) s += ',';
    s += std::to_string(alg.roots[a].coords[k]);
  }
  return s;
}

}  // namespace dynlax
