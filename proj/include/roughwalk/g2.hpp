#pragma once

// Step-2 nilpotent group algebra over R^d. An element is a pair (a, b) of a
// first-level increment and a second-level d x d tensor, composed by
//
//   (a, b) * (a', b') = (a + a', b + b' + a (x) a').
//
// Geometric elements additionally satisfy Sym(b) = a (x) a / 2, so they are
// equivalently a pair (increment, signed area); see AreaElement.
//
// Everything is templated on the scalar. Floating instantiations are the
// production mode; integer instantiations are reserved for exactness tests
// on doubled lattice data (every halving there acts on even entries).

#include <Eigen/Dense>

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <type_traits>
#include <utility>

namespace roughwalk {

using Eigen::Index;

template <typename Scalar>
using VectorX = Eigen::Vector<Scalar, Eigen::Dynamic>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

namespace detail {

inline void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

// Exact halving. Integer mode expects doubled (even) data.
template <typename Scalar>
inline Scalar half(Scalar x) {
  if constexpr (std::is_integral_v<Scalar>) {
    assert(x % Scalar(2) == Scalar(0) && "integer halving needs even entries");
    return x / Scalar(2);
  } else {
    return x / Scalar(2);
  }
}

template <typename Derived>
inline MatrixX<typename Derived::Scalar> half_matrix(const Eigen::MatrixBase<Derived>& m) {
  using S = typename Derived::Scalar;
  return m.derived().unaryExpr([](S x) { return half(x); });
}

}  // namespace detail

template <typename Scalar>
struct G2Element {
  VectorX<Scalar> a;  // first level
  MatrixX<Scalar> b;  // second level

  G2Element() = default;
  G2Element(VectorX<Scalar> first, MatrixX<Scalar> second)
      : a(std::move(first)), b(std::move(second)) {
    detail::require(b.rows() == a.size() && b.cols() == a.size(),
                    "G2Element: level dimensions differ");
  }

  static G2Element identity(Index d) {
    return G2Element(VectorX<Scalar>::Zero(d), MatrixX<Scalar>::Zero(d, d));
  }

  Index dim() const { return a.size(); }
};

// (increment, signed area) presentation of a geometric element.
template <typename Scalar>
struct AreaElement {
  VectorX<Scalar> a;
  MatrixX<Scalar> area;  // antisymmetric

  AreaElement() = default;
  AreaElement(VectorX<Scalar> first, MatrixX<Scalar> second)
      : a(std::move(first)), area(std::move(second)) {
    detail::require(area.rows() == a.size() && area.cols() == a.size(),
                    "AreaElement: level dimensions differ");
  }

  static AreaElement identity(Index d) {
    return AreaElement(VectorX<Scalar>::Zero(d), MatrixX<Scalar>::Zero(d, d));
  }

  Index dim() const { return a.size(); }
};

template <typename Scalar>
G2Element<Scalar> mul(const G2Element<Scalar>& g, const G2Element<Scalar>& h) {
  detail::require(g.dim() == h.dim(), "mul: dimension mismatch");
  return G2Element<Scalar>(g.a + h.a, (g.b + h.b + g.a * h.a.transpose()).eval());
}

// (a, b)^{-1} = (-a, -b + a (x) a); mul(g, inverse(g)) is the identity.
template <typename Scalar>
G2Element<Scalar> inverse(const G2Element<Scalar>& g) {
  return G2Element<Scalar>(-g.a, (-g.b + g.a * g.a.transpose()).eval());
}

// Dilation d_eps(a, b) = (eps a, eps^2 b); a group automorphism.
template <typename Scalar>
G2Element<Scalar> dilate(Scalar eps, const G2Element<Scalar>& g) {
  if (!(eps > Scalar(0))) throw std::domain_error("dilate: factor must be positive");
  return G2Element<Scalar>((eps * g.a).eval(), (eps * eps * g.b).eval());
}

template <typename Derived>
MatrixX<typename Derived::Scalar> sym_part(const Eigen::MatrixBase<Derived>& m) {
  detail::require(m.rows() == m.cols(), "sym_part: matrix not square");
  return detail::half_matrix(m.derived() + m.derived().transpose());
}

template <typename Derived>
MatrixX<typename Derived::Scalar> antisym_part(const Eigen::MatrixBase<Derived>& m) {
  detail::require(m.rows() == m.cols(), "antisym_part: matrix not square");
  return detail::half_matrix(m.derived() - m.derived().transpose());
}

template <typename Scalar>
struct SymSplit {
  MatrixX<Scalar> sym;
  MatrixX<Scalar> antisym;
};

template <typename Scalar>
SymSplit<Scalar> split(const G2Element<Scalar>& g) {
  return SymSplit<Scalar>{sym_part(g.b), antisym_part(g.b)};
}

// Homogeneous norm |a|_2 + sqrt(|b|_F). One-homogeneous under dilation and
// quasi-subadditive with factor 3/2:
//   norm(g * h) <= 1.5 (norm(g) + norm(h)).
template <typename Scalar>
double homogeneous_norm(const G2Element<Scalar>& g) {
  const double first = g.a.template cast<double>().norm();
  const double second = g.b.template cast<double>().norm();  // Frobenius
  return first + std::sqrt(second);
}

template <typename Scalar>
double cc_distance(const G2Element<Scalar>& g, const G2Element<Scalar>& h) {
  detail::require(g.dim() == h.dim(), "cc_distance: dimension mismatch");
  return homogeneous_norm(mul(inverse(g), h));
}

template <typename Scalar>
AreaElement<Scalar> to_area(const G2Element<Scalar>& g) {
  return AreaElement<Scalar>(g.a, antisym_part(g.b));
}

template <typename Scalar>
G2Element<Scalar> from_area(const AreaElement<Scalar>& w) {
  MatrixX<Scalar> outer = w.a * w.a.transpose();
  return G2Element<Scalar>(w.a, (detail::half_matrix(outer) + w.area).eval());
}

// Product in the area presentation:
//   (a, A) ^ (a', A') = (a + a', A + A' + (a (x) a' - a' (x) a)/2).
// Consistent with mul through to_area/from_area.
template <typename Scalar>
AreaElement<Scalar> wedge(const AreaElement<Scalar>& x, const AreaElement<Scalar>& y) {
  detail::require(x.dim() == y.dim(), "wedge: dimension mismatch");
  MatrixX<Scalar> cross = x.a * y.a.transpose() - y.a * x.a.transpose();
  return AreaElement<Scalar>(x.a + y.a, (x.area + y.area + detail::half_matrix(cross)).eval());
}

template <typename Scalar>
bool is_geometric(const G2Element<Scalar>& g, double rel_tol = 1e-12) {
  const Eigen::MatrixXd b = g.b.template cast<double>();
  const Eigen::VectorXd a = g.a.template cast<double>();
  const Eigen::MatrixXd gap = 0.5 * (b + b.transpose()) - 0.5 * a * a.transpose();
  const double scale = std::max(1.0, b.norm());
  return gap.norm() <= rel_tol * scale;
}

template <typename Scalar>
bool is_antisymmetric(const MatrixX<Scalar>& m, double rel_tol = 1e-12) {
  const Eigen::MatrixXd md = m.template cast<double>();
  const double scale = std::max(1.0, md.norm());
  return (md + md.transpose()).norm() <= rel_tol * scale;
}

}  // namespace roughwalk
