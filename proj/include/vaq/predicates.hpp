#pragma once

// Robust orientation and in-circle predicates.
//
// Each predicate first evaluates in double precision with a forward error
// bound (Shewchuk's stage-A bounds). When the bound cannot certify the sign
// the determinant is re-evaluated exactly over the rationals; every finite
// double is a dyadic rational, so the fallback is exact for all finite input.

#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <limits>

#include "vaq/geometry.hpp"

namespace vaq {

namespace detail {

using Rational = boost::multiprecision::cpp_rational;

inline constexpr double kEps = std::numeric_limits<double>::epsilon() / 2.0;  // 2^-53
inline constexpr double kOrientBound = (3.0 + 16.0 * kEps) * kEps;
inline constexpr double kInCircleBound = (10.0 + 96.0 * kEps) * kEps;

template <class T>
constexpr int sign_of(const T& v) {
  return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

inline int orient_exact(Vec2 a, Vec2 b, Vec2 c) {
  const Rational acx = Rational(a.x) - Rational(c.x);
  const Rational acy = Rational(a.y) - Rational(c.y);
  const Rational bcx = Rational(b.x) - Rational(c.x);
  const Rational bcy = Rational(b.y) - Rational(c.y);
  return sign_of(Rational(acx * bcy - acy * bcx));
}

inline int in_circle_exact(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const Rational adx = Rational(a.x) - Rational(d.x);
  const Rational ady = Rational(a.y) - Rational(d.y);
  const Rational bdx = Rational(b.x) - Rational(d.x);
  const Rational bdy = Rational(b.y) - Rational(d.y);
  const Rational cdx = Rational(c.x) - Rational(d.x);
  const Rational cdy = Rational(c.y) - Rational(d.y);
  const Rational alift = adx * adx + ady * ady;
  const Rational blift = bdx * bdx + bdy * bdy;
  const Rational clift = cdx * cdx + cdy * cdy;
  const Rational det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
                       clift * (adx * bdy - bdx * ady);
  return sign_of(det);
}

}  // namespace detail

/// Sign of the signed area of triangle abc: +1 counter-clockwise, -1
/// clockwise, 0 collinear. Exact for all finite input.
inline int orient(Vec2 a, Vec2 b, Vec2 c) {
  const double detleft = (a.x - c.x) * (b.y - c.y);
  const double detright = (a.y - c.y) * (b.x - c.x);
  const double det = detleft - detright;
  double detsum;
  if (detleft > 0.0) {
    if (detright <= 0.0) return detail::sign_of(det);
    detsum = detleft + detright;
  } else if (detleft < 0.0) {
    if (detright >= 0.0) return detail::sign_of(det);
    detsum = -detleft - detright;
  } else {
    return detail::sign_of(det);
  }
  const double bound = detail::kOrientBound * detsum;
  if (det >= bound || -det >= bound) return detail::sign_of(det);
  return detail::orient_exact(a, b, c);
}

namespace detail {

// Raw sign of the in-circle determinant; no precondition on abc.
inline int in_circle_raw(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;

  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double alift = adx * adx + ady * ady;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double blift = bdx * bdx + bdy * bdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;
  const double clift = cdx * cdx + cdy * cdy;

  const double det =
      alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);
  const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
                           (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                           (std::abs(adxbdy) + std::abs(bdxady)) * clift;
  const double bound = kInCircleBound * permanent;
  if (det > bound || -det > bound) return sign_of(det);
  return in_circle_exact(a, b, c, d);
}

}  // namespace detail

/// In-circle test for counter-clockwise abc: +1 when d lies strictly inside
/// the circumcircle, 0 on it, -1 outside. The sign flips under odd
/// permutations of a, b, c. Throws geometry_error for collinear abc.
inline int in_circle(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  if (orient(a, b, c) == 0) throw geometry_error("in_circle: a, b, c are collinear");
  return detail::in_circle_raw(a, b, c, d);
}

/// In-circle test with ties broken by symbolic perturbation. Every point is
/// lifted to the paraboloid and its lifted height raised by eps^(id+1) for an
/// infinitesimal eps, so the result is never 0 provided abc is not
/// collinear. The perturbed determinant stays alternating in all four
/// arguments, which yields a unique triangulation of cocircular input.
inline int in_circle_perturbed(Vec2 a, Vec2 b, Vec2 c, Vec2 d, PointId ia, PointId ib,
                               PointId ic, PointId id) {
  const int s = detail::in_circle_raw(a, b, c, d);
  if (s != 0) return s;

  // d/d(delta_k) of the determinant, for each of the four points.
  struct Term {
    PointId id;
    int sign;
  };
  std::array<Term, 4> terms{{
      {ia, orient(d, b, c)},
      {ib, orient(d, c, a)},
      {ic, orient(d, a, b)},
      {id, -orient(a, b, c)},
  }};
  const Term* best = nullptr;
  for (const Term& t : terms) {
    if (t.sign != 0 && (best == nullptr || t.id < best->id)) best = &t;
  }
  if (best == nullptr) throw geometry_error("in_circle_perturbed: all four points are collinear");
  return best->sign;
}

}  // namespace vaq
