#include "levy/group.hpp"

#include <cmath>
#include <string>

#include "levy/error.hpp"

namespace levy {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::unsupported_group: return "unsupported-group";
    case ErrorKind::measure_invalid: return "measure-invalid";
    case ErrorKind::decay_error: return "decay-error";
    case ErrorKind::requires_symmetric: return "requires-symmetric";
    case ErrorKind::not_applicable: return "not-applicable";
    case ErrorKind::schema_error: return "schema-error";
    case ErrorKind::io_error: return "io-error";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::assertion: return "assertion";
  }
  return "unknown";
}

std::string_view to_string(GroupId id) {
  return id == GroupId::SL2R ? "SL2R" : "SU2";
}

GroupId group_from_string(std::string_view name) {
  if (name == "SL2R") return GroupId::SL2R;
  if (name == "SU2") return GroupId::SU2;
  throw Error(ErrorKind::invalid_argument, "unknown group '" + std::string(name) + "'");
}

int space_dimension(GroupId id) { return id == GroupId::SL2R ? 2 : 3; }

namespace {

void require_same(const GroupElement& g, const GroupElement& h) {
  if (g.group() != h.group()) {
    throw Error(ErrorKind::invalid_argument, "mixed-group arguments");
  }
}

void require_sl2r(const GroupElement& g, const char* op) {
  if (g.group() != GroupId::SL2R) {
    throw Error(ErrorKind::unsupported_group, std::string(op) + " is defined for SL2R only");
  }
}

}  // namespace

GroupElement GroupElement::identity(GroupId id) {
  if (id == GroupId::SL2R) return GroupElement(id, {1.0, 0.0, 0.0, 1.0});
  return GroupElement(id, {1.0, 0.0, 0.0, 0.0});
}

GroupElement GroupElement::sl2r(double a, double b, double c, double d) {
  const double det = a * d - b * c;
  if (!std::isfinite(det) || std::abs(det - 1.0) > 1e-9) {
    throw Error(ErrorKind::invalid_argument, "SL2R element must have unit determinant");
  }
  return GroupElement(GroupId::SL2R, {a, b, c, d});
}

GroupElement GroupElement::su2(double w, double x, double y, double z) {
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (!std::isfinite(n) || std::abs(n - 1.0) > 1e-9) {
    throw Error(ErrorKind::invalid_argument, "SU2 element must be a unit quaternion");
  }
  return GroupElement(GroupId::SU2, {w, x, y, z});
}

GroupElement GroupElement::from_entries_unchecked(GroupId id, const Entries& e) {
  return GroupElement(id, e);
}

double GroupElement::invariant() const noexcept {
  if (group_ == GroupId::SL2R) return e_[0] * e_[3] - e_[1] * e_[2];
  return e_[0] * e_[0] + e_[1] * e_[1] + e_[2] * e_[2] + e_[3] * e_[3];
}

GroupElement renormalize(const GroupElement& g) {
  auto e = g.entries();
  const double inv = g.invariant();
  if (g.group() == GroupId::SL2R) {
    // The determinant is only resolved while |ad| + |bc| is moderate; far
    // from the identity the product is left as computed.
    const double scale = std::abs(e[0] * e[3]) + std::abs(e[1] * e[2]);
    if (scale > 1e6) return g;
  }
  if (!(inv > 0.0) || !std::isfinite(inv)) {
    throw Error(ErrorKind::invalid_argument, "cannot renormalize a degenerate element");
  }
  const double s = 1.0 / std::sqrt(inv);
  for (double& v : e) v *= s;
  return GroupElement::from_entries_unchecked(g.group(), e);
}

GroupElement multiply(const GroupElement& g, const GroupElement& h) {
  require_same(g, h);
  const auto& a = g.entries();
  const auto& b = h.entries();
  GroupElement::Entries r{};
  if (g.group() == GroupId::SL2R) {
    r = {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
         a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
  } else {
    r = {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
         a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
         a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
         a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
  }
  return renormalize(GroupElement::from_entries_unchecked(g.group(), r));
}

GroupElement inverse(const GroupElement& g) {
  const auto& e = g.entries();
  if (g.group() == GroupId::SL2R) {
    return GroupElement::from_entries_unchecked(g.group(), {e[3], -e[1], -e[2], e[0]});
  }
  return GroupElement::from_entries_unchecked(g.group(), {e[0], -e[1], -e[2], -e[3]});
}

double max_entry_distance(const GroupElement& g, const GroupElement& h) {
  require_same(g, h);
  double m = 0.0;
  for (std::size_t i = 0; i < 4; ++i) m = std::max(m, std::abs(g[i] - h[i]));
  return m;
}

GroupElement rotation(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return GroupElement::from_entries_unchecked(GroupId::SL2R, {c, -s, s, c});
}

GroupElement boost(double t) {
  return GroupElement::from_entries_unchecked(GroupId::SL2R,
                                              {std::exp(0.5 * t), 0.0, 0.0, std::exp(-0.5 * t)});
}

GroupElement unipotent(double n) {
  return GroupElement::from_entries_unchecked(GroupId::SL2R, {1.0, n, 0.0, 1.0});
}

GroupElement su2_rotation(const std::array<double, 3>& axis, double angle) {
  const double n = std::hypot(axis[0], axis[1], axis[2]);
  if (!(n > 0.0)) throw Error(ErrorKind::invalid_argument, "rotation axis must be nonzero");
  const double s = std::sin(0.5 * angle) / n;
  return renormalize(GroupElement::from_entries_unchecked(
      GroupId::SU2, {std::cos(0.5 * angle), s * axis[0], s * axis[1], s * axis[2]}));
}

GroupElement exp_tangent(GroupId id, std::span<const double> v) {
  if (id == GroupId::SL2R) {
    if (v.size() != 2) throw Error(ErrorKind::invalid_argument, "SL2R tangent vector has 2 components");
    const double s = 0.5 * std::hypot(v[0], v[1]);
    const double ch = std::cosh(s);
    const double shc = s > 1e-8 ? std::sinh(s) / s : 1.0 + s * s / 6.0;
    const double p = 0.5 * shc * v[0];
    const double q = 0.5 * shc * v[1];
    return GroupElement::from_entries_unchecked(id, {ch + p, q, q, ch - p});
  }
  if (v.size() != 3) throw Error(ErrorKind::invalid_argument, "SU2 tangent vector has 3 components");
  const double r = std::hypot(v[0], v[1], v[2]);
  const double h = 0.5 * r;
  const double sc = r > 1e-8 ? std::sin(h) / r : 0.5 - r * r / 48.0;
  return renormalize(
      GroupElement::from_entries_unchecked(id, {std::cos(h), sc * v[0], sc * v[1], sc * v[2]}));
}

IwasawaCoords iwasawa(const GroupElement& g) {
  require_sl2r(g, "iwasawa");
  const auto& e = g.entries();
  const double r2 = e[0] * e[0] + e[2] * e[2];
  IwasawaCoords c;
  c.k_angle = std::atan2(e[2], e[0]);
  c.H = std::log(r2);
  c.n = (e[0] * e[1] + e[2] * e[3]) / r2;
  return c;
}

GroupElement recompose(const IwasawaCoords& c) {
  // Plain products: the factors are exact group elements and the result
  // must not be renormalized before the round-trip comparison.
  const auto k = rotation(c.k_angle).entries();
  const double ep = std::exp(0.5 * c.H);
  const double em = std::exp(-0.5 * c.H);
  // k * diag(ep, em) * [[1, n], [0, 1]]
  return GroupElement::from_entries_unchecked(
      GroupId::SL2R, {k[0] * ep, k[0] * ep * c.n + k[1] * em, k[2] * ep, k[2] * ep * c.n + k[3] * em});
}

double nak_projection(const GroupElement& g) { return -iwasawa(inverse(g)).H; }

CartanCoords cartan(const GroupElement& g) {
  require_sl2r(g, "cartan");
  const auto& e = g.entries();
  CartanCoords c;
  c.t = cartan_radial(g);
  if (c.t > 0.0) {
    const double p = e[0] * e[0] + e[1] * e[1];
    const double s = e[2] * e[2] + e[3] * e[3];
    const double q = e[0] * e[2] + e[1] * e[3];
    c.k1_angle = 0.5 * std::atan2(2.0 * q, p - s);
  }
  // k2 = a_t^{-1} k1^{-1} g
  const double ck = std::cos(c.k1_angle);
  const double sk = std::sin(c.k1_angle);
  const double m00 = ck * e[0] + sk * e[2];
  const double m10 = -sk * e[0] + ck * e[2];
  c.k2_angle = std::atan2(std::exp(0.5 * c.t) * m10, std::exp(-0.5 * c.t) * m00);
  return c;
}

GroupElement recompose(const CartanCoords& c) {
  const auto k1 = rotation(c.k1_angle).entries();
  const auto k2 = rotation(c.k2_angle).entries();
  const double ep = std::exp(0.5 * c.t);
  const double em = std::exp(-0.5 * c.t);
  const double m[4] = {k1[0] * ep, k1[1] * em, k1[2] * ep, k1[3] * em};
  return GroupElement::from_entries_unchecked(
      GroupId::SL2R, {m[0] * k2[0] + m[1] * k2[2], m[0] * k2[1] + m[1] * k2[3],
                      m[2] * k2[0] + m[3] * k2[2], m[2] * k2[1] + m[3] * k2[3]});
}

double su2_angle(const GroupElement::Entries& p, const GroupElement::Entries& q) {
  // r = p * conj(q)
  const double w = p[0] * q[0] + p[1] * q[1] + p[2] * q[2] + p[3] * q[3];
  const double x = -p[0] * q[1] + p[1] * q[0] - p[2] * q[3] + p[3] * q[2];
  const double y = -p[0] * q[2] + p[1] * q[3] + p[2] * q[0] - p[3] * q[1];
  const double z = -p[0] * q[3] - p[1] * q[2] + p[2] * q[1] + p[3] * q[0];
  return 2.0 * std::atan2(std::hypot(x, y, z), std::abs(w));
}

double cartan_radial(const GroupElement& g) {
  const auto& e = g.entries();
  if (g.group() == GroupId::SL2R) {
    // sinh^2(t/2) = ((a-d)^2 + (b+c)^2) / 4 on det = 1.
    return 2.0 * std::asinh(0.5 * std::hypot(e[0] - e[3], e[1] + e[2]));
  }
  return 2.0 * std::atan2(std::hypot(e[1], e[2], e[3]), std::abs(e[0]));
}

double hyperbolic_distance(double x1, double y1, double x2, double y2) {
  return 2.0 * std::asinh(std::hypot(x1 - x2, y1 - y2) / (2.0 * std::sqrt(y1 * y2)));
}

Point::Point(const GroupElement& representative) : rep_(representative) {}

double Point::x() const {
  require_sl2r(rep_, "Point::x");
  return rep_[1] * rep_[0];
}

double Point::y() const {
  require_sl2r(rep_, "Point::y");
  return rep_[0] * rep_[0];
}

Point project(const GroupElement& g) {
  if (g.group() == GroupId::SU2) return Point(g);
  // z = g.i; the canonical representative is n_x a_y = [[sqrt y, x/sqrt y], [0, 1/sqrt y]].
  const auto& e = g.entries();
  const double den = e[2] * e[2] + e[3] * e[3];
  const double y = 1.0 / den;
  const double x = (e[0] * e[2] + e[1] * e[3]) / den;
  const double sy = std::sqrt(y);
  return Point(GroupElement::from_entries_unchecked(GroupId::SL2R, {sy, x / sy, 0.0, 1.0 / sy}));
}

Point base_point(GroupId id) { return Point(GroupElement::identity(id)); }

Point act(const GroupElement& sigma, const Point& p) {
  return project(multiply(sigma, p.representative()));
}

double distance(const Point& p, const Point& q) {
  if (p.group() != q.group()) throw Error(ErrorKind::invalid_argument, "mixed-group arguments");
  if (p.group() == GroupId::SL2R) return hyperbolic_distance(p.x(), p.y(), q.x(), q.y());
  return su2_angle(p.representative().entries(), q.representative().entries());
}

bool same_point(const Point& p, const Point& q, double tol) { return distance(p, q) <= tol; }

GroupElement transitivity_witness(const Point& m, const Point& p) {
  if (m.group() != p.group()) throw Error(ErrorKind::invalid_argument, "mixed-group arguments");
  return multiply(p.representative(), inverse(m.representative()));
}

}  // namespace levy
