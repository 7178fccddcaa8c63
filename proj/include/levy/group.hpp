#pragma once

// Matrix-group kernel for the two shipped instances:
//   SL2R  acting on the hyperbolic plane H^2 = SL(2,R)/SO(2) (curvature -1),
//   SU2   acting on itself by left translation.
//
// SL2R elements are stored as row-major 2x2 matrices (a, b, c, d); SU2
// elements as unit quaternions (w, x, y, z).

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

namespace levy {

enum class GroupId : std::uint8_t { SL2R = 0, SU2 = 1 };

std::string_view to_string(GroupId id);
GroupId group_from_string(std::string_view name);

/// Dimension of the space M on which the group acts (2 for H^2, 3 for SU2).
int space_dimension(GroupId id);

class GroupElement {
 public:
  using Entries = std::array<double, 4>;

  static GroupElement identity(GroupId id);
  /// Validates |det - 1| <= 1e-9.
  static GroupElement sl2r(double a, double b, double c, double d);
  /// Validates | |q| - 1 | <= 1e-9.
  static GroupElement su2(double w, double x, double y, double z);
  /// No validation; used by kernels that maintain the invariant themselves.
  static GroupElement from_entries_unchecked(GroupId id, const Entries& e);

  GroupId group() const noexcept { return group_; }
  const Entries& entries() const noexcept { return e_; }
  double operator[](std::size_t i) const noexcept { return e_[i]; }

  /// det for SL2R, squared norm for SU2.
  double invariant() const noexcept;

  friend bool operator==(const GroupElement&, const GroupElement&) = default;

 private:
  GroupElement(GroupId id, const Entries& e) : group_(id), e_(e) {}

  GroupId group_;
  Entries e_;
};

/// Group product g*h, renormalized onto the group.
GroupElement multiply(const GroupElement& g, const GroupElement& h);
GroupElement inverse(const GroupElement& g);
GroupElement renormalize(const GroupElement& g);
inline GroupElement operator*(const GroupElement& g, const GroupElement& h) { return multiply(g, h); }

/// Max-entry distance between two elements of the same group.
double max_entry_distance(const GroupElement& g, const GroupElement& h);

// Structured SL2R elements.
GroupElement rotation(double angle);          // k_angle in SO(2)
GroupElement boost(double t);                 // a_t = diag(e^{t/2}, e^{-t/2})
GroupElement unipotent(double n);             // [[1, n], [0, 1]]

// Structured SU2 elements: rotation by `angle` about the unit `axis`.
GroupElement su2_rotation(const std::array<double, 3>& axis, double angle);

/// Group exponential of a tangent vector in the Cartan p-subspace (SL2R,
/// two components, |v| = geodesic length of the projected step) or in su(2)
/// (three components, |v| = rotation angle).
GroupElement exp_tangent(GroupId id, std::span<const double> v);

struct IwasawaCoords {
  double k_angle = 0.0;
  double H = 0.0;  // coordinate of H(g) in the one-dimensional algebra a
  double n = 0.0;
};

/// g = k(g) exp(H(g)) n(g) for SL2R; throws unsupported_group for SU2.
IwasawaCoords iwasawa(const GroupElement& g);
GroupElement recompose(const IwasawaCoords& c);

/// A-projection of the NAK decomposition g = n exp(A(g)) k, obtained from
/// the Iwasawa coordinates of g^{-1}: A(g) = -H(g^{-1}).
double nak_projection(const GroupElement& g);

struct CartanCoords {
  double k1_angle = 0.0;
  double t = 0.0;
  double k2_angle = 0.0;
};

/// g = k_{k1} a_t k_{k2} with t >= 0 (SL2R only).
CartanCoords cartan(const GroupElement& g);
GroupElement recompose(const CartanCoords& c);

/// Radial coordinate of the polar decomposition: distance(eK, gK) for SL2R,
/// distance(e, g) for SU2.
double cartan_radial(const GroupElement& g);

/// A point of M. For SL2R the representative is the canonical
/// upper-triangular element n_x a_y (so the point is z = x + i y in the upper
/// half-plane); for SU2 it is the group element itself.
class Point {
 public:
  explicit Point(const GroupElement& representative);

  GroupId group() const noexcept { return rep_.group(); }
  const GroupElement& representative() const noexcept { return rep_; }

  /// Upper-half-plane coordinates; SL2R only.
  double x() const;
  double y() const;

 private:
  GroupElement rep_;
};

Point project(const GroupElement& g);
Point base_point(GroupId id);
/// Phi(sigma, p).
Point act(const GroupElement& sigma, const Point& p);
double distance(const Point& p, const Point& q);
bool same_point(const Point& p, const Point& q, double tol = 1e-9);

/// A sigma with act(sigma, m) = p.
GroupElement transitivity_witness(const Point& m, const Point& p);

/// Hyperbolic distance between upper-half-plane points (x1, y1), (x2, y2).
double hyperbolic_distance(double x1, double y1, double x2, double y2);
/// Bi-invariant geodesic angle between unit quaternions.
double su2_angle(const GroupElement::Entries& p, const GroupElement::Entries& q);

}  // namespace levy
