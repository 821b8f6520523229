#include "lg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lg/errors.hpp"

namespace lg {

bool Vector::all_finite() const {
  return std::all_of(c_.begin(), c_.end(), [](double v) { return std::isfinite(v); });
}

void require_same_dimension(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) {
    throw DimensionError("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  }
}

Vector& Vector::operator+=(const Vector& o) {
  require_same_dimension(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& o) {
  require_same_dimension(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Vector& Vector::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

Vector operator+(Vector a, const Vector& b) { return a += b; }
Vector operator-(Vector a, const Vector& b) { return a -= b; }
Vector operator*(Vector a, double s) { return a *= s; }
Vector operator*(double s, Vector a) { return a *= s; }

Vector lerp(const Vector& a, const Vector& b, double t) {
  require_same_dimension(a, b);
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + t * (b[i] - a[i]);
  return r;
}

double dot(const Vector& a, const Vector& b) {
  require_same_dimension(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vector& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * a[i];
  return std::sqrt(s);
}

double distance(const Vector& a, const Vector& b) {
  require_same_dimension(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

void Tolerances::validate() const {
  for (double v : {eta_collinear, eta_hull, eps_fiber, eta_zero}) {
    if (!std::isfinite(v) || v < 0.0) throw ArgumentError("tolerances must be finite and >= 0");
  }
}

double path_length(const PolyPathImage& p) {
  if (p.empty()) throw ArgumentError("path_length: empty path");
  double len = 0.0;
  for (std::size_t i = 1; i < p.size(); ++i) len += distance(p[i - 1], p[i]);
  return len;
}

bool is_straight_length(double length, double gap, double eta_collinear) {
  return length <= gap + eta_collinear * std::max(1.0, length);
}

bool is_monotone_straight(const PolyPathImage& p, const Tolerances& tol) {
  const double len = path_length(p);
  return is_straight_length(len, distance(p.front(), p.back()), tol.eta_collinear);
}

bool are_collinear_midpoint(const Vector& a, const Vector& b, const Vector& c,
                            const Tolerances& tol) {
  const double ac = distance(a, c);
  const double half = 0.5 * ac;
  const double slack = tol.eta_collinear * std::max(1.0, ac);
  return std::abs(distance(a, b) - half) <= slack && std::abs(distance(b, c) - half) <= slack;
}

}  // namespace lg
