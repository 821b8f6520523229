#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace lg {

// A point of R^n. Thin wrapper so that dimension checks live in one place.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n, double fill = 0.0) : c_(n, fill) {}
  Vector(std::initializer_list<double> c) : c_(c) {}
  explicit Vector(std::vector<double> c) : c_(std::move(c)) {}

  std::size_t size() const { return c_.size(); }
  double operator[](std::size_t i) const { return c_[i]; }
  double& operator[](std::size_t i) { return c_[i]; }
  const std::vector<double>& coords() const { return c_; }
  bool all_finite() const;

  Vector& operator+=(const Vector& o);
  Vector& operator-=(const Vector& o);
  Vector& operator*=(double s);

  friend bool operator==(const Vector& a, const Vector& b) = default;
  friend auto operator<=>(const Vector& a, const Vector& b) = default;

 private:
  std::vector<double> c_;
};

Vector operator+(Vector a, const Vector& b);
Vector operator-(Vector a, const Vector& b);
Vector operator*(Vector a, double s);
Vector operator*(double s, Vector a);
Vector lerp(const Vector& a, const Vector& b, double t);

double dot(const Vector& a, const Vector& b);
double norm(const Vector& a);
double distance(const Vector& a, const Vector& b);
void require_same_dimension(const Vector& a, const Vector& b);

struct Tolerances {
  double eta_collinear = 1e-9;
  double eta_hull = 1e-9;
  double eps_fiber = 0.0;
  double eta_zero = 1e-9;

  // Throws ArgumentError if any field is negative or not finite.
  void validate() const;
};

using PolyPathImage = std::vector<Vector>;

double path_length(const PolyPathImage& p);
bool is_monotone_straight(const PolyPathImage& p, const Tolerances& tol);

// Length-and-gap form of the predicate, for callers that already have both.
bool is_straight_length(double length, double gap, double eta_collinear);

bool are_collinear_midpoint(const Vector& a, const Vector& b, const Vector& c,
                            const Tolerances& tol);

}  // namespace lg
