#pragma once

#include <Eigen/Dense>

namespace eyeorbit {

class PureQuaternion;

// General quaternion w + x i + y j + z k. Components are stored in the
// order (w, x, y, z) everywhere in this library, including vec4().
class Quaternion {
public:
  constexpr Quaternion() = default;
  constexpr Quaternion(double w, double x, double y, double z)
      : w_(w), x_(x), y_(y), z_(z) {}
  constexpr explicit Quaternion(double real) : w_(real) {}

  constexpr double w() const { return w_; }
  constexpr double x() const { return x_; }
  constexpr double y() const { return y_; }
  constexpr double z() const { return z_; }

  double squared_norm() const { return w_ * w_ + x_ * x_ + y_ * y_ + z_ * z_; }
  double norm() const;

  constexpr Quaternion conjugate() const { return {w_, -x_, -y_, -z_}; }
  constexpr double real() const { return w_; }
  PureQuaternion imag() const;

  friend constexpr Quaternion operator*(const Quaternion& a,
                                        const Quaternion& b) {
    return {a.w_ * b.w_ - a.x_ * b.x_ - a.y_ * b.y_ - a.z_ * b.z_,
            a.w_ * b.x_ + a.x_ * b.w_ + a.y_ * b.z_ - a.z_ * b.y_,
            a.w_ * b.y_ - a.x_ * b.z_ + a.y_ * b.w_ + a.z_ * b.x_,
            a.w_ * b.z_ + a.x_ * b.y_ - a.y_ * b.x_ + a.z_ * b.w_};
  }
  friend constexpr Quaternion operator+(const Quaternion& a,
                                        const Quaternion& b) {
    return {a.w_ + b.w_, a.x_ + b.x_, a.y_ + b.y_, a.z_ + b.z_};
  }
  friend constexpr Quaternion operator-(const Quaternion& a,
                                        const Quaternion& b) {
    return {a.w_ - b.w_, a.x_ - b.x_, a.y_ - b.y_, a.z_ - b.z_};
  }
  friend constexpr Quaternion operator*(double s, const Quaternion& a) {
    return {s * a.w_, s * a.x_, s * a.y_, s * a.z_};
  }
  friend constexpr bool operator==(const Quaternion&,
                                   const Quaternion&) = default;

private:
  double w_ = 0.0;
  double x_ = 0.0;
  double y_ = 0.0;
  double z_ = 0.0;
};

// Quaternion with zero real part. Used for translations (mm) and directions.
class PureQuaternion {
public:
  constexpr PureQuaternion() = default;
  constexpr PureQuaternion(double x, double y, double z)
      : x_(x), y_(y), z_(z) {}
  explicit PureQuaternion(const Eigen::Vector3d& v)
      : x_(v.x()), y_(v.y()), z_(v.z()) {}

  constexpr double x() const { return x_; }
  constexpr double y() const { return y_; }
  constexpr double z() const { return z_; }

  constexpr Quaternion quaternion() const { return {0.0, x_, y_, z_}; }
  constexpr operator Quaternion() const { return quaternion(); }
  Eigen::Vector3d vec3() const { return {x_, y_, z_}; }

  constexpr double squared_norm() const {
    return x_ * x_ + y_ * y_ + z_ * z_;
  }
  double norm() const;
  // Unit vector in the same direction; throws DegenerateGeometryError on zero.
  PureQuaternion normalized() const;

  friend constexpr PureQuaternion operator+(const PureQuaternion& a,
                                            const PureQuaternion& b) {
    return {a.x_ + b.x_, a.y_ + b.y_, a.z_ + b.z_};
  }
  friend constexpr PureQuaternion operator-(const PureQuaternion& a,
                                            const PureQuaternion& b) {
    return {a.x_ - b.x_, a.y_ - b.y_, a.z_ - b.z_};
  }
  friend constexpr PureQuaternion operator-(const PureQuaternion& a) {
    return {-a.x_, -a.y_, -a.z_};
  }
  friend constexpr PureQuaternion operator*(double s, const PureQuaternion& a) {
    return {s * a.x_, s * a.y_, s * a.z_};
  }
  friend constexpr bool operator==(const PureQuaternion&,
                                   const PureQuaternion&) = default;

private:
  double x_ = 0.0;
  double y_ = 0.0;
  double z_ = 0.0;
};

constexpr double dot(const PureQuaternion& a, const PureQuaternion& b) {
  return a.x() * b.x() + a.y() * b.y() + a.z() * b.z();
}

constexpr PureQuaternion cross(const PureQuaternion& a,
                               const PureQuaternion& b) {
  return {a.y() * b.z() - a.z() * b.y(), a.z() * b.x() - a.x() * b.z(),
          a.x() * b.y() - a.y() * b.x()};
}

// Unit-norm quaternion representing a rotation.
class UnitQuaternion {
public:
  // Tolerance accepted by the normalizing constructor.
  static constexpr double kNormalizeTolerance = 1e-6;

  constexpr UnitQuaternion() : q_(1.0, 0.0, 0.0, 0.0) {}
  // Normalizes q when | |q| - 1 | <= kNormalizeTolerance, throws otherwise.
  explicit UnitQuaternion(const Quaternion& q);

  static UnitQuaternion identity() { return {}; }
  // Rotation of `angle` rad about `axis` (normalized internally).
  static UnitQuaternion from_axis_angle(const PureQuaternion& axis,
                                        double angle);
  // Any quaternion with nonzero norm, scaled to unit length.
  static UnitQuaternion normalize(const Quaternion& q);

  const Quaternion& quaternion() const { return q_; }
  operator const Quaternion&() const { return q_; }
  double w() const { return q_.w(); }
  double x() const { return q_.x(); }
  double y() const { return q_.y(); }
  double z() const { return q_.z(); }

  UnitQuaternion conjugate() const;
  // Rotation angle in [0, pi].
  double angle() const;

  friend UnitQuaternion operator*(const UnitQuaternion& a,
                                  const UnitQuaternion& b);

private:
  struct Trusted {};
  UnitQuaternion(const Quaternion& q, Trusted) : q_(q) {}

  Quaternion q_;
};

Quaternion multiply(const Quaternion& a, const Quaternion& b);
Quaternion conjugate(const Quaternion& h);

Eigen::Vector4d vec4(const Quaternion& h);
Quaternion from_vec4(const Eigen::Vector4d& v);

// vec4(h * g) == hamilton_plus(h) * vec4(g) == hamilton_minus(g) * vec4(h).
Eigen::Matrix4d hamilton_plus(const Quaternion& h);
Eigen::Matrix4d hamilton_minus(const Quaternion& h);

// diag(1, -1, -1, -1): vec4(conj(h)) == conjugation_matrix() * vec4(h).
Eigen::Matrix4d conjugation_matrix();

// vec4(h x g) == cross_matrix(h) * vec4(g) == cross_matrix(g)^T * vec4(h).
Eigen::Matrix4d cross_matrix(const PureQuaternion& h);
// Same, rejecting quaternions with a nonzero real part.
Eigen::Matrix4d cross_matrix(const Quaternion& h);

// r p r*
PureQuaternion rotate_vector(const UnitQuaternion& r, const PureQuaternion& p);

}  // namespace eyeorbit
