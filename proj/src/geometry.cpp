#include "rp3p/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Geometry>

#include "rp3p/error.hpp"

namespace rp3p {

void CameraIntrinsics::validate() const {
  if (!(fu > 0.0) || !(fv > 0.0) || !std::isfinite(u0) || !std::isfinite(v0)) {
    throw Error(ErrorCode::InvalidParameter, "camera intrinsics need fu > 0, fv > 0 and a finite principal point");
  }
}

RigidPose::RigidPose(const Mat3& rotation, const Vec3& center) : rotation_(rotation), center_(center) {
  const double ortho_err = (rotation * rotation.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff();
  const double det = rotation.determinant();
  if (!(ortho_err <= 1e-9) || !(std::abs(det - 1.0) <= 1e-9)) {
    throw Error(ErrorCode::InvalidParameter,
                "rotation is not a proper orthonormal matrix (orthogonality error " + std::to_string(ortho_err) +
                    ", det " + std::to_string(det) + ")");
  }
  if (!center.allFinite()) {
    throw Error(ErrorCode::InvalidParameter, "camera center must be finite");
  }
}

Vec3 RigidPose::to_camera(const Vec3& world_point) const { return rotation_ * (world_point - center_); }

Vec3 RigidPose::optical_axis_world() const { return rotation_.row(2).transpose(); }

Vec3 RigidPose::direction_to_world(const Vec3& camera_dir) const { return rotation_.transpose() * camera_dir; }

RigidPose RigidPose::looking_along(const Vec3& axis_world, const Vec3& center) {
  const double n = axis_world.norm();
  if (!(n > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "optical axis must be nonzero");
  }
  const Vec3 z = axis_world / n;
  Vec3 x = Vec3::UnitX() - Vec3::UnitX().dot(z) * z;
  if (x.norm() < 1e-6) {
    x = Vec3::UnitY() - Vec3::UnitY().dot(z) * z;
  }
  x.normalize();
  const Vec3 y = z.cross(x);
  Mat3 R;
  R.row(0) = x.transpose();
  R.row(1) = y.transpose();
  R.row(2) = z.transpose();
  return RigidPose(R, center);
}

PixelCoord project_world_to_pixel(const Vec3& point, const RigidPose& pose, const CameraIntrinsics& K) {
  const Vec3 pc = pose.to_camera(point);
  if (!(pc.z() > 0.0)) {
    throw Error(ErrorCode::PointBehindCamera, "point is not in front of the camera (z_c = " + std::to_string(pc.z()) + ")",
                Stage::Projection);
  }
  return {K.fu * (pc.x() / pc.z()) + K.u0, K.fv * (pc.y() / pc.z()) + K.v0};
}

Vec3 back_project_bearing(const PixelCoord& pixel, const CameraIntrinsics& K) {
  return Vec3((pixel.u - K.u0) / K.fu, (pixel.v - K.v0) / K.fv, 1.0).normalized();
}

double safe_acos(double c) { return std::acos(std::clamp(c, -1.0, 1.0)); }

double angle_between(const Vec3& a, const Vec3& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (!(na > 0.0) || !(nb > 0.0)) {
    throw Error(ErrorCode::InvalidBearing, "zero-length direction");
  }
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

double incidence_angle(const Vec3& bearing) { return angle_between(bearing, Vec3::UnitZ()); }

double inter_bearing_angle(const Vec3& b_i, const Vec3& b_j) { return angle_between(b_i, b_j); }

}  // namespace rp3p
