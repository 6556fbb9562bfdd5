#pragma once

#include <Eigen/Core>

namespace rp3p {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

struct PixelCoord {
  double u = 0.0;
  double v = 0.0;
};

/// Pinhole intrinsics. Focal ratios are f/dx and f/dy in pixels.
struct CameraIntrinsics {
  double fu = 800.0;
  double fv = 800.0;
  double u0 = 320.0;
  double v0 = 240.0;

  void validate() const;
};

/// Camera pose in the world frame.
///
/// `rotation` maps world-frame directions into the camera frame and `center`
/// is the optical center in world coordinates, so a world point p has camera
/// coordinates rotation * (p - center). The camera looks along its +z axis.
class RigidPose {
 public:
  RigidPose() = default;

  /// Throws InvalidParameter unless `rotation` is orthonormal with det +1 (1e-9).
  RigidPose(const Mat3& rotation, const Vec3& center);

  const Mat3& rotation() const { return rotation_; }
  const Vec3& center() const { return center_; }

  Vec3 to_camera(const Vec3& world_point) const;
  /// Optical axis expressed in the world frame.
  Vec3 optical_axis_world() const;
  /// Camera-frame direction expressed in the world frame.
  Vec3 direction_to_world(const Vec3& camera_dir) const;

  /// Pose whose optical axis points along `axis_world`. Roll is fixed by
  /// keeping the camera x axis as close to world +x as possible.
  static RigidPose looking_along(const Vec3& axis_world, const Vec3& center);

 private:
  Mat3 rotation_ = Mat3::Identity();
  Vec3 center_ = Vec3::Zero();
};

/// Projects a world point; throws PointBehindCamera when camera-frame z <= 0.
PixelCoord project_world_to_pixel(const Vec3& point, const RigidPose& pose,
                                  const CameraIntrinsics& K);

/// Unit bearing in the camera frame through `pixel`.
Vec3 back_project_bearing(const PixelCoord& pixel, const CameraIntrinsics& K);

/// Angle between a camera-frame bearing and the optical axis. Accepts any
/// positive scaling of the bearing.
double incidence_angle(const Vec3& bearing);

/// Angle between two bearings in [0, pi]; throws InvalidBearing on zero length.
double inter_bearing_angle(const Vec3& b_i, const Vec3& b_j);

/// arccos with its argument clamped to [-1, 1].
double safe_acos(double c);

/// Angle between two nonzero vectors.
double angle_between(const Vec3& a, const Vec3& b);

}  // namespace rp3p
