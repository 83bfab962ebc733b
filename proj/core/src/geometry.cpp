#include "roadrand/geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/LU>

#include "roadrand/error.hpp"

namespace roadrand::geometry {

void validate(const CameraIntrinsics& k) {
  const bool ok = std::isfinite(k.focal_u) && std::isfinite(k.focal_v) &&
                  k.focal_u > 0.0 && k.focal_v > 0.0 && k.image_width >= 1 &&
                  k.image_height >= 1 && k.center_u >= 0.0 &&
                  k.center_u < k.image_width && k.center_v >= 0.0 &&
                  k.center_v < k.image_height;
  if (!ok) {
    throw Error(ErrorCode::kInvalidConfig, "invalid camera intrinsics");
  }
}

void validate(const GroundPlanePose& pose) {
  if (!(pose.camera_height > 0.0) || !std::isfinite(pose.camera_height)) {
    throw Error(ErrorCode::kInvalidPose,
                "camera height must be positive, got " +
                    std::to_string(pose.camera_height));
  }
  if (!(std::abs(pose.pitch) < std::numbers::pi / 2)) {
    throw Error(ErrorCode::kInvalidPose,
                "|pitch| must be below pi/2, got " + std::to_string(pose.pitch));
  }
  if (!std::isfinite(pose.yaw)) {
    throw Error(ErrorCode::kInvalidPose, "yaw must be finite");
  }
}

Homography ground_homography(const CameraIntrinsics& k,
                             const GroundPlanePose& pose) {
  validate(k);
  validate(pose);

  // (lateral, forward, 1) -> world (x, y, z) with the road at y = -height.
  Eigen::Matrix3d lift;
  lift << 1.0, 0.0, 0.0,
          0.0, 0.0, -pose.camera_height,
          0.0, 1.0, 0.0;

  const double cy = std::cos(pose.yaw);
  const double sy = std::sin(pose.yaw);
  Eigen::Matrix3d yaw;
  yaw << cy, 0.0, -sy,
         0.0, 1.0, 0.0,
         sy, 0.0, cy;

  const double cp = std::cos(pose.pitch);
  const double sp = std::sin(pose.pitch);
  Eigen::Matrix3d pitch;
  pitch << 1.0, 0.0, 0.0,
           0.0, cp, sp,
           0.0, -sp, cp;

  // Camera y points up, image v points down.
  Eigen::Matrix3d intr;
  intr << k.focal_u, 0.0, k.center_u,
          0.0, -k.focal_v, k.center_v,
          0.0, 0.0, 1.0;

  return intr * pitch * yaw * lift;
}

double depth_of(const GroundPoint& p, const Homography& h) {
  return h(2, 0) * p.lateral + h(2, 1) * p.forward + h(2, 2);
}

PixelPoint ground_to_image(const GroundPoint& p, const Homography& h) {
  const Eigen::Vector3d x = h * Eigen::Vector3d(p.lateral, p.forward, 1.0);
  if (!(x.z() >= kMinHomogeneousW)) {
    throw Error(ErrorCode::kNotVisible,
                "ground point (" + std::to_string(p.lateral) + ", " +
                    std::to_string(p.forward) +
                    ") is behind the camera or on the horizon");
  }
  return {x.x() / x.z(), x.y() / x.z()};
}

PixelPoint ground_to_image(const GroundPoint& p, const CameraIntrinsics& k,
                           const GroundPlanePose& pose) {
  return ground_to_image(p, ground_homography(k, pose));
}

GroundPoint image_to_ground(const PixelPoint& q, const Homography& h) {
  // H^{-1} (u, v, 1) = (lateral, forward, 1) / depth, so the third component
  // is positive exactly for pixels below the horizon.
  const Eigen::Vector3d g = h.inverse() * Eigen::Vector3d(q.u, q.v, 1.0);
  if (!(g.z() >= kMinHomogeneousW) || !std::isfinite(g.z())) {
    throw Error(ErrorCode::kNoGroundIntersection,
                "pixel (" + std::to_string(q.u) + ", " + std::to_string(q.v) +
                    ") does not intersect the ground plane");
  }
  return {g.x() / g.z(), g.y() / g.z()};
}

GroundPoint image_to_ground(const PixelPoint& q, const CameraIntrinsics& k,
                            const GroundPlanePose& pose) {
  return image_to_ground(q, ground_homography(k, pose));
}

double horizon_row(const CameraIntrinsics& k, const GroundPlanePose& pose,
                   double u) {
  const Homography h = ground_homography(k, pose);
  const Eigen::Vector3d line = h.inverse().transpose() * Eigen::Vector3d::UnitZ();
  return -(line.x() * u + line.z()) / line.y();
}

}  // namespace roadrand::geometry
