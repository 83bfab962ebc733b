#pragma once

#include <Eigen/Core>

namespace roadrand::geometry {

struct CameraIntrinsics {
  double focal_u = 500.0;
  double focal_v = 500.0;
  double center_u = 320.0;
  double center_v = 128.0;
  int image_width = 640;
  int image_height = 256;
};

// Camera pose relative to a flat, horizontal road. Pitch is positive when the
// optical axis tilts down; yaw turns the camera toward +lateral.
struct GroundPlanePose {
  double camera_height = 1.5;
  double pitch = 0.0;
  double yaw = 0.0;
};

struct CameraRig {
  CameraIntrinsics intrinsics;
  GroundPlanePose pose;
};

// Metric point on the road plane: lateral is right-positive, forward points
// away from the camera.
struct GroundPoint {
  double lateral = 0.0;
  double forward = 0.0;
};

// Continuous pixel coordinates, origin at the top-left image corner.
struct PixelPoint {
  double u = 0.0;
  double v = 0.0;
};

using Homography = Eigen::Matrix3d;

// Smallest homogeneous scale accepted when dehomogenizing.
inline constexpr double kMinHomogeneousW = 1e-12;

void validate(const CameraIntrinsics& intrinsics);
void validate(const GroundPlanePose& pose);

// H with (u, v, 1)^T ~ H * (lateral, forward, 1)^T. The third row of H gives
// the camera depth of a ground point, so w > 0 means in front of the camera.
Homography ground_homography(const CameraIntrinsics& intrinsics,
                             const GroundPlanePose& pose);
inline Homography ground_homography(const CameraRig& rig) {
  return ground_homography(rig.intrinsics, rig.pose);
}

// Camera depth (distance along the optical axis) of a ground point.
double depth_of(const GroundPoint& p, const Homography& h);

PixelPoint ground_to_image(const GroundPoint& p, const Homography& h);
PixelPoint ground_to_image(const GroundPoint& p,
                           const CameraIntrinsics& intrinsics,
                           const GroundPlanePose& pose);

GroundPoint image_to_ground(const PixelPoint& q, const Homography& h);
GroundPoint image_to_ground(const PixelPoint& q,
                            const CameraIntrinsics& intrinsics,
                            const GroundPlanePose& pose);

// Image row of the horizon at column u (the line where ground depth -> inf).
double horizon_row(const CameraIntrinsics& intrinsics,
                   const GroundPlanePose& pose, double u);

}  // namespace roadrand::geometry
