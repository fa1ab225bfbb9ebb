#pragma once

#include "vilo/state.hpp"

namespace vilo {

/// Rectified pinhole stereo pair. The right camera shares intrinsics with
/// the left and is shifted by `baseline` along the camera x axis. T_BC is a
/// fixed extrinsic calibration (camera frame -> base frame).
struct CameraModel {
  double fx = 400.0;
  double fy = 400.0;
  double cx = 424.0;
  double cy = 240.0;
  double baseline = 0.1;  // m
  Rotation r_bc = Rotation::Identity();
  Vec3 p_bc = Vec3::Zero();
  int width = 848;
  int height = 480;

  /// Base x forward, y left, z up; camera z forward, x right, y down.
  static Rotation forward_looking_r_bc() {
    Rotation r;
    r << 0, 0, 1,
        -1, 0, 0,
         0, -1, 0;
    return r;
  }
};

struct StereoProjection {
  double ul = 0.0;
  double ur = 0.0;
  double v = 0.0;
  double depth = 0.0;
  bool valid = false;  // depth above the near plane
};

inline constexpr double kMinLandmarkDepth = 1e-3;  // m

/// Project a world point through a base pose into stereo pixel coordinates.
inline StereoProjection project_stereo(const CameraModel& cam,
                                       const Rotation& r_wb, const Vec3& p_wb,
                                       const Vec3& point_w) {
  const Vec3 p_base = r_wb.transpose() * (point_w - p_wb);
  const Vec3 p_cam = cam.r_bc.transpose() * (p_base - cam.p_bc);

  StereoProjection out;
  out.depth = p_cam.z();
  if (p_cam.z() <= kMinLandmarkDepth) {
    return out;
  }
  out.ul = cam.fx * p_cam.x() / p_cam.z() + cam.cx;
  out.ur = cam.fx * (p_cam.x() - cam.baseline) / p_cam.z() + cam.cx;
  out.v = cam.fy * p_cam.y() / p_cam.z() + cam.cy;
  out.valid = true;
  return out;
}

inline bool in_image(const CameraModel& cam, const StereoProjection& p) {
  return p.valid && p.ul >= 0.0 && p.ul < cam.width && p.ur >= 0.0 &&
         p.ur < cam.width && p.v >= 0.0 && p.v < cam.height;
}

/// Invert the stereo projection at a given base pose (used to initialize
/// landmark estimates from their first observation).
inline Vec3 triangulate_stereo(const CameraModel& cam, const Rotation& r_wb,
                               const Vec3& p_wb, double ul, double ur,
                               double v) {
  const double disparity = std::max(ul - ur, 1e-6);
  const double z = cam.fx * cam.baseline / disparity;
  Vec3 p_cam;
  p_cam.x() = (ul - cam.cx) * z / cam.fx;
  p_cam.y() = (v - cam.cy) * z / cam.fy;
  p_cam.z() = z;
  return r_wb * (cam.r_bc * p_cam + cam.p_bc) + p_wb;
}

}  // namespace vilo
