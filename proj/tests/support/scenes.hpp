#pragma once

#include <cmath>
#include <filesystem>

#include <Eigen/LU>
#include <string>

#include "roadrand/geometry.hpp"
#include "roadrand/labelmap.hpp"
#include "roadrand/rng.hpp"

namespace roadrand::testing {

inline constexpr ClassId kSidewalk = 21;
inline constexpr ClassId kVehicle = 22;
inline constexpr ClassId kSky = 26;

inline geometry::CameraRig default_rig() {
  geometry::CameraRig rig;
  rig.pose.camera_height = 1.5;
  rig.pose.pitch = 0.05;
  return rig;
}

// Road below the horizon, sky above.
inline labelmap::LabelMap road_scene(const geometry::CameraRig& rig) {
  const auto& k = rig.intrinsics;
  labelmap::LabelMap m(k.image_width, k.image_height, kSky);
  const geometry::Homography h = geometry::ground_homography(rig);
  const Eigen::Vector3d l = h.inverse().transpose() * Eigen::Vector3d(0, 0, 1);
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      // Third component of H^-1 (u, v, 1) is positive below the horizon.
      if (l.dot(Eigen::Vector3d(x + 0.5, y + 0.5, 1.0)) > 1e-9) m.at(x, y) = 0;
    }
  }
  return m;
}

inline void fill_rect(labelmap::LabelMap& m, int x0, int y0, int x1, int y1, ClassId id) {
  for (int y = std::max(0, y0); y < std::min(m.height(), y1); ++y) {
    for (int x = std::max(0, x0); x < std::min(m.width(), x1); ++x) m.at(x, y) = id;
  }
}

// Road scene with sidewalk wedges, parked vehicles and a few painted blobs
// carrying marking ids.
inline labelmap::LabelMap cluttered_scene(const geometry::CameraRig& rig, std::uint64_t seed) {
  CounterRng rng(seed);
  labelmap::LabelMap m = road_scene(rig);
  const int w = m.width();
  const int h = m.height();
  const int side = static_cast<int>(rng.between(0, w / 4));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < side * (y + 1) / h; ++x) {
      if (m.at(x, y) == 0) m.at(x, y) = kSidewalk;
      if (m.at(w - 1 - x, y) == 0) m.at(w - 1 - x, y) = kSidewalk;
    }
  }
  const int cars = static_cast<int>(rng.between(0, 4));
  for (int c = 0; c < cars; ++c) {
    const int cx = static_cast<int>(rng.below(w));
    const int cy = static_cast<int>(rng.between(h / 2, h - 1));
    const int half = static_cast<int>(rng.between(10, 80));
    fill_rect(m, cx - half, cy - half, cx + half, cy, kVehicle);
  }
  const int blobs = static_cast<int>(rng.between(0, 5));
  for (int b = 0; b < blobs; ++b) {
    const int bx = static_cast<int>(rng.below(w));
    const int by = static_cast<int>(rng.between(h / 2, h - 1));
    const auto id = static_cast<ClassId>(rng.between(1, 20));
    for (int y = by; y < std::min(h, by + 6); ++y) {
      for (int x = bx; x < std::min(w, bx + 20); ++x) {
        if (m.at(x, y) == 0) m.at(x, y) = id;
      }
    }
  }
  return m;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("roadrand_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::filesystem::path source_dir() { return ROADRAND_SOURCE_DIR; }

}  // namespace roadrand::testing
