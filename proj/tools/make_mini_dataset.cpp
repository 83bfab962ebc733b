// Writes the bundled miniature source dataset: ten 256x640 street-scene label
// maps with road, sidewalk, vehicles, sky and a few pre-existing markings.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "roadrand/error.hpp"
#include "roadrand/geometry.hpp"
#include "roadrand/image_io.hpp"
#include "roadrand/labelmap.hpp"
#include "roadrand/markings.hpp"
#include "roadrand/randomizer.hpp"
#include "roadrand/rng.hpp"
#include "roadrand/serialization.hpp"

namespace fs = std::filesystem;
using namespace roadrand;

namespace {

constexpr ClassId kSidewalk = 21;
constexpr ClassId kVehicle = 22;
constexpr ClassId kPedestrian = 23;
constexpr ClassId kBuilding = 24;
constexpr ClassId kVegetation = 25;
constexpr ClassId kSky = 26;

void fill_box(labelmap::LabelMap& m, double u0, double v0, double u1, double v1, ClassId id) {
  const int x0 = std::max(0, static_cast<int>(std::floor(u0)));
  const int x1 = std::min(m.width(), static_cast<int>(std::ceil(u1)));
  const int y0 = std::max(0, static_cast<int>(std::floor(v0)));
  const int y1 = std::min(m.height(), static_cast<int>(std::ceil(v1)));
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) m.at(x, y) = id;
  }
}

// An upright object standing on the ground at (lateral, forward).
void stand(labelmap::LabelMap& m, const geometry::Homography& h, double lateral,
           double forward, double width_m, double height_m, ClassId id) {
  const auto base = geometry::ground_to_image({lateral, forward}, h);
  const double scale = 500.0 / forward;
  fill_box(m, base.u - 0.5 * width_m * scale, base.v - height_m * scale,
           base.u + 0.5 * width_m * scale, base.v, id);
}

labelmap::LabelMap make_scene(int index, const geometry::CameraRig& rig) {
  const auto& k = rig.intrinsics;
  const geometry::Homography h = geometry::ground_homography(rig);
  CounterRng rng(image_seed(2019, static_cast<std::uint64_t>(index)));
  labelmap::LabelMap m(k.image_width, k.image_height, kSky);

  const double road_left = -rng.uniform(3.5, 5.0);
  const double road_right = rng.uniform(3.5, 5.0);
  const double kerb = rng.uniform(2.0, 3.5);
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      geometry::GroundPoint g;
      try {
        g = geometry::image_to_ground({x + 0.5, y + 0.5}, h);
      } catch (const Error&) {
        continue;
      }
      if (g.forward > 80.0) continue;
      if (g.lateral >= road_left && g.lateral <= road_right) {
        m.at(x, y) = 0;
      } else if (g.lateral >= road_left - kerb && g.lateral <= road_right + kerb) {
        m.at(x, y) = kSidewalk;
      } else {
        m.at(x, y) = (x + index) % 3 == 0 ? kVegetation : kBuilding;
      }
    }
  }
  // Facades along the sidewalk edges.
  for (double z = 8.0; z < 60.0; z += 4.0) {
    stand(m, h, road_left - kerb - 1.0, z, 2.2, rng.uniform(6.0, 12.0), kBuilding);
    stand(m, h, road_right + kerb + 1.0, z, 2.2, rng.uniform(6.0, 12.0),
          index % 2 ? kVegetation : kBuilding);
  }

  const markings::Palette& palette = markings::builtin_palette();
  const auto scene = labelmap::SceneClassConfig::defaults();
  const auto place = [&](std::string_view cls, double lateral, double forward, double yaw,
                         const markings::ParamSet& params = {}) {
    const auto inst = markings::instantiate(palette, cls, params, {{lateral, forward}, yaw});
    m = labelmap::rasterize_instance(m, inst, rig, scene).label;
  };
  place("lane_separator", 0.0, 20.0, 0.0, {{"dashes", 4}});
  if (index % 3 == 0) place("stop_line", road_left / 2, rng.uniform(8.0, 14.0), 0.0);
  if (index % 4 == 1) place("arrow_straight", road_right / 2, rng.uniform(9.0, 15.0), 0.0);
  if (index % 5 == 2) place("zigzag", road_right - 1.6, 14.0, 0.0, {{"runs", 2}});
  if (index % 5 == 4) place("give_way_dashes", road_left / 2, 10.0, 0.0);
  if (index == 7) place("bus_stop", road_left + 1.8, 16.0, 0.0);

  // Parked and oncoming vehicles occlude the road.
  const int cars = 1 + static_cast<int>(rng.below(3));
  for (int c = 0; c < cars; ++c) {
    const bool left = rng.uniform() < 0.5;
    const double lat = left ? road_left + 1.0 : road_right - 1.0;
    stand(m, h, lat, rng.uniform(7.0, 35.0), 1.8, 1.5, kVehicle);
  }
  if (index % 2 == 0) stand(m, h, road_right + 0.8, rng.uniform(6.0, 20.0), 0.5, 1.75, kPedestrian);
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_mini_dataset <out-dir>\n";
    return 2;
  }
  const fs::path out = argv[1];
  fs::create_directories(out / "labels");

  geometry::CameraRig rig;
  rig.pose.camera_height = 1.5;
  rig.pose.pitch = 0.05;
  serialization::write_json_file(out / "calib.json", serialization::to_json(rig));

  const auto colors = labelmap::color_table(markings::builtin_palette(),
                                            labelmap::SceneClassConfig::defaults());
  std::string manifest;
  for (int i = 0; i < 10; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "scene_%02d.png", i);
    image_io::write_label_png(out / "labels" / name, make_scene(i, rig), colors);
    serialization::Json entry{{"label", std::string("labels/") + name},
                              {"calibration", "calib.json"},
                              {"split", i < 8 ? "train" : "test"},
                              {"tags", {"overcast"}}};
    manifest += entry.dump() + "\n";
  }
  serialization::write_text_file(out / "manifest.jsonl", manifest);

  auto cfg = randomizer::RandomizationConfig::defaults();
  serialization::write_json_file(out / "config.json", serialization::to_json(cfg));
  return 0;
}
