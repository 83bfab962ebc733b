#include "roadrand/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "roadrand/error.hpp"

namespace roadrand::serialization {
namespace {

[[noreturn]] void fail(const std::string& ctx, const std::string& msg) {
  throw Error(ErrorCode::kParse, ctx + ": " + msg);
}

const Json& field(const Json& j, const char* key, const std::string& ctx) {
  if (!j.is_object()) fail(ctx, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(ctx, std::string("missing field '") + key + "'");
  return *it;
}

double num(const Json& v, const std::string& ctx) {
  if (!v.is_number()) fail(ctx, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(ctx, "expected a finite number");
  return d;
}

double num(const Json& j, const char* key, const std::string& ctx) {
  return num(field(j, key, ctx), ctx + "." + key);
}

double num_or(const Json& j, const char* key, double def, const std::string& ctx) {
  return j.contains(key) ? num(j, key, ctx) : def;
}

std::int64_t integer(const Json& v, const std::string& ctx) {
  if (!v.is_number_integer()) fail(ctx, "expected an integer");
  return v.get<std::int64_t>();
}

std::int64_t integer(const Json& j, const char* key, const std::string& ctx) {
  return integer(field(j, key, ctx), ctx + "." + key);
}

std::uint64_t unsigned_int(const Json& j, const char* key, const std::string& ctx) {
  const Json& v = field(j, key, ctx);
  if (!v.is_number_unsigned()) fail(ctx + "." + key, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

ClassId class_id(const Json& v, const std::string& ctx) {
  const std::int64_t id = integer(v, ctx);
  if (id < 0 || id > 255) fail(ctx, "class id outside 0..255");
  return static_cast<ClassId>(id);
}

std::string str(const Json& j, const char* key, const std::string& ctx) {
  const Json& v = field(j, key, ctx);
  if (!v.is_string()) fail(ctx + "." + key, "expected a string");
  return v.get<std::string>();
}

bool boolean(const Json& j, const char* key, const std::string& ctx) {
  const Json& v = field(j, key, ctx);
  if (!v.is_boolean()) fail(ctx + "." + key, "expected a boolean");
  return v.get<bool>();
}

const Json& array(const Json& v, const std::string& ctx) {
  if (!v.is_array()) fail(ctx, "expected an array");
  return v;
}

markings::ParamSet params_from(const Json& v, const std::string& ctx) {
  if (!v.is_object()) fail(ctx, "expected an object of numbers");
  markings::ParamSet out;
  for (auto it = v.begin(); it != v.end(); ++it) {
    if (it.key() == "configuration" && it.value().is_string()) {
      try {
        out["runs"] = markings::zigzag_runs(it.value().get<std::string>());
      } catch (const Error& e) {
        fail(ctx + ".configuration", e.what());
      }
      continue;
    }
    out[it.key()] = num(it.value(), ctx + "." + it.key());
  }
  return out;
}

Json params_to(const markings::ParamSet& p) {
  Json j = Json::object();
  for (const auto& [k, v] : p) j[k] = v;
  return j;
}

Json range_to(const randomizer::Range& r) { return Json{{"min", r.min}, {"max", r.max}}; }

randomizer::Range range_from(const Json& v, const std::string& ctx) {
  return {num(v, "min", ctx), num(v, "max", ctx)};
}

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Json parse_json(std::string_view text, const std::string& origin) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    const auto [line, col] = line_col(text, byte);
    std::string msg = e.what();
    if (auto pos = msg.find("parse error"); pos != std::string::npos) msg = msg.substr(pos);
    throw Error(ErrorCode::kParse, origin + ":" + std::to_string(line) + ":" +
                                       std::to_string(col) + ": " + msg);
  }
}

Json read_json_file(const std::filesystem::path& path) {
  return parse_json(read_all(path), path.string());
}

std::vector<JsonLine> read_jsonl_file(const std::filesystem::path& path) {
  const std::string text = read_all(path);
  std::vector<JsonLine> out;
  std::size_t line = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    ++line;
    std::string_view row(text.data() + start, end - start);
    if (row.find_first_not_of(" \t\r") != std::string_view::npos) {
      try {
        out.push_back({line, Json::parse(row.begin(), row.end())});
      } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::kParse, path.string() + ":" + std::to_string(line) + ":" +
                                           std::to_string(e.byte) + ": invalid JSON line");
      }
    }
    start = end + 1;
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string content_hash(const Json& j) { return fnv1a_hex(j.dump()); }

Json to_json(const geometry::CameraRig& rig) {
  const auto& k = rig.intrinsics;
  const auto& p = rig.pose;
  return Json{{"focal_u", k.focal_u},         {"focal_v", k.focal_v},
              {"center_u", k.center_u},       {"center_v", k.center_v},
              {"image_width", k.image_width}, {"image_height", k.image_height},
              {"camera_height", p.camera_height}, {"pitch", p.pitch},
              {"yaw", p.yaw}};
}

geometry::CameraRig rig_from_json(const Json& j) {
  const std::string ctx = "calibration";
  geometry::CameraRig rig;
  auto& k = rig.intrinsics;
  k.focal_u = num(j, "focal_u", ctx);
  k.focal_v = num(j, "focal_v", ctx);
  k.center_u = num(j, "center_u", ctx);
  k.center_v = num(j, "center_v", ctx);
  k.image_width = static_cast<int>(integer(j, "image_width", ctx));
  k.image_height = static_cast<int>(integer(j, "image_height", ctx));
  rig.pose.camera_height = num(j, "camera_height", ctx);
  rig.pose.pitch = num(j, "pitch", ctx);
  rig.pose.yaw = num_or(j, "yaw", 0.0, ctx);
  geometry::validate(rig.intrinsics);
  geometry::validate(rig.pose);
  return rig;
}

Json to_json(const markings::Palette& palette) {
  Json arr = Json::array();
  for (const auto& c : palette) {
    arr.push_back(Json{{"id", c.id},
                       {"name", c.name},
                       {"template", c.template_name},
                       {"default_params", params_to(c.default_params)},
                       {"color", {c.color[0], c.color[1], c.color[2]}}});
  }
  return arr;
}

markings::Palette palette_from_json(const Json& j) {
  markings::Palette out;
  std::size_t i = 0;
  for (const Json& e : array(j, "palette")) {
    const std::string ctx = "palette[" + std::to_string(i++) + "]";
    markings::MarkingClass c;
    c.id = class_id(field(e, "id", ctx), ctx + ".id");
    c.name = str(e, "name", ctx);
    c.template_name = e.contains("template") && !e["template"].is_null()
                          ? str(e, "template", ctx)
                          : std::string();
    if (e.contains("default_params")) {
      c.default_params = params_from(e["default_params"], ctx + ".default_params");
    }
    if (e.contains("color")) {
      const Json& col = array(e["color"], ctx + ".color");
      if (col.size() != 3) fail(ctx + ".color", "expected three components");
      for (std::size_t k = 0; k < 3; ++k) {
        const std::int64_t v = integer(col[k], ctx + ".color");
        if (v < 0 || v > 255) fail(ctx + ".color", "component outside 0..255");
        c.color[k] = static_cast<std::uint8_t>(v);
      }
    }
    if (c.id != markings::kBackgroundId && c.template_name.empty()) {
      fail(ctx, "marking classes need a template");
    }
    out.push_back(std::move(c));
  }
  markings::validate_palette(out);
  return out;
}

Json to_json(const labelmap::SceneClassConfig& cfg) {
  Json markings = Json::array();
  for (ClassId id : cfg.marking_ids) markings.push_back(id);
  Json scene = Json::array();
  for (const auto& [id, name] : cfg.scene_classes) scene.push_back(Json{{"id", id}, {"name", name}});
  return Json{{"road_id", cfg.road_id},
              {"marking_ids", markings},
              {"ignore_id", cfg.ignore_id},
              {"scene_classes", scene}};
}

labelmap::SceneClassConfig scene_from_json(const Json& j) {
  const std::string ctx = "scene_config";
  labelmap::SceneClassConfig cfg;
  cfg.road_id = class_id(field(j, "road_id", ctx), ctx + ".road_id");
  cfg.ignore_id = class_id(field(j, "ignore_id", ctx), ctx + ".ignore_id");
  for (const Json& v : array(field(j, "marking_ids", ctx), ctx + ".marking_ids")) {
    cfg.marking_ids.insert(class_id(v, ctx + ".marking_ids"));
  }
  if (j.contains("scene_classes")) {
    for (const Json& e : array(j["scene_classes"], ctx + ".scene_classes")) {
      cfg.scene_classes[class_id(field(e, "id", ctx), ctx + ".scene_classes.id")] =
          str(e, "name", ctx + ".scene_classes");
    }
  }
  labelmap::validate(cfg);
  return cfg;
}

Json to_json(const randomizer::RandomizationConfig& cfg) {
  Json weights = Json::object();
  for (const auto& [k, v] : cfg.class_weights) weights[k] = v;
  Json jitter = Json::object();
  for (const auto& [cls, params] : cfg.param_jitter) {
    Json p = Json::object();
    for (const auto& [name, r] : params) p[name] = range_to(r);
    jitter[cls] = p;
  }
  return Json{{"class_weights", weights},
              {"quantity_min", cfg.quantity_min},
              {"quantity_max", cfg.quantity_max},
              {"forward_range", range_to(cfg.forward_range)},
              {"lateral_range", range_to(cfg.lateral_range)},
              {"yaw_mode", cfg.yaw_mode == randomizer::YawMode::kAligned ? "aligned" : "uniform"},
              {"yaw_jitter", cfg.yaw_jitter},
              {"param_jitter", jitter},
              {"min_placed_fraction", cfg.min_placed_fraction},
              {"retry_budget", cfg.retry_budget},
              {"master_seed", cfg.master_seed}};
}

randomizer::RandomizationConfig randomization_from_json(const Json& j) {
  const std::string ctx = "randomization_config";
  if (!j.is_object()) fail(ctx, "expected an object");
  // Missing fields keep their defaults.
  randomizer::RandomizationConfig cfg = randomizer::RandomizationConfig::defaults();
  if (j.contains("class_weights")) {
    const Json& w = j["class_weights"];
    if (!w.is_object()) fail(ctx + ".class_weights", "expected an object");
    cfg.class_weights.clear();
    for (auto it = w.begin(); it != w.end(); ++it) {
      cfg.class_weights[it.key()] = num(it.value(), ctx + ".class_weights." + it.key());
    }
  }
  if (j.contains("quantity_min")) cfg.quantity_min = static_cast<int>(integer(j, "quantity_min", ctx));
  if (j.contains("quantity_max")) cfg.quantity_max = static_cast<int>(integer(j, "quantity_max", ctx));
  if (j.contains("forward_range")) cfg.forward_range = range_from(j["forward_range"], ctx + ".forward_range");
  if (j.contains("lateral_range")) cfg.lateral_range = range_from(j["lateral_range"], ctx + ".lateral_range");
  if (j.contains("yaw_mode")) {
    const std::string mode = str(j, "yaw_mode", ctx);
    if (mode == "aligned") {
      cfg.yaw_mode = randomizer::YawMode::kAligned;
    } else if (mode == "uniform") {
      cfg.yaw_mode = randomizer::YawMode::kUniform;
    } else {
      fail(ctx + ".yaw_mode", "expected 'aligned' or 'uniform'");
    }
  }
  cfg.yaw_jitter = num_or(j, "yaw_jitter", cfg.yaw_jitter, ctx);
  if (j.contains("param_jitter")) {
    const Json& pj = j["param_jitter"];
    if (!pj.is_object()) fail(ctx + ".param_jitter", "expected an object");
    cfg.param_jitter.clear();
    for (auto it = pj.begin(); it != pj.end(); ++it) {
      const std::string cctx = ctx + ".param_jitter." + it.key();
      if (!it.value().is_object()) fail(cctx, "expected an object");
      auto& dst = cfg.param_jitter[it.key()];
      for (auto p = it.value().begin(); p != it.value().end(); ++p) {
        dst[p.key()] = range_from(p.value(), cctx + "." + p.key());
      }
    }
  }
  cfg.min_placed_fraction = num_or(j, "min_placed_fraction", cfg.min_placed_fraction, ctx);
  if (j.contains("retry_budget")) cfg.retry_budget = static_cast<int>(integer(j, "retry_budget", ctx));
  if (j.contains("master_seed")) cfg.master_seed = unsigned_int(j, "master_seed", ctx);
  return cfg;
}

Json to_json(const randomizer::PlacementAttempt& a) {
  return Json{{"instance", a.instance},
              {"attempt", a.attempt},
              {"class_id", a.class_id},
              {"class", a.class_name},
              {"pose", {{"lateral", a.pose.anchor.lateral},
                        {"forward", a.pose.anchor.forward},
                        {"yaw", a.pose.yaw}}},
              {"params", params_to(a.params)},
              {"placed_pixels", a.placed_pixels},
              {"footprint_pixels", a.footprint_pixels},
              {"dropped_polygons", a.dropped_polygons},
              {"accepted", a.accepted},
              {"reason", a.reason}};
}

Json to_json(const randomizer::SceneRecord& rec) {
  Json attempts = Json::array();
  for (const auto& a : rec.attempts) attempts.push_back(to_json(a));
  Json j{{"index", rec.index},
         {"source_label", rec.source_label},
         {"output_label", rec.output_label},
         {"target_class", rec.target_class},
         {"image_seed", rec.image_seed},
         {"requested_instances", rec.requested_instances},
         {"accepted_instances", rec.accepted_instances},
         {"exhausted_instances", rec.exhausted_instances},
         {"status", rec.status}};
  if (!rec.error.empty()) j["error"] = rec.error;
  j["attempts"] = attempts;
  return j;
}

randomizer::SceneRecord scene_record_from_json(const Json& j) {
  const std::string ctx = "scene_record";
  randomizer::SceneRecord rec;
  rec.index = unsigned_int(j, "index", ctx);
  rec.source_label = str(j, "source_label", ctx);
  rec.output_label = str(j, "output_label", ctx);
  rec.target_class = str(j, "target_class", ctx);
  rec.image_seed = unsigned_int(j, "image_seed", ctx);
  rec.requested_instances = static_cast<int>(integer(j, "requested_instances", ctx));
  rec.accepted_instances = static_cast<int>(integer(j, "accepted_instances", ctx));
  rec.exhausted_instances = static_cast<int>(integer(j, "exhausted_instances", ctx));
  rec.status = str(j, "status", ctx);
  if (j.contains("error")) rec.error = str(j, "error", ctx);
  std::size_t i = 0;
  for (const Json& a : array(field(j, "attempts", ctx), ctx + ".attempts")) {
    const std::string actx = ctx + ".attempts[" + std::to_string(i++) + "]";
    randomizer::PlacementAttempt p;
    p.instance = static_cast<int>(integer(a, "instance", actx));
    p.attempt = static_cast<int>(integer(a, "attempt", actx));
    p.class_id = class_id(field(a, "class_id", actx), actx + ".class_id");
    p.class_name = str(a, "class", actx);
    const Json& pose = field(a, "pose", actx);
    p.pose.anchor.lateral = num(pose, "lateral", actx + ".pose");
    p.pose.anchor.forward = num(pose, "forward", actx + ".pose");
    p.pose.yaw = num(pose, "yaw", actx + ".pose");
    p.params = params_from(field(a, "params", actx), actx + ".params");
    p.placed_pixels = unsigned_int(a, "placed_pixels", actx);
    p.footprint_pixels = unsigned_int(a, "footprint_pixels", actx);
    p.dropped_polygons = unsigned_int(a, "dropped_polygons", actx);
    p.accepted = boolean(a, "accepted", actx);
    p.reason = str(a, "reason", actx);
    rec.attempts.push_back(std::move(p));
  }
  return rec;
}

Json to_json(const balance::ClassStats& stats) {
  Json classes = Json::array();
  for (std::size_t i = 0; i < stats.classes.size(); ++i) {
    const auto& c = stats.classes[i];
    Json e{{"id", c.id},
           {"name", c.name},
           {"pixel_count", c.pixel_count},
           {"pixels_in_present_labels", c.pixels_in_present_labels},
           {"image_count", c.image_count}};
    e["frequency"] = stats.present(i) ? stats.frequency(i) : 0.0;
    e["occurrence"] = stats.total_images > 0 ? stats.occurrence(i) : 0.0;
    classes.push_back(std::move(e));
  }
  return Json{{"total_images", stats.total_images}, {"classes", classes}};
}

balance::ClassStats stats_from_json(const Json& j) {
  const std::string ctx = "stats";
  balance::ClassStats s;
  s.total_images = unsigned_int(j, "total_images", ctx);
  std::size_t i = 0;
  for (const Json& e : array(field(j, "classes", ctx), ctx + ".classes")) {
    const std::string cctx = ctx + ".classes[" + std::to_string(i++) + "]";
    balance::ClassCount c;
    c.id = class_id(field(e, "id", cctx), cctx + ".id");
    c.name = str(e, "name", cctx);
    c.pixel_count = unsigned_int(e, "pixel_count", cctx);
    c.pixels_in_present_labels = unsigned_int(e, "pixels_in_present_labels", cctx);
    c.image_count = unsigned_int(e, "image_count", cctx);
    if (c.image_count > s.total_images || c.pixel_count > c.pixels_in_present_labels ||
        (c.image_count == 0) != (c.pixels_in_present_labels == 0)) {
      fail(cctx, "inconsistent counts");
    }
    s.classes.push_back(std::move(c));
  }
  return s;
}

Json to_json(const balance::WeightVector& w) {
  Json classes = Json::array();
  for (const auto& c : w.classes) {
    Json flags = Json::array();
    for (const auto& f : c.flags) flags.push_back(f);
    classes.push_back(Json{{"id", c.id}, {"name", c.name}, {"weight", c.weight}, {"flags", flags}});
  }
  return Json{{"scheme", std::string(balance::to_string(w.scheme))}, {"classes", classes}};
}

balance::WeightVector weights_from_json(const Json& j) {
  const std::string ctx = "weights";
  balance::WeightVector w;
  try {
    w.scheme = balance::parse_scheme(str(j, "scheme", ctx));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParse) throw;
    fail(ctx + ".scheme", e.what());
  }
  std::size_t i = 0;
  for (const Json& e : array(field(j, "classes", ctx), ctx + ".classes")) {
    const std::string cctx = ctx + ".classes[" + std::to_string(i++) + "]";
    balance::ClassWeight c;
    c.id = class_id(field(e, "id", cctx), cctx + ".id");
    c.name = str(e, "name", cctx);
    c.weight = num(e, "weight", cctx);
    if (e.contains("flags")) {
      for (const Json& f : array(e["flags"], cctx + ".flags")) {
        if (!f.is_string()) fail(cctx + ".flags", "expected strings");
        c.flags.push_back(f.get<std::string>());
      }
    }
    w.classes.push_back(std::move(c));
  }
  return w;
}

Json to_json(const metrics::MetricsReport& r) {
  Json classes = Json::array();
  for (const auto& c : r.classes) {
    classes.push_back(Json{{"id", c.id},
                           {"name", c.name},
                           {"evaluable", c.evaluable},
                           {"images", c.image_count},
                           {"skipped_images", c.skipped_images},
                           {"precision", c.precision},
                           {"recall", c.recall},
                           {"f1", c.f1},
                           {"iou", c.iou},
                           {"tp", c.pooled.tp},
                           {"fp", c.pooled.fp},
                           {"fn", c.pooled.fn}});
  }
  return Json{{"averaging", std::string(metrics::to_string(r.averaging))},
              {"ignore_id", r.ignore_id},
              {"image_count", r.image_count},
              {"degenerate_policy", r.degenerate_policy},
              {"classes", classes},
              {"mean", {{"precision", r.mean.precision},
                        {"recall", r.mean.recall},
                        {"f1", r.mean.f1},
                        {"iou", r.mean.iou},
                        {"classes", r.mean.class_count}}},
              {"miou", r.miou}};
}

Json to_json(const markings::TemplateInfo& info) {
  Json params = Json::array();
  for (const auto& p : info.params) {
    params.push_back(Json{{"name", p.name},
                          {"unit", p.unit},
                          {"default", p.default_value},
                          {"min", p.min_value},
                          {"max", p.max_value},
                          {"integral", p.integral},
                          {"doc", p.doc}});
  }
  const auto& b = info.default_bounds;
  return Json{{"name", info.name},
              {"description", info.description},
              {"params", params},
              {"default_bounds", {b.min_x, b.min_y, b.max_x, b.max_y}}};
}

}  // namespace roadrand::serialization
