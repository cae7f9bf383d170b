#include "mvlayout/serialization.hpp"

#include <fstream>
#include <stdexcept>

namespace mvlayout {

namespace {

std::vector<bool> valid_to_bools(const std::vector<std::uint8_t>& valid) {
  std::vector<bool> out(valid.size());
  for (std::size_t i = 0; i < valid.size(); ++i) out[i] = valid[i] != 0;
  return out;
}

std::vector<std::uint8_t> bools_to_valid(const Json& j) {
  std::vector<std::uint8_t> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(v.get<bool>() ? 1 : 0);
  return out;
}

}  // namespace

Json depth_to_json(const HorizonDepth& d, std::optional<double> ratio) {
  Json j;
  j["width"] = d.width();
  j["depths"] = d.depths;
  j["valid"] = valid_to_bools(d.valid);
  if (ratio) j["ratio"] = *ratio;
  return j;
}

HorizonDepth depth_from_json(const Json& j) {
  HorizonDepth d;
  d.depths = j.at("depths").get<std::vector<double>>();
  d.valid = bools_to_valid(j.at("valid"));
  if (j.at("width").get<int>() != d.width() || d.valid.size() != d.depths.size()) {
    throw std::invalid_argument("depth_from_json: inconsistent widths");
  }
  return d;
}

std::optional<double> ratio_from_json(const Json& j) {
  if (!j.contains("ratio")) return std::nullopt;
  return j.at("ratio").get<double>();
}

Json pseudo_view_to_json(const PseudoLabelView& view, const ConsensusConfig& cfg,
                         std::optional<double> ratio) {
  Json j = depth_to_json(view.depth, ratio);
  j["sigma"] = view.sigma;
  j["support"] = view.support;
  j["strategy"] = cfg.aggregation.strategy == ColumnAggregation::Strategy::Median
                      ? "median"
                      : "mean_after_mad";
  j["iterations"] = cfg.iterations;
  return j;
}

Json samples_to_json(const BoundarySamples& s) {
  Json j;
  j["width"] = s.width();
  Json points = Json::array();
  for (const Vec2& p : s.points) points.push_back(Json::array({p.x, p.z}));
  j["points"] = std::move(points);
  j["valid"] = valid_to_bools(s.valid);
  j["frame"] = s.frame == Frame::View ? "view" : "world";
  return j;
}

BoundarySamples samples_from_json(const Json& j) {
  BoundarySamples s;
  for (const auto& p : j.at("points")) {
    s.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  }
  s.valid = bools_to_valid(j.at("valid"));
  const std::string frame = j.at("frame").get<std::string>();
  if (frame == "view") {
    s.frame = Frame::View;
  } else if (frame == "world") {
    s.frame = Frame::World;
  } else {
    throw std::invalid_argument("samples_from_json: unknown frame '" + frame + "'");
  }
  if (j.at("width").get<int>() != s.width() || s.valid.size() != s.points.size()) {
    throw std::invalid_argument("samples_from_json: inconsistent widths");
  }
  return s;
}

Json scene_to_json(const RoomScene& scene) {
  Json j;
  Json polygon = Json::array();
  for (const Vec2& v : scene.polygon.vertices) polygon.push_back(Json::array({v.x, v.z}));
  j["polygon"] = std::move(polygon);
  j["roomHeight"] = scene.room_height;
  Json poses = Json::array();
  for (const CameraPose& p : scene.poses) {
    Json pose;
    pose["yaw"] = p.yaw;
    pose["t"] = Json::array({p.tx, p.tz});
    pose["h"] = p.height;
    poses.push_back(std::move(pose));
  }
  j["poses"] = std::move(poses);
  j["seed"] = scene.seed;
  return j;
}

RoomScene scene_from_json(const Json& j) {
  RoomScene scene;
  for (const auto& v : j.at("polygon")) {
    scene.polygon.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
  }
  scene.room_height = j.at("roomHeight").get<double>();
  for (const auto& p : j.at("poses")) {
    CameraPose pose;
    pose.yaw = p.at("yaw").get<double>();
    pose.tx = p.at("t").at(0).get<double>();
    pose.tz = p.at("t").at(1).get<double>();
    pose.height = p.at("h").get<double>();
    scene.poses.push_back(pose);
  }
  scene.seed = j.at("seed").get<std::uint64_t>();
  return scene;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    os << text;
    if (!os) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_json_atomic(const std::filesystem::path& path, const Json& j) {
  write_text_atomic(path, j.dump(2) + "\n");
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  Json j;
  is >> j;
  return j;
}

}  // namespace mvlayout
