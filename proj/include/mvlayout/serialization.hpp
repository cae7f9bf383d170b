#pragma once

// JSON schemas for the on-disk artifacts. Field order is part of the
// contract, so everything goes through nlohmann::ordered_json.
//
//   HorizonDepth     {"width", "depths", "valid"} (+ optional "ratio" and
//                    pseudo-label fields "sigma", "support", "strategy",
//                    "iterations" when present)
//   BoundarySamples  {"width", "points", "valid", "frame"}
//   RoomScene        {"polygon", "roomHeight", "poses", "seed"}

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "mvlayout/consensus.hpp"
#include "mvlayout/geometry.hpp"
#include "mvlayout/simulator.hpp"

namespace mvlayout {

using Json = nlohmann::ordered_json;

Json depth_to_json(const HorizonDepth& d, std::optional<double> ratio = std::nullopt);
HorizonDepth depth_from_json(const Json& j);
std::optional<double> ratio_from_json(const Json& j);

Json pseudo_view_to_json(const PseudoLabelView& view, const ConsensusConfig& cfg,
                         std::optional<double> ratio = std::nullopt);

Json samples_to_json(const BoundarySamples& s);
BoundarySamples samples_from_json(const Json& j);

Json scene_to_json(const RoomScene& scene);
RoomScene scene_from_json(const Json& j);

// Write-temp-then-rename so concurrent room workers never expose partial files.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);
void write_json_atomic(const std::filesystem::path& path, const Json& j);
Json read_json(const std::filesystem::path& path);

}  // namespace mvlayout
