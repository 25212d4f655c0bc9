#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "latcomm/babai_subdivision.hpp"
#include "latcomm/partition.hpp"

namespace latcomm {

using json = nlohmann::json;

/// Shortest decimal that parses back to the same double ("0.5", "3.0").
inline std::string format_double(double x) { return json(x).dump(); }

inline json rect_to_json(const Rect& r) { return json::array({r.x_lo, r.x_hi, r.y_lo, r.y_hi}); }

inline Rect rect_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) throw std::invalid_argument("rect: expected [x_lo, x_hi, y_lo, y_hi]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

/// {"cells": [{"rect": [x_lo, x_hi, y_lo, y_hi], "label": "p"|"q"|"u", "prob": area}]}
inline json partition_to_json(const LabeledPartition& part) {
  json cells = json::array();
  for (const auto& c : part.cells) {
    cells.push_back({{"rect", rect_to_json(c.rect)}, {"label", to_string(c.label)}, {"prob", c.rect.area()}});
  }
  return {{"cells", cells}};
}

/// Parses and validates a partition; a stated "prob" must match the area.
inline LabeledPartition partition_from_json(const json& j) {
  if (!j.is_object() || !j.contains("cells") || !j["cells"].is_array()) {
    throw std::invalid_argument("partition: expected an object with a \"cells\" array");
  }
  LabeledPartition part;
  for (const auto& c : j["cells"]) {
    LabeledCell cell{rect_from_json(c.at("rect")), label_from_string(c.at("label").get<std::string>())};
    if (c.contains("prob") && std::abs(c["prob"].get<double>() - cell.rect.area()) > kPartitionTol) {
      throw std::invalid_argument("partition: cell prob does not match its area");
    }
    part.cells.push_back(cell);
  }
  validate(part);
  return part;
}

/// {"babai_cell": [...], "cells": [{"rect": [...], "error_free": bool, "prob": float}]}
inline json subdivision_to_json(const BabaiSubdivision& sub) {
  json cells = json::array();
  const double total = sub.babai_cell.area();
  for (const auto& c : sub.cells) {
    cells.push_back({{"rect", rect_to_json(c.rect)}, {"error_free", c.error_free}, {"prob", c.rect.area() / total}});
  }
  return {{"babai_cell", rect_to_json(sub.babai_cell)}, {"cells", cells}};
}

}  // namespace latcomm
