#include "pcrof/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <utility>
#include <vector>

namespace pcrof {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

double require_number(const json& j, const std::string& where) {
  if (!j.is_number())
    throw ParseError(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(where + ": value is not finite");
  return v;
}

HyperRect parse_box(const json& j, int dimension, const std::string& where) {
  if (!j.is_array() || j.size() != static_cast<size_t>(dimension))
    throw ParseError(where + ": expected " + std::to_string(dimension) +
                     " [lo,hi] pairs");
  std::vector<Interval> sides;
  for (int ax = 0; ax < dimension; ++ax) {
    const json& pair = j[static_cast<size_t>(ax)];
    if (!pair.is_array() || pair.size() != 2)
      throw ParseError(where + ": axis " + std::to_string(ax) +
                       " is not a [lo,hi] pair");
    const double lo = require_number(pair[0], where);
    const double hi = require_number(pair[1], where);
    if (hi < lo)
      throw ParseError(where + ": hi < lo on axis " + std::to_string(ax));
    if (hi == lo)
      throw ParseError(where + ": zero-thickness interval on axis " +
                       std::to_string(ax));
    sides.push_back({lo, hi});
  }
  return HyperRect(std::move(sides));
}

std::vector<HyperRect> parse_box_list(const json& j, int dimension,
                                      const std::string& where) {
  if (!j.is_array() || j.empty())
    throw ParseError(where + ": expected a non-empty array of boxes");
  std::vector<HyperRect> boxes;
  for (size_t i = 0; i < j.size(); ++i)
    boxes.push_back(parse_box(j[i], dimension,
                              where + " box " + std::to_string(i)));
  return boxes;
}

std::vector<std::pair<RectPolytope, double>> parse_dense(
    const json& dense, int dimension, const RectPolytope& domain) {
  if (dimension > 3)
    throw ParseError("dense: only supported for dimension <= 3");
  if (!dense.is_object() || !dense.contains("coords") ||
      !dense.contains("values"))
    throw ParseError("dense: expected an object with coords and values");
  const json& coords = dense["coords"];
  if (!coords.is_array() || coords.size() != static_cast<size_t>(dimension))
    throw ParseError("dense.coords: expected one coordinate list per axis");
  std::vector<std::vector<double>> axes;
  size_t cell_total = 1;
  for (int ax = 0; ax < dimension; ++ax) {
    const json& axis = coords[static_cast<size_t>(ax)];
    if (!axis.is_array() || axis.size() < 2)
      throw ParseError("dense.coords axis " + std::to_string(ax) +
                       ": need at least two coordinates");
    std::vector<double> planes;
    for (size_t k = 0; k < axis.size(); ++k) {
      planes.push_back(require_number(
          axis[k], "dense.coords axis " + std::to_string(ax)));
      if (k > 0 && planes[k] <= planes[k - 1])
        throw ParseError("dense.coords axis " + std::to_string(ax) +
                         ": coordinates must be strictly increasing");
    }
    cell_total *= planes.size() - 1;
    axes.push_back(std::move(planes));
  }
  const json& values = dense["values"];
  if (!values.is_array() || values.size() != cell_total)
    throw ParseError("dense.values: expected " + std::to_string(cell_total) +
                     " entries (null outside the domain)");

  // Flattened lexicographically, axis 0 most significant.
  std::vector<std::pair<RectPolytope, double>> pieces;
  std::vector<size_t> idx(static_cast<size_t>(dimension), 0);
  for (size_t flat = 0; flat < cell_total; ++flat) {
    size_t rem = flat;
    for (int ax = dimension - 1; ax >= 0; --ax) {
      const size_t n = axes[static_cast<size_t>(ax)].size() - 1;
      idx[static_cast<size_t>(ax)] = rem % n;
      rem /= n;
    }
    std::vector<Interval> sides;
    std::vector<double> mid;
    for (int ax = 0; ax < dimension; ++ax) {
      const auto& planes = axes[static_cast<size_t>(ax)];
      const size_t k = idx[static_cast<size_t>(ax)];
      sides.push_back({planes[k], planes[k + 1]});
      mid.push_back(0.5 * (planes[k] + planes[k + 1]));
    }
    const bool inside = domain.contains_interior(mid);
    const json& v = values[flat];
    if (v.is_null()) {
      if (inside)
        throw ParseError("dense.values[" + std::to_string(flat) +
                         "]: null for a cell inside the domain");
      continue;
    }
    if (!inside)
      throw ParseError("dense.values[" + std::to_string(flat) +
                       "]: value given for a cell outside the domain");
    pieces.push_back(
        {RectPolytope::from_boxes({HyperRect(std::move(sides))}),
         require_number(v, "dense.values[" + std::to_string(flat) + "]")});
  }
  return pieces;
}

ordered_json box_to_json(const HyperRect& box) {
  ordered_json sides = ordered_json::array();
  for (const Interval& s : box.sides())
    sides.push_back(ordered_json::array({s.lo, s.hi}));
  return sides;
}

ordered_json box_list_to_json(const RectPolytope& p) {
  ordered_json boxes = ordered_json::array();
  for (const HyperRect& box : p.pieces()) boxes.push_back(box_to_json(box));
  return boxes;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

InstanceDocument parse_instance(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("instance: expected a JSON object");
  if (!doc.contains("version") || !doc["version"].is_number_integer() ||
      doc["version"].get<int>() != 1)
    throw ParseError("version: expected the integer 1");
  if (!doc.contains("dimension") || !doc["dimension"].is_number_integer())
    throw ParseError("dimension: expected an integer");
  const int dimension = doc["dimension"].get<int>();
  if (dimension < 1) throw ParseError("dimension: must be >= 1");
  if (!doc.contains("domain"))
    throw ParseError("domain: missing");
  if (!doc.contains("alpha"))
    throw ParseError("alpha: missing");
  const double alpha = require_number(doc["alpha"], "alpha");
  if (!(alpha > 0.0)) throw ParseError("alpha: must be > 0");
  const bool has_pieces = doc.contains("pieces");
  const bool has_dense = doc.contains("dense");
  if (has_pieces == has_dense)
    throw ParseError("instance: exactly one of pieces / dense must be present");

  RectPolytope domain;
  try {
    domain = RectPolytope::from_boxes(
        parse_box_list(doc["domain"], dimension, "domain"));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("domain: ") + e.what());
  }

  std::vector<std::pair<RectPolytope, double>> pieces;
  if (has_pieces) {
    const json& plist = doc["pieces"];
    if (!plist.is_array())
      throw ParseError("pieces: expected an array");
    for (size_t i = 0; i < plist.size(); ++i) {
      const json& p = plist[i];
      const std::string where = "pieces[" + std::to_string(i) + "]";
      if (!p.is_object() || !p.contains("boxes") || !p.contains("value"))
        throw ParseError(where + ": expected an object with boxes and value");
      try {
        pieces.push_back(
            {RectPolytope::from_boxes(
                 parse_box_list(p["boxes"], dimension, where)),
             require_number(p["value"], where + ".value")});
      } catch (const std::invalid_argument& e) {
        throw ParseError(where + ": " + e.what());
      }
    }
  } else {
    pieces = parse_dense(doc["dense"], dimension, domain);
  }

  InstanceDocument out;
  out.dimension = dimension;
  out.alpha = alpha;
  try {
    out.f = PcrPieces::make(domain, pieces);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("pieces: ") + e.what());
  }
  return out;
}

std::string serialize_instance(const InstanceDocument& doc) {
  ordered_json j;
  j["version"] = 1;
  j["dimension"] = doc.dimension;
  j["domain"] = box_list_to_json(doc.f.domain());
  ordered_json pieces = ordered_json::array();
  for (const auto& [polytope, value] : doc.f.level_sets()) {
    ordered_json p;
    p["boxes"] = box_list_to_json(polytope);
    p["value"] = value;
    pieces.push_back(std::move(p));
  }
  j["pieces"] = std::move(pieces);
  j["alpha"] = doc.alpha;
  return j.dump(2) + "\n";
}

std::string instance_digest(const InstanceDocument& doc) {
  const std::uint64_t h = fnv1a64(serialize_instance(doc));
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

nlohmann::ordered_json function_to_json(const PcrFunction& u) {
  ordered_json j;
  ordered_json cells = ordered_json::array();
  for (const HyperRect& cell : u.partition.cells())
    cells.push_back(box_to_json(cell));
  j["cells"] = std::move(cells);
  j["values"] = u.values;
  return j;
}

nlohmann::ordered_json make_report(const std::string& command,
                                   const std::string& digest) {
  ordered_json j;
  j["version"] = 1;
  j["command"] = command;
  j["instance_digest"] = digest;
  return j;
}

}  // namespace pcrof
