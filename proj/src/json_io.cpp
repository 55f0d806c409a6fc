#include "ttessel/json_io.hpp"

#include <json.hpp>

#include "ttessel/errors.hpp"

namespace ttessel {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ValidationError("malformed JSON document");
  return doc;
}

std::vector<Point> points_from(const json& arr, const char* what) {
  if (!arr.is_array()) throw ValidationError(std::string(what) + " must be an array of [x,y]");
  std::vector<Point> pts;
  for (const auto& v : arr) {
    if (!v.is_array() || v.size() != 2) {
      throw ValidationError(std::string(what) + " must contain [x,y] pairs");
    }
    pts.push_back(Point{v[0].get<double>(), v[1].get<double>()});
  }
  return pts;
}

}  // namespace

std::string tessellation_to_json(const TTessellation& t) {
  json doc;
  doc["domain"] = json::array();
  for (const Point& v : t.domain().vertices()) doc["domain"].push_back({v.x, v.y});
  doc["segments"] = json::array();
  for (SegId id : t.internal_segments()) {
    const SegmentRec& s = t.segment(id);
    const Point a = t.segment_endpoint(id, 0);
    const Point b = t.segment_endpoint(id, 1);
    doc["segments"].push_back({{"alpha", s.line.alpha},
                               {"p", s.line.p},
                               {"endpoints", {{a.x, a.y}, {b.x, b.y}}}});
  }
  return doc.dump();
}

TTessellation tessellation_from_json(const std::string& text) {
  json doc = parse(text);
  if (doc.contains("tessellation")) doc = doc["tessellation"];
  if (!doc.contains("domain") || !doc.contains("segments")) {
    throw ValidationError("tessellation document needs 'domain' and 'segments'");
  }
  const ConvexPolygon domain(points_from(doc["domain"], "domain"));
  std::vector<std::pair<Line, std::pair<Point, Point>>> segs;
  for (const auto& s : doc["segments"]) {
    if (!s.contains("alpha") || !s.contains("p") || !s.contains("endpoints")) {
      throw ValidationError("segment needs 'alpha', 'p' and 'endpoints'");
    }
    const auto ends = points_from(s["endpoints"], "endpoints");
    if (ends.size() != 2) throw ValidationError("segment needs exactly two endpoints");
    segs.push_back({Line::from_angle_offset(s["alpha"].get<double>(), s["p"].get<double>()),
                    {ends[0], ends[1]}});
  }
  return rebuild_tessellation(domain, segs);
}

ExponentialModel model_from_json(const std::string& text) {
  const json doc = parse(text);
  if (!doc.contains("model") || !doc.contains("theta")) {
    throw ValidationError("model config needs 'model' and 'theta'");
  }
  const std::string name = doc["model"].get<std::string>();
  const std::vector<double> theta = doc["theta"].get<std::vector<double>>();
  auto need = [&](std::size_t d) {
    if (theta.size() != d) {
      throw ValidationError("model '" + name + "' needs " + std::to_string(d) +
                            " theta component(s)");
    }
  };
  if (name == "crtt") {
    need(1);
    return ExponentialModel::crtt(theta[0]);
  }
  if (name == "area") {
    need(2);
    return ExponentialModel::area(theta[0], theta[1]);
  }
  if (name == "angle") {
    need(2);
    return ExponentialModel::angle(theta[0], theta[1]);
  }
  throw ValidationError("unknown model '" + name + "'");
}

std::string model_to_json(const ExponentialModel& model, const std::string& name) {
  json doc;
  doc["model"] = name;
  doc["theta"] = model.theta();
  return doc.dump();
}

PpModel pp_model_from_json(const std::string& text) {
  const json doc = parse(text);
  if (!doc.contains("model") || !doc.contains("theta")) {
    throw ValidationError("point-process config needs 'model' and 'theta'");
  }
  const std::string name = doc["model"].get<std::string>();
  const std::vector<double> theta = doc["theta"].get<std::vector<double>>();
  if (name == "poisson") {
    if (theta.size() != 1) throw ValidationError("poisson model needs one theta component");
    return PpModel::poisson(theta[0]);
  }
  if (name == "strauss") {
    if (theta.size() != 2) throw ValidationError("strauss model needs two theta components");
    if (!doc.contains("radius")) throw ValidationError("strauss model needs 'radius'");
    return PpModel::strauss(theta[0], theta[1], doc["radius"].get<double>());
  }
  throw ValidationError("unknown point-process model '" + name + "'");
}

ConvexPolygon window_from_json(const std::string& text) {
  const json doc = parse(text);
  if (doc.contains("vertices")) return ConvexPolygon(points_from(doc["vertices"], "vertices"));
  if (doc.contains("side")) {
    const double s = doc["side"].get<double>();
    return ConvexPolygon({{0.0, 0.0}, {s, 0.0}, {s, s}, {0.0, s}});
  }
  if (doc.contains("width") && doc.contains("height")) {
    const double w = doc["width"].get<double>();
    const double h = doc["height"].get<double>();
    return ConvexPolygon({{0.0, 0.0}, {w, 0.0}, {w, h}, {0.0, h}});
  }
  throw ValidationError("window descriptor needs 'vertices', 'side' or 'width'/'height'");
}

}  // namespace ttessel
