#include "geosom/geo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "geosom/csv.hpp"
#include "geosom/errors.hpp"

namespace geosom {

std::vector<CaseRecord> load_cases(const std::string& path) {
  CsvTable csv = read_csv(path);
  const int id_idx = csv.column("region_id");
  const int cases_idx = csv.column("cases");
  const int pop_idx = csv.column("population");
  if (id_idx < 0 || cases_idx < 0 || pop_idx < 0) {
    throw DataError(path +
                    ": header must contain region_id, cases, population");
  }
  std::vector<CaseRecord> out;
  std::set<std::string> seen;
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const std::string context = path + " line " + std::to_string(r + 2);
    CaseRecord rec;
    rec.region_id = csv.rows[r][static_cast<std::size_t>(id_idx)];
    rec.cases = parse_int(csv.rows[r][static_cast<std::size_t>(cases_idx)],
                          context + ", cases");
    rec.population = parse_int(
        csv.rows[r][static_cast<std::size_t>(pop_idx)], context + ", population");
    if (rec.region_id.empty()) {
      throw DataError(context + ": empty region_id");
    }
    if (!seen.insert(rec.region_id).second) {
      throw DataError(path + ": duplicate case record for region '" +
                      rec.region_id + "'");
    }
    if (rec.population <= 0) {
      throw DataError(context + ": population must be positive for region '" +
                      rec.region_id + "'");
    }
    if (rec.cases < 0 || rec.cases > rec.population) {
      throw DataError(context + ": cases must lie in [0, population] for region '" +
                      rec.region_id + "'");
    }
    out.push_back(std::move(rec));
  }
  if (out.empty()) {
    throw DataError(path + ": no case records");
  }
  return out;
}

std::vector<ClusterSummary> aggregate_cases(
    const ClusterAssignment& assignment,
    const std::vector<CaseRecord>& cases) {
  std::map<std::string, const CaseRecord*> by_region;
  for (const auto& rec : cases) {
    if (!by_region.emplace(rec.region_id, &rec).second) {
      throw DataError("duplicate case record for region '" + rec.region_id +
                      "'");
    }
  }

  std::vector<std::string> missing;
  std::vector<ClusterSummary> sums(
      static_cast<std::size_t>(assignment.k_clusters));
  std::vector<bool> populated(static_cast<std::size_t>(assignment.k_clusters),
                              false);
  for (std::size_t i = 0; i < assignment.region_ids.size(); ++i) {
    const auto it = by_region.find(assignment.region_ids[i]);
    if (it == by_region.end()) {
      missing.push_back(assignment.region_ids[i]);
      continue;
    }
    const int c = assignment.cluster_label[i];
    sums[static_cast<std::size_t>(c)].total_cases += it->second->cases;
    sums[static_cast<std::size_t>(c)].total_population +=
        it->second->population;
    populated[static_cast<std::size_t>(c)] = true;
  }
  if (!missing.empty()) {
    std::string msg = "no case record for assigned region(s):";
    for (const auto& id : missing) msg += " " + id;
    throw DataError(msg);
  }

  std::vector<ClusterSummary> out;
  for (int c = 0; c < assignment.k_clusters; ++c) {
    if (!populated[static_cast<std::size_t>(c)]) continue;
    ClusterSummary s = sums[static_cast<std::size_t>(c)];
    s.cluster_id = c;
    s.rate = static_cast<double>(s.total_cases) /
             static_cast<double>(s.total_population);
    out.push_back(s);
  }
  return out;
}

namespace {

Ring parse_ring(const nlohmann::json& jring, const std::string& where) {
  Ring ring;
  for (const auto& pt : jring) {
    if (!pt.is_array() || pt.size() < 2) {
      throw DataError(where + ": malformed coordinate");
    }
    ring.push_back({pt[0].get<double>(), pt[1].get<double>()});
  }
  if (ring.size() < 4 || ring.front() != ring.back()) {
    throw DataError(where + ": ring is not closed");
  }
  return ring;
}

Polygon parse_polygon(const nlohmann::json& jpoly, const std::string& where) {
  Polygon poly;
  for (const auto& jring : jpoly) {
    poly.push_back(parse_ring(jring, where));
  }
  if (poly.empty()) {
    throw DataError(where + ": polygon without rings");
  }
  return poly;
}

}  // namespace

std::vector<RegionGeometry> load_geometries(const std::string& path,
                                            const std::string& id_property) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open " + path);
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": invalid GeoJSON: " + e.what());
  }
  if (j.value("type", "") != "FeatureCollection" || !j.contains("features")) {
    throw DataError(path + ": expected a GeoJSON FeatureCollection");
  }

  std::vector<RegionGeometry> out;
  std::set<std::string> seen;
  std::size_t index = 0;
  for (const auto& feature : j["features"]) {
    const std::string where = path + " feature " + std::to_string(index);
    ++index;
    if (!feature.contains("properties") ||
        !feature["properties"].contains(id_property)) {
      throw DataError(where + ": missing id property '" + id_property + "'");
    }
    RegionGeometry geom;
    geom.region_id = feature["properties"][id_property].get<std::string>();
    if (!seen.insert(geom.region_id).second) {
      throw DataError(path + ": duplicate region id '" + geom.region_id +
                      "'");
    }
    const auto& g = feature["geometry"];
    if (g.is_null()) {
      throw DataError(where + ": null geometry");
    }
    const std::string type = g.value("type", "");
    if (type == "Polygon") {
      geom.multi = false;
      geom.polygons.push_back(parse_polygon(g["coordinates"], where));
    } else if (type == "MultiPolygon") {
      geom.multi = true;
      for (const auto& jpoly : g["coordinates"]) {
        geom.polygons.push_back(parse_polygon(jpoly, where));
      }
    } else {
      throw DataError(where + ": unsupported geometry type '" + type + "'");
    }
    out.push_back(std::move(geom));
  }
  return out;
}

namespace {

nlohmann::ordered_json geometry_to_json(const RegionGeometry& geom) {
  nlohmann::ordered_json g;
  auto ring_json = [](const Ring& ring) {
    nlohmann::ordered_json jr = nlohmann::ordered_json::array();
    for (const auto& pt : ring) {
      jr.push_back(nlohmann::ordered_json::array({pt[0], pt[1]}));
    }
    return jr;
  };
  auto poly_json = [&](const Polygon& poly) {
    nlohmann::ordered_json jp = nlohmann::ordered_json::array();
    for (const auto& ring : poly) jp.push_back(ring_json(ring));
    return jp;
  };
  if (geom.multi) {
    g["type"] = "MultiPolygon";
    nlohmann::ordered_json coords = nlohmann::ordered_json::array();
    for (const auto& poly : geom.polygons) coords.push_back(poly_json(poly));
    g["coordinates"] = coords;
  } else {
    g["type"] = "Polygon";
    g["coordinates"] = poly_json(geom.polygons.front());
  }
  return g;
}

// Fixed categorical palette; cluster c wraps modulo the palette size.
const char* const kPalette[] = {"#e41a1c", "#377eb8", "#4daf4a",
                                "#984ea3", "#ff7f00", "#ffff33",
                                "#a65628", "#f781bf", "#999999"};
constexpr int kPaletteSize = 9;
const char* const kUnassignedFill = "#cccccc";

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

}  // namespace

RenderResult render_choropleth(const ClusterAssignment& assignment,
                               const std::vector<RegionGeometry>& geometries,
                               const std::vector<ClusterSummary>& summaries,
                               const std::string& geojson_path,
                               const std::string& svg_path) {
  std::map<std::string, const RegionGeometry*> geom_by_id;
  for (const auto& g : geometries) geom_by_id.emplace(g.region_id, &g);
  std::map<std::string, int> cluster_by_id;
  for (std::size_t i = 0; i < assignment.region_ids.size(); ++i) {
    cluster_by_id.emplace(assignment.region_ids[i],
                          assignment.cluster_label[i]);
  }
  std::map<int, const ClusterSummary*> summary_by_id;
  for (const auto& s : summaries) summary_by_id.emplace(s.cluster_id, &s);

  RenderResult result;

  // --- GeoJSON: every assigned region once, then unassigned geometries.
  nlohmann::ordered_json collection;
  collection["type"] = "FeatureCollection";
  nlohmann::ordered_json features = nlohmann::ordered_json::array();

  auto make_feature = [&](const std::string& id, const RegionGeometry* geom,
                          const int* cluster) {
    nlohmann::ordered_json f;
    f["type"] = "Feature";
    nlohmann::ordered_json props;
    props["region_id"] = id;
    if (cluster) {
      props["cluster_id"] = *cluster;
      const auto it = summary_by_id.find(*cluster);
      if (it != summary_by_id.end()) {
        props["cases"] = it->second->total_cases;
        props["population"] = it->second->total_population;
        props["rate"] = it->second->rate;
      } else {
        props["cases"] = nullptr;
        props["population"] = nullptr;
        props["rate"] = nullptr;
      }
    } else {
      props["cluster_id"] = nullptr;
      props["cases"] = nullptr;
      props["population"] = nullptr;
      props["rate"] = nullptr;
    }
    f["properties"] = props;
    f["geometry"] = geom ? geometry_to_json(*geom) : nlohmann::ordered_json();
    features.push_back(f);
  };

  for (std::size_t i = 0; i < assignment.region_ids.size(); ++i) {
    const std::string& id = assignment.region_ids[i];
    const auto git = geom_by_id.find(id);
    const RegionGeometry* geom =
        git == geom_by_id.end() ? nullptr : git->second;
    if (!geom) result.missing_geometry.push_back(id);
    make_feature(id, geom, &assignment.cluster_label[i]);
  }
  for (const auto& g : geometries) {
    if (cluster_by_id.count(g.region_id)) continue;
    result.unassigned.push_back(g.region_id);
    make_feature(g.region_id, &g, nullptr);
  }
  collection["features"] = features;

  {
    std::ofstream out(geojson_path, std::ios::binary);
    if (!out) throw DataError("cannot write " + geojson_path);
    out << collection.dump(2) << '\n';
  }

  // --- SVG: equirectangular projection of the joint bounding box.
  double lon_min = std::numeric_limits<double>::infinity();
  double lon_max = -std::numeric_limits<double>::infinity();
  double lat_min = std::numeric_limits<double>::infinity();
  double lat_max = -std::numeric_limits<double>::infinity();
  for (const auto& g : geometries) {
    for (const auto& poly : g.polygons) {
      for (const auto& ring : poly) {
        for (const auto& pt : ring) {
          lon_min = std::min(lon_min, pt[0]);
          lon_max = std::max(lon_max, pt[0]);
          lat_min = std::min(lat_min, pt[1]);
          lat_max = std::max(lat_max, pt[1]);
        }
      }
    }
  }
  if (!(lon_min <= lon_max)) {
    throw ValidationError("render_choropleth: no geometry to draw");
  }
  const double span_lon = std::max(lon_max - lon_min, 1e-9);
  const double span_lat = std::max(lat_max - lat_min, 1e-9);
  const double map_width = 760.0;
  const double scale = map_width / span_lon;
  const double map_height = span_lat * scale;
  const double margin = 20.0;
  const double legend_height =
      24.0 * (static_cast<double>(summaries.size()) +
              (result.unassigned.empty() ? 0.0 : 1.0)) +
      16.0;
  const double width = map_width + 2 * margin;
  const double height = map_height + 2 * margin + legend_height;

  auto px = [&](double lon) { return margin + (lon - lon_min) * scale; };
  auto py = [&](double lat) { return margin + (lat_max - lat) * scale; };

  auto path_of = [&](const RegionGeometry& g) {
    std::string d;
    for (const auto& poly : g.polygons) {
      for (const auto& ring : poly) {
        for (std::size_t p = 0; p + 1 < ring.size(); ++p) {
          d += (p == 0 ? "M" : "L");
          d += fmt2(px(ring[p][0]));
          d += ",";
          d += fmt2(py(ring[p][1]));
        }
        d += "Z";
      }
    }
    return d;
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt2(width)
      << "\" height=\"" << fmt2(height) << "\" viewBox=\"0 0 " << fmt2(width)
      << " " << fmt2(height) << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

  // One group per cluster, regions in assignment order.
  for (const auto& s : summaries) {
    svg << "<g id=\"cluster-" << s.cluster_id << "\" fill=\""
        << kPalette[s.cluster_id % kPaletteSize]
        << "\" stroke=\"#333333\" stroke-width=\"0.5\">\n";
    for (std::size_t i = 0; i < assignment.region_ids.size(); ++i) {
      if (assignment.cluster_label[i] != s.cluster_id) continue;
      const auto git = geom_by_id.find(assignment.region_ids[i]);
      if (git == geom_by_id.end()) continue;
      svg << "<path d=\"" << path_of(*git->second) << "\"/>\n";
    }
    svg << "</g>\n";
  }
  if (!result.unassigned.empty()) {
    svg << "<g id=\"unassigned\" fill=\"" << kUnassignedFill
        << "\" stroke=\"#333333\" stroke-width=\"0.5\">\n";
    for (const auto& id : result.unassigned) {
      svg << "<path d=\"" << path_of(*geom_by_id.at(id)) << "\"/>\n";
    }
    svg << "</g>\n";
  }

  // Legend below the map.
  double ly = map_height + 2 * margin;
  svg << "<g id=\"legend\" font-family=\"sans-serif\" font-size=\"14\">\n";
  for (const auto& s : summaries) {
    svg << "<rect x=\"" << fmt2(margin) << "\" y=\"" << fmt2(ly)
        << "\" width=\"16\" height=\"16\" fill=\""
        << kPalette[s.cluster_id % kPaletteSize] << "\"/>\n";
    svg << "<text x=\"" << fmt2(margin + 24.0) << "\" y=\"" << fmt2(ly + 13.0)
        << "\">Cluster " << s.cluster_id << " &#8212; rate " << fmt4(s.rate)
        << "</text>\n";
    ly += 24.0;
  }
  if (!result.unassigned.empty()) {
    svg << "<rect x=\"" << fmt2(margin) << "\" y=\"" << fmt2(ly)
        << "\" width=\"16\" height=\"16\" fill=\"" << kUnassignedFill
        << "\"/>\n";
    svg << "<text x=\"" << fmt2(margin + 24.0) << "\" y=\"" << fmt2(ly + 13.0)
        << "\">unassigned</text>\n";
  }
  svg << "</g>\n</svg>\n";

  {
    std::ofstream out(svg_path, std::ios::binary);
    if (!out) throw DataError("cannot write " + svg_path);
    out << svg.str();
  }
  return result;
}

}  // namespace geosom
