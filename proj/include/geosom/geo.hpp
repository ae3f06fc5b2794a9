#pragma once

#include <array>
#include <string>
#include <vector>

#include "geosom/validity.hpp"

namespace geosom {

// ---------------------------------------------------------------------------
// Outcome records and per-cluster aggregation
// ---------------------------------------------------------------------------

struct CaseRecord {
  std::string region_id;
  long long cases = 0;
  long long population = 0;
};

// CSV with header region_id,cases,population. Enforces population > 0 and
// 0 <= cases <= population.
std::vector<CaseRecord> load_cases(const std::string& path);

struct ClusterSummary {
  int cluster_id = 0;
  long long total_cases = 0;
  long long total_population = 0;
  double rate = 0.0;  // total_cases / total_population
};

// Sums cases and population over each cluster's regions. Every assigned
// region must have exactly one CaseRecord. Clusters that received no
// regions are omitted (they have no denominator).
std::vector<ClusterSummary> aggregate_cases(
    const ClusterAssignment& assignment, const std::vector<CaseRecord>& cases);

// ---------------------------------------------------------------------------
// Region geometries
// ---------------------------------------------------------------------------

using Ring = std::vector<std::array<double, 2>>;  // lon,lat; closed
using Polygon = std::vector<Ring>;                // outer ring + holes

struct RegionGeometry {
  std::string region_id;
  bool multi = false;          // emitted as MultiPolygon when true
  std::vector<Polygon> polygons;
};

// GeoJSON FeatureCollection of Polygon/MultiPolygon features; the region id
// is read from the given property.
std::vector<RegionGeometry> load_geometries(const std::string& path,
                                            const std::string& id_property);

// ---------------------------------------------------------------------------
// Choropleth emission
// ---------------------------------------------------------------------------

struct RenderResult {
  std::vector<std::string> missing_geometry;  // assigned but no polygon
  std::vector<std::string> unassigned;        // polygon but no assignment
};

// Writes a GeoJSON FeatureCollection (cluster_id, cases, population and
// rate as properties, cluster-level values) and a standalone SVG with one
// polygon group per cluster plus a legend. Output is a pure function of
// the inputs: same inputs, same bytes.
RenderResult render_choropleth(const ClusterAssignment& assignment,
                               const std::vector<RegionGeometry>& geometries,
                               const std::vector<ClusterSummary>& summaries,
                               const std::string& geojson_path,
                               const std::string& svg_path);

}  // namespace geosom
