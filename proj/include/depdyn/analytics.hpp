#ifndef DEPDYN_ANALYTICS_HPP
#define DEPDYN_ANALYTICS_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "depdyn/corpus.hpp"
#include "depdyn/timeutil.hpp"

namespace depdyn::analytics {

inline constexpr const char* kAllRegions = "ALL";

struct DayEntry {
    Date date;
    std::uint64_t depressed = 0;
    std::uint64_t total = 0;
    // depressed/total; empty on days with no classified tweets (never 0).
    std::optional<double> level;
};

struct DailySeries {
    std::string region_id;
    std::vector<DayEntry> days;  // strictly increasing, one per day of the span
};

struct RegionSummary {
    std::string region_id;
    std::string month;  // YYYY-MM
    std::uint64_t depressed = 0;
    std::uint64_t total = 0;
    std::optional<double> level;
};

struct EventAnnotation {
    Date date;
    std::string label;
};

struct OverlaySeries {
    std::string name;
    std::vector<std::pair<Date, double>> points;
};

// (record id, predicted label) pairs joined against records; every
// prediction must resolve to a record.  Series cover the global day span of
// the predicted records for every region plus the "ALL" aggregate, so
// per-day region sums reconcile with "ALL" exactly.
std::vector<DailySeries> daily_series(
    const std::vector<corpus::TweetRecord>& records,
    const std::vector<std::pair<std::string, int>>& predictions);

// Count-weighted monthly ratio (sum depressed / sum total), not the mean of
// daily ratios; zero-tweet months give a null level.
std::vector<RegionSummary> monthly_region_summary(std::span<const DailySeries> series,
                                                  int year, int month);

struct SvgStyle {
    int width = 960;
    int height = 400;
    std::string title;
    std::string left_axis_label = "depression level";
    std::string right_axis_label;
};

// SVG 1.1 line chart: one polyline per series on the left axis (null days
// split the polyline into separate segments), optional overlay bars on a
// right axis, and dashed vertical event markers.
std::string render_series_svg(std::span<const DailySeries> series,
                              std::span<const EventAnnotation> events,
                              std::span<const OverlaySeries> overlays, const SvgStyle& style);

struct ChoroplethResult {
    std::string geojson;
    std::vector<std::string> unmatched_regions;       // in map, not in summaries
    std::vector<std::string> summaries_without_polygons;
};

// Adds "depression_level" and "month" to each feature's properties, matching
// features to summaries through the region-key property.  Geometry (and
// every other byte outside the properties objects) is preserved verbatim.
ChoroplethResult emit_choropleth(std::span<const RegionSummary> summaries,
                                 const std::string& base_geojson, const std::string& month,
                                 const std::string& region_key_property = "region_id");

// region_id,date,depressed,total,level (level empty when null).
void write_series_csv(std::span<const DailySeries> series, std::ostream& out);
std::vector<DailySeries> read_series_csv(std::istream& in);

// date,label
std::vector<EventAnnotation> read_events_csv(std::istream& in);
// date,value
OverlaySeries read_overlay_csv(std::istream& in, const std::string& name);

}  // namespace depdyn::analytics

#endif
