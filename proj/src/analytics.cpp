#include "depdyn/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "depdyn/errors.hpp"

namespace depdyn::analytics {

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    // The formats here carry no quoting; labels must not contain commas.
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

// ------------------------------------------------------------------ SVG

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

const char* series_color(std::size_t i) {
    static const char* palette[] = {"#1f6fb4", "#d6452c", "#2e8b57", "#8b5cb4",
                                    "#b8860b", "#d4679f", "#3aa6a6", "#777777"};
    return palette[i % (sizeof(palette) / sizeof(palette[0]))];
}

std::string format_coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

// ------------------------------------------------- GeoJSON span scanning

// Returns the index one past the end of the JSON value starting at `pos`.
// The text is known to be valid JSON (checked with a real parser first).
std::size_t skip_ws(const std::string& text, std::size_t pos) {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n' ||
                                 text[pos] == '\r')) {
        ++pos;
    }
    return pos;
}

std::size_t value_end(const std::string& text, std::size_t pos) {
    pos = skip_ws(text, pos);
    const char c = text[pos];
    if (c == '"') {
        ++pos;
        while (pos < text.size()) {
            if (text[pos] == '\\') pos += 2;
            else if (text[pos] == '"') return pos + 1;
            else ++pos;
        }
        throw FormatError("unterminated string while scanning GeoJSON");
    }
    if (c == '{' || c == '[') {
        const char open = c;
        const char close = (open == '{') ? '}' : ']';
        int depth = 0;
        bool in_string = false;
        while (pos < text.size()) {
            const char cur = text[pos];
            if (in_string) {
                if (cur == '\\') ++pos;
                else if (cur == '"') in_string = false;
            } else if (cur == '"') {
                in_string = true;
            } else if (cur == open) {
                ++depth;
            } else if (cur == close) {
                --depth;
                if (depth == 0) return pos + 1;
            }
            ++pos;
        }
        throw FormatError("unterminated container while scanning GeoJSON");
    }
    // literal or number
    while (pos < text.size() && text[pos] != ',' && text[pos] != '}' && text[pos] != ']' &&
           text[pos] != ' ' && text[pos] != '\t' && text[pos] != '\n' && text[pos] != '\r') {
        ++pos;
    }
    return pos;
}

struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;  // exclusive
};

// Value spans of an object's keys, first occurrence wins.
std::map<std::string, Span> object_value_spans(const std::string& text, std::size_t obj_begin) {
    std::map<std::string, Span> spans;
    std::size_t pos = skip_ws(text, obj_begin);
    if (text[pos] != '{') throw FormatError("expected object while scanning GeoJSON");
    ++pos;
    for (;;) {
        pos = skip_ws(text, pos);
        if (text[pos] == '}') break;
        if (text[pos] == ',') {
            ++pos;
            continue;
        }
        const std::size_t key_begin = pos;
        const std::size_t key_end = value_end(text, key_begin);
        const std::string key = nlohmann::json::parse(
            text.substr(key_begin, key_end - key_begin)).get<std::string>();
        pos = skip_ws(text, key_end);
        if (text[pos] != ':') throw FormatError("expected ':' while scanning GeoJSON");
        ++pos;
        pos = skip_ws(text, pos);
        const std::size_t vbegin = pos;
        const std::size_t vend = value_end(text, vbegin);
        if (!spans.count(key)) spans[key] = {vbegin, vend};
        pos = vend;
    }
    return spans;
}

// Element spans of an array value.
std::vector<Span> array_element_spans(const std::string& text, std::size_t arr_begin) {
    std::vector<Span> spans;
    std::size_t pos = skip_ws(text, arr_begin);
    if (text[pos] != '[') throw FormatError("expected array while scanning GeoJSON");
    ++pos;
    for (;;) {
        pos = skip_ws(text, pos);
        if (text[pos] == ']') break;
        if (text[pos] == ',') {
            ++pos;
            continue;
        }
        const std::size_t begin = pos;
        const std::size_t end = value_end(text, begin);
        spans.push_back({begin, end});
        pos = end;
    }
    return spans;
}

}  // namespace

std::vector<DailySeries> daily_series(
    const std::vector<corpus::TweetRecord>& records,
    const std::vector<std::pair<std::string, int>>& predictions) {
    std::map<std::string, const corpus::TweetRecord*> by_id;
    for (const auto& r : records) by_id.emplace(r.id, &r);

    struct Bucket {
        std::uint64_t depressed = 0;
        std::uint64_t total = 0;
    };
    std::map<std::string, std::map<std::int64_t, Bucket>> per_region;
    std::int64_t min_day = 0, max_day = 0;
    bool any = false;

    for (const auto& [id, label] : predictions) {
        const auto it = by_id.find(id);
        if (it == by_id.end()) {
            throw FormatError("prediction for unknown record id: " + id);
        }
        if (label != 0 && label != 1) throw FormatError("predicted label must be 0 or 1");
        const corpus::TweetRecord& rec = *it->second;
        const std::int64_t day = rec.created_at.date().day_number();
        if (!any || day < min_day) min_day = day;
        if (!any || day > max_day) max_day = day;
        any = true;
        for (const std::string& key : {rec.region_id, std::string(kAllRegions)}) {
            Bucket& b = per_region[key][day];
            b.total += 1;
            b.depressed += static_cast<std::uint64_t>(label);
        }
    }

    std::vector<DailySeries> out;
    if (!any) return out;
    // "ALL" first, then regions in key order.
    std::vector<std::string> regions;
    regions.push_back(kAllRegions);
    for (const auto& [key, _] : per_region) {
        if (key != kAllRegions) regions.push_back(key);
    }
    for (const auto& region : regions) {
        DailySeries series;
        series.region_id = region;
        const auto& buckets = per_region[region];
        for (std::int64_t day = min_day; day <= max_day; ++day) {
            DayEntry e;
            e.date = Date::from_day_number(day);
            const auto bit = buckets.find(day);
            if (bit != buckets.end()) {
                e.depressed = bit->second.depressed;
                e.total = bit->second.total;
            }
            if (e.total > 0) {
                e.level = static_cast<double>(e.depressed) / static_cast<double>(e.total);
            }
            series.days.push_back(e);
        }
        out.push_back(std::move(series));
    }
    return out;
}

std::vector<RegionSummary> monthly_region_summary(std::span<const DailySeries> series,
                                                  int year, int month) {
    std::vector<RegionSummary> out;
    char key[10];
    std::snprintf(key, sizeof key, "%04d-%02d", year, month);
    for (const auto& s : series) {
        RegionSummary summary;
        summary.region_id = s.region_id;
        summary.month = key;
        for (const auto& day : s.days) {
            if (day.date.year != year || day.date.month != month) continue;
            summary.depressed += day.depressed;
            summary.total += day.total;
        }
        if (summary.total > 0) {
            summary.level =
                static_cast<double>(summary.depressed) / static_cast<double>(summary.total);
        }
        out.push_back(std::move(summary));
    }
    return out;
}

std::string render_series_svg(std::span<const DailySeries> series,
                              std::span<const EventAnnotation> events,
                              std::span<const OverlaySeries> overlays, const SvgStyle& style) {
    std::int64_t min_day = 0, max_day = 0;
    double max_level = 0.0;
    bool any_point = false;
    for (const auto& s : series) {
        for (const auto& d : s.days) {
            if (!d.level) continue;
            const std::int64_t day = d.date.day_number();
            if (!any_point || day < min_day) min_day = day;
            if (!any_point || day > max_day) max_day = day;
            max_level = std::max(max_level, *d.level);
            any_point = true;
        }
    }
    if (!any_point) throw FormatError("no drawable points: every day level is null");
    double max_overlay = 0.0;
    for (const auto& o : overlays) {
        for (const auto& [date, v] : o.points) {
            if (!std::isfinite(v)) throw FormatError("non-finite overlay value");
            const std::int64_t day = date.day_number();
            if (day < min_day) min_day = day;
            if (day > max_day) max_day = day;
            max_overlay = std::max(max_overlay, v);
        }
    }
    if (max_level <= 0.0) max_level = 1.0;
    max_level *= 1.05;

    const double margin_left = 60, margin_right = overlays.empty() ? 20 : 60;
    const double margin_top = style.title.empty() ? 20 : 40, margin_bottom = 50;
    const double plot_w = style.width - margin_left - margin_right;
    const double plot_h = style.height - margin_top - margin_bottom;
    const double day_span = std::max<double>(1.0, static_cast<double>(max_day - min_day));

    auto x_of = [&](std::int64_t day) {
        return margin_left + plot_w * static_cast<double>(day - min_day) / day_span;
    };
    auto y_of = [&](double level) { return margin_top + plot_h * (1.0 - level / max_level); };
    auto y_overlay = [&](double v) {
        return margin_top + plot_h * (1.0 - (max_overlay > 0 ? v / (1.05 * max_overlay) : 0.0));
    };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << style.width
        << "\" height=\"" << style.height << "\" viewBox=\"0 0 " << style.width << ' '
        << style.height << "\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << style.width << "\" height=\"" << style.height
        << "\" fill=\"white\"/>\n";
    if (!style.title.empty()) {
        svg << "<text x=\"" << style.width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
            << "font-family=\"sans-serif\" font-size=\"16\">" << xml_escape(style.title)
            << "</text>\n";
    }

    // overlay bars first so polylines draw on top
    if (!overlays.empty() && max_overlay > 0.0) {
        const double bar_w = std::max(1.0, plot_w / (day_span + 1.0) * 0.8);
        for (const auto& o : overlays) {
            for (const auto& [date, v] : o.points) {
                const double x = x_of(date.day_number()) - bar_w / 2.0;
                const double y = y_overlay(v);
                svg << "<rect class=\"overlay\" x=\"" << format_coord(x) << "\" y=\""
                    << format_coord(y) << "\" width=\"" << format_coord(bar_w) << "\" height=\""
                    << format_coord(margin_top + plot_h - y)
                    << "\" fill=\"#c9c9c9\" fill-opacity=\"0.7\"/>\n";
            }
        }
    }

    // axes
    svg << "<line x1=\"" << format_coord(margin_left) << "\" y1=\"" << format_coord(margin_top)
        << "\" x2=\"" << format_coord(margin_left) << "\" y2=\""
        << format_coord(margin_top + plot_h) << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << format_coord(margin_left) << "\" y1=\""
        << format_coord(margin_top + plot_h) << "\" x2=\"" << format_coord(margin_left + plot_w)
        << "\" y2=\"" << format_coord(margin_top + plot_h) << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 5; ++t) {
        const double level = max_level * t / 5.0;
        const double y = y_of(level);
        char label[24];
        std::snprintf(label, sizeof label, "%.3f", level);
        svg << "<text x=\"" << format_coord(margin_left - 6) << "\" y=\"" << format_coord(y + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << label
            << "</text>\n";
    }
    const int date_ticks = 6;
    for (int t = 0; t <= date_ticks; ++t) {
        const std::int64_t day =
            min_day + static_cast<std::int64_t>(std::llround(day_span * t / date_ticks));
        svg << "<text x=\"" << format_coord(x_of(day)) << "\" y=\""
            << format_coord(margin_top + plot_h + 16)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
            << Date::from_day_number(day).to_string() << "</text>\n";
    }
    svg << "<text x=\"14\" y=\"" << format_coord(margin_top + plot_h / 2)
        << "\" transform=\"rotate(-90 14 " << format_coord(margin_top + plot_h / 2)
        << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << xml_escape(style.left_axis_label) << "</text>\n";
    if (!overlays.empty() && !style.right_axis_label.empty()) {
        const double x = margin_left + plot_w + 40;
        svg << "<text x=\"" << format_coord(x) << "\" y=\""
            << format_coord(margin_top + plot_h / 2) << "\" transform=\"rotate(90 "
            << format_coord(x) << ' ' << format_coord(margin_top + plot_h / 2)
            << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << xml_escape(style.right_axis_label) << "</text>\n";
    }

    // event markers
    for (const auto& event : events) {
        const std::int64_t day = event.date.day_number();
        if (day < min_day || day > max_day) continue;  // dropped; caller may warn
        const double x = x_of(day);
        svg << "<line class=\"event\" x1=\"" << format_coord(x) << "\" y1=\""
            << format_coord(margin_top) << "\" x2=\"" << format_coord(x) << "\" y2=\""
            << format_coord(margin_top + plot_h)
            << "\" stroke=\"#444444\" stroke-dasharray=\"4 3\"/>\n";
        svg << "<text class=\"event-label\" x=\"" << format_coord(x + 3) << "\" y=\""
            << format_coord(margin_top + 12)
            << "\" font-family=\"sans-serif\" font-size=\"10\">" << xml_escape(event.label)
            << "</text>\n";
    }

    // series polylines, split at null-level days
    std::size_t color = 0;
    for (const auto& s : series) {
        std::vector<std::string> segment;
        auto flush = [&]() {
            if (segment.size() >= 2) {
                svg << "<polyline class=\"series\" fill=\"none\" stroke=\"" << series_color(color)
                    << "\" stroke-width=\"1.5\" points=\"";
                for (std::size_t i = 0; i < segment.size(); ++i) {
                    if (i) svg << ' ';
                    svg << segment[i];
                }
                svg << "\"/>\n";
            } else if (segment.size() == 1) {
                // isolated point: draw a dot so single-day data stays visible
                const auto comma = segment[0].find(',');
                svg << "<circle class=\"series-point\" cx=\"" << segment[0].substr(0, comma)
                    << "\" cy=\"" << segment[0].substr(comma + 1) << "\" r=\"2\" fill=\""
                    << series_color(color) << "\"/>\n";
            }
            segment.clear();
        };
        for (const auto& d : s.days) {
            if (!d.level) {
                flush();
                continue;
            }
            segment.push_back(format_coord(x_of(d.date.day_number())) + "," +
                              format_coord(y_of(*d.level)));
        }
        flush();
        // legend entry
        const double ly = margin_top + 14 * static_cast<double>(color);
        svg << "<text x=\"" << format_coord(margin_left + plot_w - 4) << "\" y=\""
            << format_coord(ly) << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
            << "font-size=\"10\" fill=\"" << series_color(color) << "\">"
            << xml_escape(s.region_id) << "</text>\n";
        ++color;
    }

    svg << "</svg>\n";
    return svg.str();
}

ChoroplethResult emit_choropleth(std::span<const RegionSummary> summaries,
                                 const std::string& base_geojson, const std::string& month,
                                 const std::string& region_key_property) {
    nlohmann::json doc = nlohmann::json::parse(base_geojson, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw FormatError("base map is not valid JSON");
    }
    if (doc.value("type", "") != "FeatureCollection" || !doc.contains("features") ||
        !doc["features"].is_array()) {
        throw FormatError("base map is not a GeoJSON FeatureCollection");
    }
    for (const auto& f : doc["features"]) {
        if (!f.is_object() || f.value("type", "") != "Feature" || !f.contains("geometry") ||
            !f.contains("properties")) {
            throw FormatError("GeoJSON feature missing type/geometry/properties");
        }
    }

    std::map<std::string, const RegionSummary*> by_region;
    for (const auto& s : summaries) by_region.emplace(s.region_id, &s);

    // Locate each feature's properties span in the original text and splice
    // in the augmented object; geometry bytes are never touched.
    const std::size_t root_begin = skip_ws(base_geojson, 0);
    const auto root_spans = object_value_spans(base_geojson, root_begin);
    const auto feat_it = root_spans.find("features");
    if (feat_it == root_spans.end()) throw FormatError("GeoJSON missing features array");
    const auto feature_spans = array_element_spans(base_geojson, feat_it->second.begin);

    ChoroplethResult result;
    std::set<std::string> matched;
    std::string out;
    out.reserve(base_geojson.size() + summaries.size() * 48);
    std::size_t cursor = 0;
    for (std::size_t i = 0; i < feature_spans.size(); ++i) {
        const auto fspans = object_value_spans(base_geojson, feature_spans[i].begin);
        const auto pit = fspans.find("properties");
        if (pit == fspans.end()) throw FormatError("GeoJSON feature missing properties");
        const Span props = pit->second;

        const std::string props_text = base_geojson.substr(props.begin, props.end - props.begin);
        nlohmann::ordered_json props_json =
            nlohmann::ordered_json::parse(props_text, nullptr, false);
        if (props_json.is_discarded() || props_json.is_null()) {
            props_json = nlohmann::ordered_json::object();
        }

        std::optional<std::string> region;
        if (props_json.contains(region_key_property) &&
            props_json[region_key_property].is_string()) {
            region = props_json[region_key_property].get<std::string>();
        }
        const RegionSummary* summary = nullptr;
        if (region) {
            const auto sit = by_region.find(*region);
            if (sit != by_region.end()) {
                summary = sit->second;
                matched.insert(*region);
            }
        }
        if (summary && summary->level) {
            props_json["depression_level"] = *summary->level;
        } else {
            props_json["depression_level"] = nullptr;
        }
        if (!summary) {
            result.unmatched_regions.push_back(region ? *region
                                                      : "(feature " + std::to_string(i) + ")");
        }
        props_json["month"] = month;

        out.append(base_geojson, cursor, props.begin - cursor);
        out += props_json.dump();
        cursor = props.end;
    }
    out.append(base_geojson, cursor, base_geojson.size() - cursor);
    result.geojson = std::move(out);

    for (const auto& s : summaries) {
        if (!matched.count(s.region_id)) {
            result.summaries_without_polygons.push_back(s.region_id);
        }
    }
    return result;
}

void write_series_csv(std::span<const DailySeries> series, std::ostream& out) {
    out << "region_id,date,depressed,total,level\n";
    for (const auto& s : series) {
        for (const auto& d : s.days) {
            out << s.region_id << ',' << d.date.to_string() << ',' << d.depressed << ','
                << d.total << ',';
            if (d.level) out << format_double(*d.level);
            out << '\n';
        }
    }
}

namespace {

// CSV artifacts may open with "# key=value" provenance comments.
bool read_header_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') continue;
        return true;
    }
    return false;
}

}  // namespace

std::vector<DailySeries> read_series_csv(std::istream& in) {
    std::string line;
    if (!read_header_line(in, line)) throw FormatError("empty series CSV");
    if (split_csv_line(line) !=
        std::vector<std::string>{"region_id", "date", "depressed", "total", "level"}) {
        throw FormatError("series CSV header mismatch");
    }
    std::map<std::string, DailySeries> by_region;
    std::vector<std::string> order;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto cols = split_csv_line(line);
        if (cols.size() != 5) {
            throw FormatError("series CSV line " + std::to_string(lineno) + ": need 5 columns");
        }
        const auto date = Date::parse(cols[1]);
        if (!date) {
            throw FormatError("series CSV line " + std::to_string(lineno) + ": bad date");
        }
        DayEntry e;
        e.date = *date;
        e.depressed = std::strtoull(cols[2].c_str(), nullptr, 10);
        e.total = std::strtoull(cols[3].c_str(), nullptr, 10);
        if (!cols[4].empty()) e.level = std::strtod(cols[4].c_str(), nullptr);
        if (!by_region.count(cols[0])) order.push_back(cols[0]);
        by_region[cols[0]].region_id = cols[0];
        by_region[cols[0]].days.push_back(e);
    }
    std::vector<DailySeries> out;
    out.reserve(order.size());
    for (const auto& key : order) out.push_back(std::move(by_region[key]));
    for (auto& s : out) {
        for (std::size_t i = 1; i < s.days.size(); ++i) {
            if (!(s.days[i - 1].date < s.days[i].date)) {
                throw FormatError("series CSV: days not strictly increasing for " + s.region_id);
            }
        }
    }
    return out;
}

std::vector<EventAnnotation> read_events_csv(std::istream& in) {
    std::string line;
    if (!read_header_line(in, line)) throw FormatError("empty events CSV");
    if (split_csv_line(line) != std::vector<std::string>{"date", "label"}) {
        throw FormatError("events CSV header mismatch");
    }
    std::vector<EventAnnotation> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cols = split_csv_line(line);
        if (cols.size() != 2) throw FormatError("events CSV: need 2 columns");
        const auto date = Date::parse(cols[0]);
        if (!date) throw FormatError("events CSV: bad date " + cols[0]);
        out.push_back({*date, cols[1]});
    }
    return out;
}

OverlaySeries read_overlay_csv(std::istream& in, const std::string& name) {
    std::string line;
    if (!read_header_line(in, line)) throw FormatError("empty overlay CSV");
    if (split_csv_line(line) != std::vector<std::string>{"date", "value"}) {
        throw FormatError("overlay CSV header mismatch");
    }
    OverlaySeries out;
    out.name = name;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cols = split_csv_line(line);
        if (cols.size() != 2) throw FormatError("overlay CSV: need 2 columns");
        const auto date = Date::parse(cols[0]);
        if (!date) throw FormatError("overlay CSV: bad date " + cols[0]);
        const double v = std::strtod(cols[1].c_str(), nullptr);
        if (!std::isfinite(v)) throw FormatError("overlay CSV: non-finite value");
        out.points.emplace_back(*date, v);
    }
    return out;
}

}  // namespace depdyn::analytics
