#include "isc3/render.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "isc3/errors.hpp"

namespace isc3 {

double coverage_radius_km(const BaseStation& bs, double min_rate_bps, const LinkParams& link) {
    if (!(min_rate_bps > 0.0)) throw ArgumentError("min_rate_bps must be > 0");
    const double snr = std::pow(2.0, min_rate_bps / bs.bandwidth_hz) - 1.0;
    const double snr_db = 10.0 * std::log10(snr);
    const double max_fspl = bs.tx_power_dbm - link.noise_power_dbm - snr_db;
    const double exponent = (max_fspl - 32.44 - 20.0 * std::log10(bs.carrier_freq_mhz)) / 20.0;
    return std::max(0.001, std::pow(10.0, exponent));
}

namespace {

// Two-decimal fixed formatting keeps the SVG byte-stable.
std::string px(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
    return std::string(buf, res.ptr);
}

const char* kTripPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                              "#ff7f0e", "#8c564b", "#17becf", "#e377c2"};

}  // namespace

std::string render_svg(const DeliveryInstance& raw_instance, const RoutePlan* plan,
                       const Isc3Demands& demands, const LinkParams& link, const RenderSpec& spec) {
    if (spec.canvas_px < 100) throw ArgumentError("canvas must be at least 100 px");
    const DeliveryInstance instance = project_to_planar(raw_instance);

    double min_x = instance.depot.x, max_x = instance.depot.x;
    double min_y = instance.depot.y, max_y = instance.depot.y;
    auto grow = [&](double x, double y) {
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        min_y = std::min(min_y, y);
        max_y = std::max(max_y, y);
    };
    for (const auto& s : instance.stations) grow(s.location.x, s.location.y);
    for (const auto& b : instance.base_stations) grow(b.location.x, b.location.y);
    for (const auto& z : instance.no_fly_zones) {
        grow(z.center.x - z.radius_km, z.center.y - z.radius_km);
        grow(z.center.x + z.radius_km, z.center.y + z.radius_km);
    }

    const double span = std::max({max_x - min_x, max_y - min_y, 1e-6});
    const double margin = 0.06 * spec.canvas_px;
    const double scale = (spec.canvas_px - 2.0 * margin) / span;
    auto to_px = [&](const GeoPoint& p) {
        const double x = margin + (p.x - min_x) * scale;
        const double y = spec.canvas_px - margin - (p.y - min_y) * scale;
        return std::pair<double, double>{x, y};
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.canvas_px << "\" height=\""
        << spec.canvas_px << "\" viewBox=\"0 0 " << spec.canvas_px << " " << spec.canvas_px
        << "\">\n";
    svg << "  <rect width=\"" << spec.canvas_px << "\" height=\"" << spec.canvas_px
        << "\" fill=\"#ffffff\"/>\n";

    if (spec.no_fly_zones) {
        for (const auto& z : instance.no_fly_zones) {
            const auto [cx, cy] = to_px(z.center);
            svg << "  <circle cx=\"" << px(cx) << "\" cy=\"" << px(cy) << "\" r=\""
                << px(z.radius_km * scale)
                << "\" fill=\"#cccccc\" fill-opacity=\"0.5\" stroke=\"#888888\"/>\n";
        }
    }

    if (spec.coverage_rings) {
        for (const auto& b : instance.base_stations) {
            const double radius = coverage_radius_km(b, demands.min_data_rate_bps, link);
            const auto [cx, cy] = to_px(b.location);
            svg << "  <circle cx=\"" << px(cx) << "\" cy=\"" << px(cy) << "\" r=\""
                << px(radius * scale)
                << "\" fill=\"none\" stroke=\"#44aa88\" stroke-dasharray=\"6 4\"/>\n";
            svg << "  <rect x=\"" << px(cx - 4) << "\" y=\"" << px(cy - 4)
                << "\" width=\"8\" height=\"8\" fill=\"#44aa88\"/>\n";
        }
    }

    if (spec.trips && plan != nullptr) {
        for (std::size_t t = 0; t < plan->trips.size(); ++t) {
            const char* color = kTripPalette[t % (sizeof(kTripPalette) / sizeof(kTripPalette[0]))];
            svg << "  <polyline fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"2\" points=\"";
            auto emit_point = [&](const GeoPoint& p) {
                const auto [x, y] = to_px(p);
                svg << px(x) << "," << px(y) << " ";
            };
            emit_point(instance.depot);
            for (int s : plan->trips[t].stations) emit_point(instance.stations[s].location);
            emit_point(instance.depot);
            svg << "\"/>\n";
        }
    }

    if (spec.stations) {
        for (const auto& s : instance.stations) {
            const auto [cx, cy] = to_px(s.location);
            svg << "  <circle cx=\"" << px(cx) << "\" cy=\"" << px(cy)
                << "\" r=\"4\" fill=\"#333333\"/>\n";
            svg << "  <text x=\"" << px(cx + 6) << "\" y=\"" << px(cy - 6)
                << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.id << "</text>\n";
        }
    }

    if (spec.depot) {
        const auto [cx, cy] = to_px(instance.depot);
        svg << "  <rect x=\"" << px(cx - 6) << "\" y=\"" << px(cy - 6)
            << "\" width=\"12\" height=\"12\" fill=\"#000000\"/>\n";
        svg << "  <text x=\"" << px(cx + 8) << "\" y=\"" << px(cy + 4)
            << "\" font-family=\"sans-serif\" font-size=\"11\">depot</text>\n";
    }

    svg << "</svg>\n";
    return svg.str();
}

}  // namespace isc3
