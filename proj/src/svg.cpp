#include "clusterdiag/svg.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace clusterdiag {

namespace {

constexpr const char* kFont = "font-family=\"Helvetica, Arial, sans-serif\"";

struct Rgb {
    int r = 0;
    int g = 0;
    int b = 0;
};

Rgb lerp(const Rgb& a, const Rgb& b, double t) {
    auto mix = [t](int x, int y) { return static_cast<int>(std::lround(x + t * (y - x))); };
    return {mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b)};
}

// Diverging scale anchored at 0.5: deep red at 0, near-white at 0.5, deep
// blue at 1. 0.5 is the chance-ranking boundary, so it is the fixed midpoint.
Rgb diverging_color(double value) {
    static constexpr Rgb kLow{178, 24, 43};
    static constexpr Rgb kMid{247, 247, 247};
    static constexpr Rgb kHigh{33, 102, 172};
    const double v = std::clamp(value, 0.0, 1.0);
    if (v < 0.5) {
        return lerp(kLow, kMid, v / 0.5);
    }
    return lerp(kMid, kHigh, (v - 0.5) / 0.5);
}

std::string fill(const Rgb& c) {
    return fmt::format("#{:02x}{:02x}{:02x}", c.r, c.g, c.b);
}

const char* text_color_on(const Rgb& c) {
    const double luminance = 0.299 * c.r + 0.587 * c.g + 0.114 * c.b;
    return luminance < 140.0 ? "#ffffff" : "#1a1a1a";
}

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

std::string svg_open(double width, double height) {
    return fmt::format(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
        "width=\"{:.0f}\" height=\"{:.0f}\" viewBox=\"0 0 {:.0f} {:.0f}\">\n",
        width, height, width, height);
}

const char* kHatchDefs =
    "  <defs>\n"
    "    <pattern id=\"hatch\" width=\"8\" height=\"8\" patternUnits=\"userSpaceOnUse\" "
    "patternTransform=\"rotate(45)\">\n"
    "      <rect width=\"8\" height=\"8\" fill=\"#d9d9d9\"/>\n"
    "      <line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"8\" stroke=\"#9a9a9a\" stroke-width=\"3\"/>\n"
    "    </pattern>\n"
    "  </defs>\n";

// Round tick spacing to 1/2/5 times a power of ten.
double nice_step(double range, int ticks) {
    const double raw = range / ticks;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    double step = 10.0;
    if (norm <= 1.0) {
        step = 1.0;
    } else if (norm <= 2.0) {
        step = 2.0;
    } else if (norm <= 5.0) {
        step = 5.0;
    }
    return step * mag;
}

}  // namespace

std::string render_heatmap(const OptionalMatrix& matrix, const Matrix& weights,
                           const std::vector<std::string>& labels) {
    const std::size_t k = labels.size();
    const double cell = 64.0;
    const double left = 140.0;
    const double top = 90.0;
    const double right = 30.0;
    const double bottom = 30.0;
    const double width = left + cell * static_cast<double>(k) + right;
    const double height = top + cell * static_cast<double>(k) + bottom;

    std::string svg = svg_open(width, height);
    svg += kHatchDefs;
    svg += fmt::format("  <rect width=\"{:.0f}\" height=\"{:.0f}\" fill=\"#ffffff\"/>\n", width,
                       height);
    svg += fmt::format(
        "  <text x=\"{:.1f}\" y=\"20\" text-anchor=\"middle\" {} font-size=\"15\" "
        "font-weight=\"bold\">Cluster-pair AUC</text>\n",
        left + cell * k / 2.0, kFont);
    svg += fmt::format(
        "  <text x=\"{:.1f}\" y=\"42\" text-anchor=\"middle\" {} font-size=\"12\">columns: "
        "cluster the negatives come from</text>\n",
        left + cell * k / 2.0, kFont);
    svg += fmt::format(
        "  <text x=\"18\" y=\"{:.1f}\" text-anchor=\"middle\" {} font-size=\"12\" "
        "transform=\"rotate(-90 18 {:.1f})\">rows: cluster the positives come from</text>\n",
        top + cell * k / 2.0, kFont, top + cell * k / 2.0);

    for (std::size_t j = 0; j < k; ++j) {
        svg += fmt::format(
            "  <text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\" {} "
            "font-size=\"12\">{}</text>\n",
            left + cell * (j + 0.5), top - 10.0, kFont, xml_escape(labels[j]));
    }
    for (std::size_t i = 0; i < k; ++i) {
        svg += fmt::format(
            "  <text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\" {} font-size=\"12\">{}</text>\n",
            left - 8.0, top + cell * (i + 0.5) + 4.0, kFont, xml_escape(labels[i]));
    }

    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const double x = left + cell * static_cast<double>(j);
            const double y = top + cell * static_cast<double>(i);
            if (matrix[i][j]) {
                const Rgb color = diverging_color(*matrix[i][j]);
                svg += fmt::format(
                    "  <rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.0f}\" height=\"{:.0f}\" "
                    "fill=\"{}\" stroke=\"#ffffff\"/>\n",
                    x, y, cell, cell, fill(color));
                svg += fmt::format(
                    "  <text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\" {} font-size=\"14\" "
                    "fill=\"{}\">{:.3f}</text>\n",
                    x + cell / 2.0, y + cell / 2.0 + 1.0, kFont, text_color_on(color),
                    *matrix[i][j]);
                svg += fmt::format(
                    "  <text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\" {} font-size=\"9\" "
                    "fill=\"{}\">w {:.3f}</text>\n",
                    x + cell / 2.0, y + cell / 2.0 + 16.0, kFont, text_color_on(color),
                    weights[i][j]);
            } else {
                svg += fmt::format(
                    "  <rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.0f}\" height=\"{:.0f}\" "
                    "fill=\"url(#hatch)\" stroke=\"#ffffff\"/>\n",
                    x, y, cell, cell);
            }
        }
    }
    svg += "</svg>\n";
    return svg;
}

std::string render_cluster_bars(std::vector<BarItem> items, const std::string& metric_name,
                                double global_value) {
    std::sort(items.begin(), items.end(),
              [](const BarItem& a, const BarItem& b) { return a.label < b.label; });

    const double left = 70.0;
    const double top = 50.0;
    const double bottom = 60.0;
    const double plot_h = 240.0;
    const double slot = std::max(46.0, 340.0 / std::max<std::size_t>(items.size(), 1));
    const double width = left + slot * static_cast<double>(items.size()) + 30.0;
    const double height = top + plot_h + bottom;

    double max_v = global_value;
    for (const BarItem& it : items) {
        if (it.value) {
            max_v = std::max(max_v, *it.value);
        }
    }
    if (max_v <= 0.0) {
        max_v = 1.0;
    }
    const double scale_max = max_v * 1.08;

    std::string svg = svg_open(width, height);
    svg += kHatchDefs;
    svg += fmt::format("  <rect width=\"{:.0f}\" height=\"{:.0f}\" fill=\"#ffffff\"/>\n", width,
                       height);
    svg += fmt::format(
        "  <text x=\"{:.1f}\" y=\"24\" text-anchor=\"middle\" {} font-size=\"15\" "
        "font-weight=\"bold\">{} by cluster</text>\n",
        width / 2.0, kFont, xml_escape(metric_name));

    const double axis_y = top + plot_h;
    svg += fmt::format(
        "  <line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"#333333\"/>\n",
        left, top, left, axis_y);
    svg += fmt::format(
        "  <line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"#333333\"/>\n",
        left, axis_y, width - 20.0, axis_y);

    const double step = nice_step(scale_max, 5);
    for (double v = 0.0; v <= scale_max + 1e-12; v += step) {
        const double y = axis_y - plot_h * (v / scale_max);
        svg += fmt::format(
            "  <line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"#e0e0e0\"/>\n",
            left, y, width - 20.0, y);
        svg += fmt::format(
            "  <text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\" {} font-size=\"11\">{:.2f}"
            "</text>\n",
            left - 6.0, y + 4.0, kFont, v);
    }

    for (std::size_t i = 0; i < items.size(); ++i) {
        const double cx = left + slot * (static_cast<double>(i) + 0.5);
        const double bar_w = slot * 0.6;
        if (items[i].value) {
            const double h = plot_h * (*items[i].value / scale_max);
            svg += fmt::format(
                "  <rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" "
                "fill=\"#4477aa\"/>\n",
                cx - bar_w / 2.0, axis_y - h, bar_w, h);
            svg += fmt::format(
                "  <text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\" {} "
                "font-size=\"11\">{:.3f}</text>\n",
                cx, axis_y - h - 5.0, kFont, *items[i].value);
        } else {
            // empty slot marker: a hatched stub for a cluster with no value
            svg += fmt::format(
                "  <rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"14\" "
                "fill=\"url(#hatch)\"/>\n",
                cx - bar_w / 2.0, axis_y - 14.0, bar_w);
            svg += fmt::format(
                "  <text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\" {} font-size=\"11\" "
                "fill=\"#777777\">n/a</text>\n",
                cx, axis_y - 20.0, kFont);
        }
        svg += fmt::format(
            "  <text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\" {} font-size=\"12\">{}"
            "</text>\n",
            cx, axis_y + 18.0, kFont, xml_escape(items[i].label));
    }

    const double gy = axis_y - plot_h * (global_value / scale_max);
    svg += fmt::format(
        "  <line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"#cc3311\" "
        "stroke-dasharray=\"6,4\"/>\n",
        left, gy, width - 20.0, gy);
    svg += fmt::format(
        "  <text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\" {} font-size=\"11\" "
        "fill=\"#cc3311\">global {:.3f}</text>\n",
        width - 22.0, gy - 5.0, kFont, global_value);

    svg += "</svg>\n";
    return svg;
}

std::string render_psi_bars(const std::vector<FeatureDrift>& features) {
    const double left = 190.0;
    const double top = 50.0;
    const double row_h = 28.0;
    const double plot_w = 420.0;
    const double width = left + plot_w + 90.0;
    const double height = top + row_h * static_cast<double>(features.size()) + 40.0;

    double max_psi = 0.0;
    for (const FeatureDrift& f : features) {
        max_psi = std::max(max_psi, f.psi);
    }
    if (max_psi <= 0.0) {
        max_psi = 1.0;
    }

    std::string svg = svg_open(width, height);
    svg += fmt::format("  <rect width=\"{:.0f}\" height=\"{:.0f}\" fill=\"#ffffff\"/>\n", width,
                       height);
    svg += fmt::format(
        "  <text x=\"{:.1f}\" y=\"24\" text-anchor=\"middle\" {} font-size=\"15\" "
        "font-weight=\"bold\">Feature distribution shift (PSI), focus cluster vs rest</text>\n",
        width / 2.0, kFont);

    for (std::size_t i = 0; i < features.size(); ++i) {
        const double y = top + row_h * static_cast<double>(i);
        const double bar = plot_w * (features[i].psi / (max_psi * 1.05));
        svg += fmt::format(
            "  <text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\" {} font-size=\"12\">{}</text>\n",
            left - 8.0, y + row_h / 2.0 + 4.0, kFont, xml_escape(features[i].feature));
        svg += fmt::format(
            "  <rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" "
            "fill=\"#228833\"/>\n",
            left, y + 5.0, std::max(bar, 0.5), row_h - 10.0);
        svg += fmt::format(
            "  <text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"start\" {} font-size=\"11\">{:.4f}"
            "</text>\n",
            left + std::max(bar, 0.5) + 6.0, y + row_h / 2.0 + 4.0, kFont, features[i].psi);
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace clusterdiag
