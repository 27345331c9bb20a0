#include "oatune/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace oatune::svg {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Frame {
    double x0, y0, w, h;          // pixel box
    double xmin, xmax, ymin, ymax;

    double px(double x) const { return x0 + (xmax > xmin ? (x - xmin) / (xmax - xmin) : 0.5) * w; }
    double py(double y) const { return y0 + h - (ymax > ymin ? (y - ymin) / (ymax - ymin) : 0.5) * h; }
};

void axes(std::ostringstream& os, const Frame& f, const std::string& x_label, const std::string& y_label) {
    os << "<rect x='" << f.x0 << "' y='" << f.y0 << "' width='" << f.w << "' height='" << f.h
       << "' fill='none' stroke='#333'/>\n";
    os << "<text x='" << f.x0 + f.w / 2 << "' y='" << f.y0 + f.h + 32 << "' text-anchor='middle' font-size='12'>"
       << escape(x_label) << "</text>\n";
    os << "<text x='" << f.x0 - 42 << "' y='" << f.y0 + f.h / 2 << "' text-anchor='middle' font-size='12' transform='rotate(-90 "
       << f.x0 - 42 << ' ' << f.y0 + f.h / 2 << ")'>" << escape(y_label) << "</text>\n";
    for (int t = 0; t <= 4; ++t) {
        const double yv = f.ymin + (f.ymax - f.ymin) * t / 4.0;
        const double xv = f.xmin + (f.xmax - f.xmin) * t / 4.0;
        os << "<text x='" << f.x0 - 4 << "' y='" << f.py(yv) + 4 << "' text-anchor='end' font-size='10'>" << yv << "</text>\n";
        os << "<text x='" << f.px(xv) << "' y='" << f.y0 + f.h + 14 << "' text-anchor='middle' font-size='10'>" << xv << "</text>\n";
    }
}

std::string open(int width, int height, const std::string& title) {
    std::ostringstream os;
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height << "' viewBox='0 0 " << width
       << ' ' << height << "'>\n<rect width='100%' height='100%' fill='white'/>\n"
       << "<text x='" << width / 2 << "' y='20' text-anchor='middle' font-size='14'>" << escape(title) << "</text>\n";
    return os.str();
}

}  // namespace

std::string line_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series, bool log_y) {
    std::ostringstream os;
    os << open(640, 420, title);
    double ymin = std::numeric_limits<double>::infinity();
    double ymax = -ymin;
    std::size_t xmax = 1;
    auto tr = [log_y](double v) { return log_y ? std::log10(std::max(v, 1e-300)) : v; };
    for (const auto& s : series) {
        xmax = std::max(xmax, s.values.size());
        for (double v : s.values) {
            if (!std::isfinite(v) || (log_y && v <= 0)) continue;
            ymin = std::min(ymin, tr(v));
            ymax = std::max(ymax, tr(v));
        }
    }
    if (!std::isfinite(ymin)) ymin = 0, ymax = 1;
    Frame f{70, 40, 540, 320, 1, static_cast<double>(xmax), ymin, ymax};
    axes(os, f, x_label, log_y ? "log10 " + y_label : y_label);
    for (std::size_t k = 0; k < series.size(); ++k) {
        os << "<polyline fill='none' stroke-width='1.5' stroke='" << kPalette[k % 5] << "' points='";
        for (std::size_t i = 0; i < series[k].values.size(); ++i) {
            const double v = series[k].values[i];
            if (!std::isfinite(v) || (log_y && v <= 0)) continue;
            os << f.px(static_cast<double>(i + 1)) << ',' << f.py(tr(v)) << ' ';
        }
        os << "'/>\n<text x='" << f.x0 + f.w - 8 << "' y='" << f.y0 + 16 + 14 * static_cast<double>(k)
           << "' text-anchor='end' font-size='11' fill='" << kPalette[k % 5] << "'>" << escape(series[k].name) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string main_effects(const MainEffectsTable& table, const FactorSpace& space) {
    const std::size_t panels = table.factors.size();
    const int width = static_cast<int>(80 + 170 * panels);
    std::ostringstream os;
    os << open(width, 340, "Main effects of means");
    double ymin = std::numeric_limits<double>::infinity();
    double ymax = -ymin;
    for (const auto& fe : table.factors) {
        for (const auto& l : fe.levels) ymin = std::min(ymin, l.mean), ymax = std::max(ymax, l.mean);
    }
    const double pad = std::max(1e-9, (ymax - ymin) * 0.1);
    ymin -= pad;
    ymax += pad;
    for (std::size_t p = 0; p < panels; ++p) {
        Frame f{70 + 170.0 * static_cast<double>(p), 40, 150, 240, 0, 2, ymin, ymax};
        const std::string name = p < space.size() ? space[p].name : "F" + std::to_string(p + 1);
        axes(os, f, name, p == 0 ? "mean response" : "");
        os << "<line x1='" << f.x0 << "' x2='" << f.x0 + f.w << "' y1='" << f.py(table.grand_mean) << "' y2='"
           << f.py(table.grand_mean) << "' stroke='#999' stroke-dasharray='4 3'/>\n";
        os << "<polyline fill='none' stroke='" << kPalette[0] << "' stroke-width='1.5' points='";
        for (std::size_t l = 0; l < 3; ++l) os << f.px(static_cast<double>(l)) << ',' << f.py(table.factors[p].levels[l].mean) << ' ';
        os << "'/>\n";
        for (std::size_t l = 0; l < 3; ++l) {
            const bool sel = static_cast<int>(l) == table.factors[p].selected;
            os << "<circle cx='" << f.px(static_cast<double>(l)) << "' cy='" << f.py(table.factors[p].levels[l].mean)
               << "' r='" << (sel ? 5 : 3) << "' fill='" << (sel ? kPalette[1] : kPalette[0]) << "'/>\n";
            if (p < space.size()) {
                os << "<text x='" << f.px(static_cast<double>(l)) << "' y='" << f.y0 - 4
                   << "' text-anchor='middle' font-size='10'>" << escape(level_label(space[p].levels[l])) << "</text>\n";
            }
        }
    }
    os << "</svg>\n";
    return os.str();
}

std::string scatter(const std::string& title, const std::vector<double>& actual, const std::vector<double>& predicted) {
    std::ostringstream os;
    os << open(460, 440, title);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < std::min(actual.size(), predicted.size()); ++i) {
        for (double v : {actual[i], predicted[i]}) {
            if (std::isfinite(v)) lo = std::min(lo, v), hi = std::max(hi, v);
        }
    }
    if (!std::isfinite(lo)) lo = 0, hi = 1;
    Frame f{70, 40, 360, 340, lo, hi, lo, hi};
    axes(os, f, "actual", "predicted");
    os << "<line x1='" << f.px(lo) << "' y1='" << f.py(lo) << "' x2='" << f.px(hi) << "' y2='" << f.py(hi)
       << "' stroke='#999'/>\n";
    for (std::size_t i = 0; i < std::min(actual.size(), predicted.size()); ++i) {
        if (!std::isfinite(actual[i]) || !std::isfinite(predicted[i])) continue;
        os << "<circle cx='" << f.px(actual[i]) << "' cy='" << f.py(predicted[i]) << "' r='1.5' fill='" << kPalette[0]
           << "' fill-opacity='0.5'/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace oatune::svg
