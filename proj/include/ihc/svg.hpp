#ifndef IHC_SVG_HPP
#define IHC_SVG_HPP

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace ihc {

/// Minimal self-contained SVG line plot: axes, tick labels, legend, and the
/// fixed HC / HC-a / HC-b series colors. Plots are derived views and never
/// feed back into CSV content.
class SvgPlot {
public:
    SvgPlot(std::string title, std::string x_label, std::string y_label)
        : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

    void add_series(std::string name, std::vector<std::pair<double, double>> points) {
        series_.push_back({std::move(name), std::move(points)});
    }

    /// Optional shaded band between y = 0 and a curve (detectable-region fill).
    void add_region(std::vector<std::pair<double, double>> boundary, std::string fill) {
        regions_.push_back({std::move(boundary), std::move(fill)});
    }

    void render(std::ostream& os) const {
        const double w = 640, h = 480, ml = 70, mr = 20, mt = 40, mb = 50;
        double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
        auto fold = [&](const std::vector<std::pair<double, double>>& pts) {
            for (const auto& [x, y] : pts) {
                xmin = std::min(xmin, x);
                xmax = std::max(xmax, x);
                ymin = std::min(ymin, y);
                ymax = std::max(ymax, y);
            }
        };
        for (const auto& s : series_) fold(s.points);
        for (const auto& r : regions_) fold(r.boundary);
        if (xmin > xmax) { xmin = 0; xmax = 1; }
        if (ymin > ymax) { ymin = 0; ymax = 1; }
        if (xmax == xmin) xmax = xmin + 1;
        if (ymax == ymin) ymax = ymin + 1;
        ymin = std::min(ymin, 0.0);
        const double pad = 0.05 * (ymax - ymin);
        ymax += pad;
        auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr); };
        auto py = [&](double y) { return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb); };

        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
           << "\" viewBox=\"0 0 " << w << " " << h << "\">\n"
           << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
           << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
           << title_ << "</text>\n";

        for (const auto& r : regions_) {
            std::ostringstream pts;
            pts << px(r.boundary.front().first) << "," << py(0.0) << " ";
            for (const auto& [x, y] : r.boundary) pts << px(x) << "," << py(y) << " ";
            pts << px(r.boundary.back().first) << "," << py(0.0);
            os << "<polygon points=\"" << pts.str() << "\" fill=\"" << r.fill
               << "\" stroke=\"none\"/>\n";
        }

        // axes with five ticks per side
        os << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\""
           << h - mb << "\" stroke=\"black\"/>\n"
           << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
           << h - mb << "\" stroke=\"black\"/>\n";
        for (int t = 0; t <= 5; ++t) {
            const double xv = xmin + (xmax - xmin) * t / 5.0;
            const double yv = ymin + (ymax - ymin) * t / 5.0;
            os << "<line x1=\"" << px(xv) << "\" y1=\"" << h - mb << "\" x2=\"" << px(xv)
               << "\" y2=\"" << h - mb + 5 << "\" stroke=\"black\"/>\n"
               << "<text x=\"" << px(xv) << "\" y=\"" << h - mb + 18
               << "\" text-anchor=\"middle\" font-size=\"11\">" << round3(xv) << "</text>\n"
               << "<line x1=\"" << ml - 5 << "\" y1=\"" << py(yv) << "\" x2=\"" << ml
               << "\" y2=\"" << py(yv) << "\" stroke=\"black\"/>\n"
               << "<text x=\"" << ml - 8 << "\" y=\"" << py(yv) + 4
               << "\" text-anchor=\"end\" font-size=\"11\">" << round3(yv) << "</text>\n";
        }
        os << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 10
           << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label_ << "</text>\n"
           << "<text x=\"16\" y=\"" << (mt + h - mb) / 2
           << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
           << (mt + h - mb) / 2 << ")\">" << y_label_ << "</text>\n";

        for (std::size_t i = 0; i < series_.size(); ++i) {
            const auto& s = series_[i];
            std::ostringstream pts;
            for (const auto& [x, y] : s.points) pts << px(x) << "," << py(y) << " ";
            os << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\""
               << color(i) << "\" stroke-width=\"2\"/>\n";
            const double lx = w - mr - 120, ly = mt + 18 * (i + 1);
            os << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 24 << "\" y2=\""
               << ly << "\" stroke=\"" << color(i) << "\" stroke-width=\"2\"/>\n"
               << "<text x=\"" << lx + 30 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">"
               << s.name << "</text>\n";
        }
        os << "</svg>\n";
    }

private:
    struct Series {
        std::string name;
        std::vector<std::pair<double, double>> points;
    };
    struct Region {
        std::vector<std::pair<double, double>> boundary;
        std::string fill;
    };

    static const char* color(std::size_t i) {
        static const char* palette[] = {"#1f4fd8", "#1f8f3a", "#d82f2f", "#8a2fd8"};
        return palette[i % 4];
    }

    static std::string round3(double v) {
        std::ostringstream os;
        os.precision(3);
        os << v;
        return os.str();
    }

    std::string title_, x_label_, y_label_;
    std::vector<Series> series_;
    std::vector<Region> regions_;
};

} // namespace ihc

#endif // IHC_SVG_HPP
