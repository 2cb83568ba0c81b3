#include "ggiw/plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace ggiw {

namespace {

constexpr double kWidth = 900.0;
constexpr int kEllipseVertices = 48;
const char* const kTargetColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

struct Frame {
    Vec2 lo;
    Vec2 hi;
    double scale;

    [[nodiscard]] Vec2 map(const Vec2& p) const { return {(p.x() - lo.x()) * scale, (hi.y() - p.y()) * scale}; }
};

void ellipse_path(std::ostringstream& out, const Frame& f, const Vec2& c, const Mat2& extent, const char* color,
                  const char* dash) {
    const Mat2 root = spd_sqrt<2>(extent);
    out << "<path d=\"";
    for (int i = 0; i < kEllipseVertices; ++i) {
        const double a = 2.0 * std::numbers::pi * i / kEllipseVertices;
        const Vec2 p = f.map(c + 2.0 * root * Vec2(std::cos(a), std::sin(a)));
        out << (i == 0 ? 'M' : 'L') << p.x() << ',' << p.y() << ' ';
    }
    out << "Z\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\"";
    if (dash != nullptr) out << " stroke-dasharray=\"" << dash << "\"";
    out << "/>\n";
}

}  // namespace

int overlay_group_count(int steps, int stride) {
    if (steps < 1 || stride < 1) return 0;
    return (steps - 1) / stride + 1;
}

std::optional<std::string> render_overlay_svg(const PlotInput& input, int stride) {
    if (stride < 1) stride = 1;
    const int steps = static_cast<int>(std::max(input.estimates.size(), input.frames.size()));
    if (steps == 0 && input.truth.empty()) return std::nullopt;

    Vec2 lo = Vec2::Constant(std::numeric_limits<double>::infinity());
    Vec2 hi = -lo;
    auto extend = [&](const Vec2& p) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    };
    for (const auto& t : input.truth) {
        for (const auto& c : t.center) extend(c);
    }
    for (const auto& f : input.frames) {
        for (const auto& p : f.points) extend(p);
    }
    for (const auto& step : input.estimates) {
        for (const auto& s : step) extend(s.position());
    }
    if (!lo.allFinite()) return std::nullopt;
    lo.array() -= 20.0;
    hi.array() += 20.0;
    const Frame f{lo, hi, kWidth / std::max(hi.x() - lo.x(), 1e-9)};
    const double height = (hi.y() - lo.y()) * f.scale;

    std::ostringstream out;
    out.precision(6);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << kWidth << ' ' << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (int k = 1; k <= steps; k += stride) {
        const auto i = static_cast<std::size_t>(k - 1);
        out << "<g id=\"step-" << k << "\">\n";
        if (i < input.frames.size()) {
            const auto& fr = input.frames[i];
            for (std::size_t j = 0; j < fr.size(); ++j) {
                const Vec2 p = f.map(fr.points[j]);
                const bool clutter = !fr.truth_labels.empty() && fr.truth_labels[j] == 0;
                out << "<circle cx=\"" << p.x() << "\" cy=\"" << p.y() << "\" r=\"1.2\" fill=\""
                    << (clutter ? "#999999" : "#000000") << "\"/>\n";
            }
        }
        for (std::size_t n = 0; n < input.truth.size(); ++n) {
            const auto k_idx = static_cast<std::size_t>(k);
            if (k_idx >= input.truth[n].center.size()) continue;
            ellipse_path(out, f, input.truth[n].center[k_idx], input.truth[n].extent[k_idx], "#000000", "4,3");
        }
        if (i < input.estimates.size()) {
            for (std::size_t n = 0; n < input.estimates[i].size(); ++n) {
                const auto& s = input.estimates[i][n];
                ellipse_path(out, f, s.position(), s.extent_mean(), kTargetColors[n % std::size(kTargetColors)],
                             nullptr);
            }
        }
        out << "</g>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace ggiw
