#include "histdoc/layout.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace histdoc {

namespace {

constexpr double kEdgeEps = 1e-6;

std::vector<double> clean_cuts(std::vector<double> cuts, double limit) {
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> out;
    for (double c : cuts) {
        if (c <= kEdgeEps || c >= limit - kEdgeEps) continue;  // border cuts are degenerate
        if (!out.empty() && c - out.back() <= kEdgeEps) continue;
        out.push_back(c);
    }
    return out;
}

}  // namespace

const Region* PageLayout::find(int id) const {
    for (const auto& r : regions) {
        if (r.id == id) return &r;
    }
    return nullptr;
}

PageLayout partition_page(const std::vector<LineSegment>& lines,
                          double width, double height,
                          double slope_threshold_deg, RegionOrder order) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("partition_page: empty page");

    std::vector<double> xs, ys;
    for (const auto& seg : lines) {
        const LineClass cls = classify_segment(seg, slope_threshold_deg);
        if (cls == LineClass::Vertical) {
            xs.push_back(axis_intercept(seg, cls, width, height));
        } else if (cls == LineClass::Horizontal) {
            ys.push_back(axis_intercept(seg, cls, width, height));
        }
    }
    xs = clean_cuts(std::move(xs), width);
    ys = clean_cuts(std::move(ys), height);

    std::vector<double> xb{0.0};
    xb.insert(xb.end(), xs.begin(), xs.end());
    xb.push_back(width);
    std::vector<double> yb{0.0};
    yb.insert(yb.end(), ys.begin(), ys.end());
    yb.push_back(height);

    PageLayout layout;
    layout.page_width = width;
    layout.page_height = height;
    const int n_cols = static_cast<int>(xb.size()) - 1;
    for (std::size_t r = 0; r + 1 < yb.size(); ++r) {
        for (std::size_t c = 0; c + 1 < xb.size(); ++c) {
            Region region;
            region.id = static_cast<int>(r) * n_cols + static_cast<int>(c);
            region.rect = {xb[c], yb[r], xb[c + 1], yb[r + 1]};
            layout.regions.push_back(region);
        }
    }

    const auto top_then_right = [](const Region& a, const Region& b) {
        return std::tie(a.rect.y_top, b.rect.x_right) < std::tie(b.rect.y_top, a.rect.x_right);
    };
    const auto right_then_top = [](const Region& a, const Region& b) {
        return std::tie(b.rect.x_right, a.rect.y_top) < std::tie(a.rect.x_right, b.rect.y_top);
    };
    std::sort(layout.regions.begin(), layout.regions.end(),
              order == RegionOrder::TopThenRight ? top_then_right : right_then_top);
    for (std::size_t i = 0; i < layout.regions.size(); ++i) {
        layout.regions[i].order = static_cast<int>(i);
    }
    return layout;
}

int assign_region(const CharDetection& det, const PageLayout& layout) {
    if (layout.regions.empty()) throw std::invalid_argument("assign_region: empty layout");

    Point c = det.box.center();
    c.x = std::clamp(c.x, 0.0, layout.page_width);
    c.y = std::clamp(c.y, 0.0, layout.page_height);

    const Region* best = nullptr;
    double best_overlap = -1.0;
    for (const auto& region : layout.regions) {
        const auto& r = region.rect;
        if (c.x < r.x_left || c.x > r.x_right || c.y < r.y_top || c.y > r.y_bottom) continue;
        const double ow = std::min(det.box.x_right, r.x_right) - std::max(det.box.x_left, r.x_left);
        const double oh = std::min(det.box.y_bottom, r.y_bottom) - std::max(det.box.y_top, r.y_top);
        const double overlap = std::max(ow, 0.0) * std::max(oh, 0.0);
        if (!best || overlap > best_overlap ||
            (overlap == best_overlap && region.id < best->id)) {
            best = &region;
            best_overlap = overlap;
        }
    }
    if (!best) {
        // Floating-point corner: fall back to the nearest region center.
        double best_d = 0.0;
        for (const auto& region : layout.regions) {
            const double d = distance(c, region.rect.center());
            if (!best || d < best_d) {
                best = &region;
                best_d = d;
            }
        }
    }
    return best->id;
}

}  // namespace histdoc
