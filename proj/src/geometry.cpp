#include "histdoc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <tuple>

namespace histdoc {

namespace {

double cross(const Point& o, const Point& a, const Point& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double signed_area(std::span<const Point> v) {
    double acc = 0.0;
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
        acc += v[j].x * v[i].y - v[i].x * v[j].y;
    }
    return acc * 0.5;
}

Point line_intersection(const Point& a, const Point& b, const Point& c, const Point& d) {
    const double a1 = b.y - a.y, b1 = a.x - b.x, c1 = a1 * a.x + b1 * a.y;
    const double a2 = d.y - c.y, b2 = c.x - d.x, c2 = a2 * c.x + b2 * c.y;
    const double det = a1 * b2 - a2 * b1;
    if (det == 0.0) return b;  // parallel; caller only hits this on degenerate input
    return {(b2 * c1 - b1 * c2) / det, (a1 * c2 - a2 * c1) / det};
}

}  // namespace

double distance(const Point& a, const Point& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

Quad::Quad(Point a, Point b, Point c, Point d) : v{a, b, c, d} {
    if (signed_area(v) < 0.0) std::reverse(v.begin(), v.end());
}

Quad Quad::from_box(const AABox& box) {
    return Quad({box.x_left, box.y_top}, {box.x_right, box.y_top},
                {box.x_right, box.y_bottom}, {box.x_left, box.y_bottom});
}

double Quad::area() const {
    return std::abs(signed_area(v));
}

double point_segment_distance(const Point& p, const LineSegment& s) {
    const double dx = s.p1.x - s.p0.x, dy = s.p1.y - s.p0.y;
    const double len2 = dx * dx + dy * dy;
    if (len2 == 0.0) return distance(p, s.p0);
    double t = ((p.x - s.p0.x) * dx + (p.y - s.p0.y) * dy) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, {s.p0.x + t * dx, s.p0.y + t * dy});
}

double iou_aabox(const AABox& a, const AABox& b) {
    const double iw = std::min(a.x_right, b.x_right) - std::max(a.x_left, b.x_left);
    const double ih = std::min(a.y_bottom, b.y_bottom) - std::max(a.y_top, b.y_top);
    if (iw <= 0.0 || ih <= 0.0) return 0.0;
    const double inter = iw * ih;
    const double uni = a.area() + b.area() - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

double polygon_area(std::span<const Point> vertices) {
    if (vertices.size() < 3) {
        throw std::invalid_argument("polygon_area: need at least 3 vertices");
    }
    return std::abs(signed_area(vertices));
}

std::vector<Point> clip_polygon(std::span<const Point> subject, std::span<const Point> clip) {
    if (subject.empty() || clip.size() < 3) return {};

    // Clipping assumes a counter-clockwise clip polygon.
    std::vector<Point> clip_ccw(clip.begin(), clip.end());
    if (signed_area(clip_ccw) < 0.0) std::reverse(clip_ccw.begin(), clip_ccw.end());

    std::vector<Point> out(subject.begin(), subject.end());
    for (std::size_t i = 0; i < clip_ccw.size() && !out.empty(); ++i) {
        const Point e0 = clip_ccw[i];
        const Point e1 = clip_ccw[(i + 1) % clip_ccw.size()];
        std::vector<Point> in;
        in.swap(out);
        for (std::size_t j = 0; j < in.size(); ++j) {
            const Point cur = in[j];
            const Point prev = in[(j + in.size() - 1) % in.size()];
            const bool cur_in = cross(e0, e1, cur) >= 0.0;
            const bool prev_in = cross(e0, e1, prev) >= 0.0;
            if (cur_in) {
                if (!prev_in) out.push_back(line_intersection(prev, cur, e0, e1));
                out.push_back(cur);
            } else if (prev_in) {
                out.push_back(line_intersection(prev, cur, e0, e1));
            }
        }
    }
    return out;
}

double iou_quad(const Quad& a, const Quad& b) {
    const auto inter = clip_polygon(a.v, b.v);
    if (inter.size() < 3) return 0.0;
    const double ai = std::abs(signed_area(inter));
    const double uni = a.area() + b.area() - ai;
    return uni > 0.0 ? ai / uni : 0.0;
}

double segment_pair_distance(const LineSegment& a, const LineSegment& b) {
    const double direct = distance(a.p0, b.p0) + distance(a.p1, b.p1);
    const double swapped = distance(a.p0, b.p1) + distance(a.p1, b.p0);
    return std::min(direct, swapped);
}

std::vector<CharDetection> nms(std::vector<CharDetection> dets, double iou_threshold) {
    std::stable_sort(dets.begin(), dets.end(), [](const CharDetection& a, const CharDetection& b) {
        return std::tie(b.score, a.box.x_left, a.box.y_top, a.box.x_right, a.box.y_bottom, a.label) <
               std::tie(a.score, b.box.x_left, b.box.y_top, b.box.x_right, b.box.y_bottom, b.label);
    });
    std::vector<CharDetection> kept;
    for (auto& d : dets) {
        bool suppressed = false;
        for (const auto& k : kept) {
            if (iou_aabox(d.box, k.box) > iou_threshold) {
                suppressed = true;
                break;
            }
        }
        if (!suppressed) kept.push_back(std::move(d));
    }
    return kept;
}

LineClass classify_segment(const LineSegment& s, double slope_threshold_deg) {
    const double dx = std::abs(s.p1.x - s.p0.x);
    const double dy = std::abs(s.p1.y - s.p0.y);
    const double from_vertical = std::atan2(dx, dy) * 180.0 / std::numbers::pi;
    const double from_horizontal = 90.0 - from_vertical;
    if (from_vertical <= slope_threshold_deg && from_vertical <= from_horizontal) {
        return LineClass::Vertical;
    }
    if (from_horizontal <= slope_threshold_deg) return LineClass::Horizontal;
    if (from_vertical <= slope_threshold_deg) return LineClass::Vertical;
    return LineClass::None;
}

double axis_intercept(const LineSegment& s, LineClass cls, double page_width, double page_height) {
    const double dx = s.p1.x - s.p0.x;
    const double dy = s.p1.y - s.p0.y;
    if (cls == LineClass::Vertical) {
        if (dy == 0.0) return s.p0.x;  // degenerate, should not classify as vertical
        return s.p0.x + (page_height * 0.5 - s.p0.y) * dx / dy;
    }
    if (dx == 0.0) return s.p0.y;
    return s.p0.y + (page_width * 0.5 - s.p0.x) * dy / dx;
}

}  // namespace histdoc
