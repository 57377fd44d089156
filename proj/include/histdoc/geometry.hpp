#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

namespace histdoc {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

double distance(const Point& a, const Point& b);

/// Axis-aligned box, image convention: y grows downwards.
struct AABox {
    double x_left = 0.0;
    double y_top = 0.0;
    double x_right = 0.0;
    double y_bottom = 0.0;

    double width() const { return x_right - x_left; }
    double height() const { return y_bottom - y_top; }
    double area() const { return width() * height(); }
    Point center() const { return {(x_left + x_right) * 0.5, (y_top + y_bottom) * 0.5}; }
    bool valid() const { return x_left <= x_right && y_top <= y_bottom; }
};

/// One recognized character: bounding box, glyph label (a single UTF-8
/// symbol), and the classifier confidence.
struct CharDetection {
    AABox box;
    std::string label;
    double score = 0.0;
};

/// Convex quadrangle. Winding is normalized on construction so the signed
/// shoelace area is non-negative.
struct Quad {
    std::array<Point, 4> v{};

    Quad() = default;
    Quad(Point a, Point b, Point c, Point d);
    static Quad from_box(const AABox& box);

    double area() const;
};

struct LineSegment {
    Point p0;
    Point p1;

    double length() const { return distance(p0, p1); }
};

double point_segment_distance(const Point& p, const LineSegment& s);

double iou_aabox(const AABox& a, const AABox& b);

/// Absolute shoelace area. Throws std::invalid_argument on fewer than
/// 3 vertices.
double polygon_area(std::span<const Point> vertices);

/// Sutherland-Hodgman clip of `subject` against a convex `clip` polygon.
/// Returns the intersection polygon, possibly empty.
std::vector<Point> clip_polygon(std::span<const Point> subject, std::span<const Point> clip);

double iou_quad(const Quad& a, const Quad& b);

/// Distance between two segments as the smaller endpoint pairing:
/// min(|a0-b0|+|a1-b1|, |a0-b1|+|a1-b0|). Orientation-insensitive.
double segment_pair_distance(const LineSegment& a, const LineSegment& b);

/// Greedy class-agnostic non-maximum suppression in descending score
/// order. Score ties are broken towards the smaller (x_left, y_top).
/// Survivors have pairwise IoU <= iou_threshold.
std::vector<CharDetection> nms(std::vector<CharDetection> dets, double iou_threshold);

enum class LineClass { Vertical, Horizontal, None };

/// Near-vertical when the angle from the vertical axis is within
/// `slope_threshold_deg`, near-horizontal likewise for the horizontal
/// axis. At exactly 45 degrees from both, vertical wins.
LineClass classify_segment(const LineSegment& s, double slope_threshold_deg);

/// Intercept of the extended segment at the page midline: x at
/// y = page_height/2 for near-vertical segments, y at x = page_width/2
/// for near-horizontal ones.
double axis_intercept(const LineSegment& s, LineClass cls, double page_width, double page_height);

}  // namespace histdoc
