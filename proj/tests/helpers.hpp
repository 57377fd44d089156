#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "histdoc/geometry.hpp"

namespace testutil {

/// Convex quad from four sorted angles on a random rotated ellipse.
inline histdoc::Quad random_convex_quad(std::mt19937_64& rng, double center_range = 60.0) {
    std::uniform_real_distribution<double> angle_dist(0.0, 2.0 * std::numbers::pi);
    std::array<double, 4> angles{};
    while (true) {
        for (auto& a : angles) a = angle_dist(rng);
        std::sort(angles.begin(), angles.end());
        double min_gap = 2.0 * std::numbers::pi - (angles[3] - angles[0]);
        for (int i = 1; i < 4; ++i) min_gap = std::min(min_gap, angles[i] - angles[i - 1]);
        if (min_gap > 0.35) break;
    }
    std::uniform_real_distribution<double> center(-center_range, center_range);
    std::uniform_real_distribution<double> radius(15.0, 70.0);
    std::uniform_real_distribution<double> rot_dist(0.0, std::numbers::pi);
    const double cx = center(rng), cy = center(rng);
    const double ra = radius(rng), rb = radius(rng);
    const double rot = rot_dist(rng);
    const double cr = std::cos(rot), sr = std::sin(rot);

    std::array<histdoc::Point, 4> pts{};
    for (int i = 0; i < 4; ++i) {
        const double ex = ra * std::cos(angles[i]);
        const double ey = rb * std::sin(angles[i]);
        pts[i] = {cx + ex * cr - ey * sr, cy + ex * sr + ey * cr};
    }
    return {pts[0], pts[1], pts[2], pts[3]};
}

inline bool point_in_convex(const histdoc::Quad& q, double x, double y) {
    int sign = 0;
    for (int i = 0; i < 4; ++i) {
        const auto& a = q.v[i];
        const auto& b = q.v[(i + 1) % 4];
        const double c = (b.x - a.x) * (y - a.y) - (b.y - a.y) * (x - a.x);
        if (c == 0.0) continue;
        const int s = c > 0.0 ? 1 : -1;
        if (sign == 0) sign = s;
        else if (s != sign) return false;
    }
    return true;
}

/// Monte-Carlo IoU over the joint bounding box.
inline double mc_quad_iou(const histdoc::Quad& a, const histdoc::Quad& b, int samples,
                          std::mt19937_64& rng) {
    double min_x = a.v[0].x, max_x = a.v[0].x, min_y = a.v[0].y, max_y = a.v[0].y;
    for (const auto& q : {a, b}) {
        for (const auto& p : q.v) {
            min_x = std::min(min_x, p.x);
            max_x = std::max(max_x, p.x);
            min_y = std::min(min_y, p.y);
            max_y = std::max(max_y, p.y);
        }
    }
    std::uniform_real_distribution<double> xs(min_x, max_x), ys(min_y, max_y);
    long long inter = 0, uni = 0;
    for (int i = 0; i < samples; ++i) {
        const double x = xs(rng), y = ys(rng);
        const bool in_a = point_in_convex(a, x, y);
        const bool in_b = point_in_convex(b, x, y);
        if (in_a && in_b) ++inter;
        if (in_a || in_b) ++uni;
    }
    return uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
}

/// Reference NMS straight from the definition: repeatedly take the best
/// remaining detection and discard everything overlapping it.
inline std::vector<histdoc::CharDetection> reference_nms(
    std::vector<histdoc::CharDetection> dets, double iou_threshold) {
    const auto better = [](const histdoc::CharDetection& a, const histdoc::CharDetection& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.box.x_left != b.box.x_left) return a.box.x_left < b.box.x_left;
        if (a.box.y_top != b.box.y_top) return a.box.y_top < b.box.y_top;
        if (a.box.x_right != b.box.x_right) return a.box.x_right < b.box.x_right;
        if (a.box.y_bottom != b.box.y_bottom) return a.box.y_bottom < b.box.y_bottom;
        return a.label < b.label;
    };
    std::vector<histdoc::CharDetection> kept;
    while (!dets.empty()) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < dets.size(); ++i) {
            if (better(dets[i], dets[best])) best = i;
        }
        const histdoc::CharDetection chosen = dets[best];
        std::vector<histdoc::CharDetection> rest;
        for (std::size_t i = 0; i < dets.size(); ++i) {
            if (i == best) continue;
            if (histdoc::iou_aabox(dets[i].box, chosen.box) <= iou_threshold) {
                rest.push_back(dets[i]);
            }
        }
        kept.push_back(chosen);
        dets = std::move(rest);
    }
    return kept;
}

/// Plain recursive Levenshtein, exponential on purpose (lengths <= 8).
inline std::size_t reference_levenshtein(std::span<const std::string> a,
                                         std::span<const std::string> b) {
    if (a.empty()) return b.size();
    if (b.empty()) return a.size();
    const std::size_t sub =
        reference_levenshtein(a.subspan(1), b.subspan(1)) + (a[0] == b[0] ? 0 : 1);
    const std::size_t del = reference_levenshtein(a.subspan(1), b) + 1;
    const std::size_t ins = reference_levenshtein(a, b.subspan(1)) + 1;
    return std::min({sub, del, ins});
}

inline std::vector<std::string> random_symbols(std::mt19937_64& rng, std::size_t max_len,
                                               int alphabet) {
    std::uniform_int_distribution<std::size_t> len(0, max_len);
    std::uniform_int_distribution<int> sym(0, alphabet - 1);
    std::vector<std::string> out(len(rng));
    for (auto& s : out) s = std::string(1, static_cast<char>('a' + sym(rng)));
    return out;
}

}  // namespace testutil
