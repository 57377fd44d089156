#include "histdoc/mask.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace histdoc {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kMemberBandPx = 2.0;  // pixel-to-line distance for segment extraction

std::vector<Point> true_pixels(const BinaryMask& mask) {
    std::vector<Point> px;
    px.reserve(mask.true_count());
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (mask.at(x, y)) px.push_back({static_cast<double>(x), static_cast<double>(y)});
        }
    }
    return px;
}

/// Sorted projections -> runs split at gaps, kept when long enough.
/// to_point maps a projection parameter back onto the carrier line.
template <typename ToPoint>
void emit_runs(std::vector<double>& ts, double gap_px, double min_len_px, ToPoint to_point,
               std::vector<LineSegment>& out) {
    if (ts.empty()) return;
    std::sort(ts.begin(), ts.end());
    std::size_t start = 0;
    for (std::size_t i = 1; i <= ts.size(); ++i) {
        if (i == ts.size() || ts[i] - ts[i - 1] > gap_px) {
            if (ts[i - 1] - ts[start] >= min_len_px) {
                out.push_back({to_point(ts[start]), to_point(ts[i - 1])});
            }
            start = i;
        }
    }
}

}  // namespace

BinaryMask::BinaryMask(int w, int h, int s) : width(w), height(h), scale(s) {
    if (w < 0 || h < 0 || s < 1) throw std::invalid_argument("BinaryMask: bad dimensions");
    bits.assign(static_cast<std::size_t>(w) * h, 0);
}

std::size_t BinaryMask::true_count() const {
    return static_cast<std::size_t>(std::count_if(bits.begin(), bits.end(),
                                                  [](std::uint8_t b) { return b != 0; }));
}

std::vector<ComponentInfo> connected_components(const BinaryMask& mask) {
    std::vector<int> label(mask.bits.size(), -1);
    std::vector<ComponentInfo> comps;
    std::vector<std::pair<int, int>> stack;

    for (int y0 = 0; y0 < mask.height; ++y0) {
        for (int x0 = 0; x0 < mask.width; ++x0) {
            const std::size_t idx0 = static_cast<std::size_t>(y0) * mask.width + x0;
            if (!mask.at(x0, y0) || label[idx0] >= 0) continue;

            const int id = static_cast<int>(comps.size());
            ComponentInfo info;
            info.id = id;
            int min_x = x0, max_x = x0, min_y = y0, max_y = y0;

            label[idx0] = id;
            stack.clear();
            stack.emplace_back(x0, y0);
            while (!stack.empty()) {
                auto [x, y] = stack.back();
                stack.pop_back();
                ++info.pixel_count;
                min_x = std::min(min_x, x);
                max_x = std::max(max_x, x);
                min_y = std::min(min_y, y);
                max_y = std::max(max_y, y);
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = x + dx, ny = y + dy;
                        if ((dx == 0 && dy == 0) || !mask.in_bounds(nx, ny)) continue;
                        const std::size_t nidx = static_cast<std::size_t>(ny) * mask.width + nx;
                        if (mask.at(nx, ny) && label[nidx] < 0) {
                            label[nidx] = id;
                            stack.emplace_back(nx, ny);
                        }
                    }
                }
            }
            info.bbox = {static_cast<double>(min_x), static_cast<double>(min_y),
                         static_cast<double>(max_x + 1), static_cast<double>(max_y + 1)};
            comps.push_back(info);
        }
    }
    return comps;
}

BinaryMask filter_noise(const BinaryMask& mask, std::size_t min_area) {
    if (min_area == 0) return mask;

    std::vector<int> label(mask.bits.size(), -1);
    std::vector<std::size_t> counts;
    std::vector<std::pair<int, int>> stack;
    for (int y0 = 0; y0 < mask.height; ++y0) {
        for (int x0 = 0; x0 < mask.width; ++x0) {
            const std::size_t idx0 = static_cast<std::size_t>(y0) * mask.width + x0;
            if (!mask.at(x0, y0) || label[idx0] >= 0) continue;
            const int id = static_cast<int>(counts.size());
            counts.push_back(0);
            label[idx0] = id;
            stack.clear();
            stack.emplace_back(x0, y0);
            while (!stack.empty()) {
                auto [x, y] = stack.back();
                stack.pop_back();
                ++counts[id];
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = x + dx, ny = y + dy;
                        if ((dx == 0 && dy == 0) || !mask.in_bounds(nx, ny)) continue;
                        const std::size_t nidx = static_cast<std::size_t>(ny) * mask.width + nx;
                        if (mask.at(nx, ny) && label[nidx] < 0) {
                            label[nidx] = id;
                            stack.emplace_back(nx, ny);
                        }
                    }
                }
            }
        }
    }

    BinaryMask out = mask;
    for (std::size_t i = 0; i < out.bits.size(); ++i) {
        if (label[i] >= 0 && counts[label[i]] < min_area) out.bits[i] = 0;
    }
    return out;
}

BinaryMask upscale(const BinaryMask& mask, int factor) {
    if (factor < 1) throw std::invalid_argument("upscale: factor must be >= 1");
    if (mask.scale % factor != 0) {
        throw std::invalid_argument("upscale: factor does not divide the mask scale");
    }
    if (factor == 1) return mask;

    BinaryMask out(mask.width * factor, mask.height * factor, mask.scale / factor);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(x, y)) continue;
            for (int dy = 0; dy < factor; ++dy) {
                std::uint8_t* row = out.bits.data() +
                                    static_cast<std::size_t>(y * factor + dy) * out.width +
                                    static_cast<std::size_t>(x) * factor;
                std::fill(row, row + factor, std::uint8_t{1});
            }
        }
    }
    return out;
}

std::vector<HoughPeak> hough_lines(const BinaryMask& mask, const HoughParams& params) {
    if (mask.scale != 1) throw std::invalid_argument("hough_lines: mask must be at page scale");
    if (params.theta_step_deg <= 0 || params.rho_step_px <= 0) {
        throw std::invalid_argument("hough_lines: steps must be positive");
    }

    const auto px = true_pixels(mask);
    if (px.empty()) return {};

    const int n_theta = std::max(1, static_cast<int>(std::lround(180.0 / params.theta_step_deg)));
    const double diag = std::hypot(mask.width, mask.height);
    const int rho_half = static_cast<int>(std::ceil(diag / params.rho_step_px));
    const int n_rho = 2 * rho_half + 1;

    std::vector<double> cos_tab(n_theta), sin_tab(n_theta);
    for (int t = 0; t < n_theta; ++t) {
        const double th = t * params.theta_step_deg * kDegToRad;
        cos_tab[t] = std::cos(th);
        sin_tab[t] = std::sin(th);
    }

    std::vector<int> acc(static_cast<std::size_t>(n_theta) * n_rho, 0);
    for (const auto& p : px) {
        for (int t = 0; t < n_theta; ++t) {
            const double rho = p.x * cos_tab[t] + p.y * sin_tab[t];
            const int r = static_cast<int>(std::lround(rho / params.rho_step_px)) + rho_half;
            ++acc[static_cast<std::size_t>(t) * n_rho + r];
        }
    }

    int threshold = params.vote_threshold;
    if (threshold <= 0) {
        threshold = static_cast<int>(0.3 * std::min(mask.width, mask.height));
        threshold = std::max(threshold, 1);
    }

    const auto at = [&](int t, int r) -> int {
        if (t < 0 || t >= n_theta || r < 0 || r >= n_rho) return 0;
        return acc[static_cast<std::size_t>(t) * n_rho + r];
    };

    // Plateaus (frequent with thick bands) are broken towards the first
    // cell in scan order: strictly greater than earlier neighbors, not
    // less than later ones.
    std::vector<HoughPeak> peaks;
    for (int t = 0; t < n_theta; ++t) {
        for (int r = 0; r < n_rho; ++r) {
            const int c = at(t, r);
            if (c < threshold) continue;
            bool is_peak = true;
            for (int dt = -1; dt <= 1 && is_peak; ++dt) {
                for (int dr = -1; dr <= 1 && is_peak; ++dr) {
                    if (dt == 0 && dr == 0) continue;
                    const int n = at(t + dt, r + dr);
                    const bool earlier = dt < 0 || (dt == 0 && dr < 0);
                    if (earlier ? n >= c : n > c) is_peak = false;
                }
            }
            if (is_peak) {
                peaks.push_back({(r - rho_half) * params.rho_step_px,
                                 t * params.theta_step_deg, c});
            }
        }
    }

    std::sort(peaks.begin(), peaks.end(), [](const HoughPeak& a, const HoughPeak& b) {
        return std::tie(b.votes, a.theta_deg, a.rho) < std::tie(a.votes, b.theta_deg, b.rho);
    });
    if (params.max_peaks > 0 && static_cast<int>(peaks.size()) > params.max_peaks) {
        peaks.resize(params.max_peaks);
    }
    return peaks;
}

std::vector<LineSegment> extract_segments(const BinaryMask& mask,
                                          const std::vector<HoughPeak>& peaks,
                                          const HoughParams& params) {
    const auto px = true_pixels(mask);
    std::vector<LineSegment> out;
    std::vector<double> ts;
    for (const auto& peak : peaks) {
        const double th = peak.theta_deg * kDegToRad;
        const double c = std::cos(th), s = std::sin(th);
        ts.clear();
        for (const auto& p : px) {
            if (std::abs(p.x * c + p.y * s - peak.rho) <= kMemberBandPx) {
                ts.push_back(-p.x * s + p.y * c);
            }
        }
        const auto to_point = [&](double t) -> Point {
            return {peak.rho * c - t * s, peak.rho * s + t * c};
        };
        emit_runs(ts, params.segment_gap_px, params.min_segment_len_px, to_point, out);
    }
    return out;
}

std::vector<LineSegment> dedup_lines(std::vector<LineSegment> segments,
                                     double page_width, double page_height,
                                     const HoughParams& params) {
    struct Entry {
        LineSegment seg;
        double intercept;
        double length;
    };
    std::vector<Entry> vertical, horizontal;
    for (const auto& seg : segments) {
        const LineClass cls = classify_segment(seg, params.merge_slope_deg);
        if (cls == LineClass::None) continue;
        Entry e{seg, axis_intercept(seg, cls, page_width, page_height), seg.length()};
        (cls == LineClass::Vertical ? vertical : horizontal).push_back(e);
    }

    std::vector<LineSegment> out;
    const auto collapse = [&](std::vector<Entry>& entries) {
        std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
            return a.intercept < b.intercept;
        });
        std::size_t start = 0;
        for (std::size_t i = 1; i <= entries.size(); ++i) {
            const bool boundary = i == entries.size() ||
                                  entries[i].intercept - entries[i - 1].intercept >=
                                      params.merge_intercept_px;
            if (!boundary) continue;
            // Cluster [start, i): keep the longest, ties to the smaller intercept.
            const Entry* best = &entries[start];
            for (std::size_t k = start + 1; k < i; ++k) {
                if (entries[k].length > best->length) best = &entries[k];
            }
            out.push_back(best->seg);
            start = i;
        }
    };
    collapse(vertical);
    collapse(horizontal);
    return out;
}

std::vector<LineSegment> refit_segments(const BinaryMask& mask,
                                        const std::vector<LineSegment>& segments,
                                        const HoughParams& params) {
    if (params.refit_radius_px <= 0.0 || segments.empty()) return segments;

    const auto px = true_pixels(mask);
    std::vector<LineSegment> out;
    out.reserve(segments.size());
    std::vector<Point> support;
    for (const auto& seg : segments) {
        double dx = seg.p1.x - seg.p0.x, dy = seg.p1.y - seg.p0.y;
        const double len = std::hypot(dx, dy);
        if (len == 0.0) {
            out.push_back(seg);
            continue;
        }
        dx /= len;
        dy /= len;

        support.clear();
        double mean_x = 0.0, mean_y = 0.0;
        for (const auto& p : px) {
            const double off = (p.x - seg.p0.x) * -dy + (p.y - seg.p0.y) * dx;
            if (std::abs(off) <= params.refit_radius_px) {
                support.push_back(p);
                mean_x += p.x;
                mean_y += p.y;
            }
        }
        if (support.size() < 2) {
            out.push_back(seg);
            continue;
        }
        mean_x /= static_cast<double>(support.size());
        mean_y /= static_cast<double>(support.size());

        // Principal axis of the supporting pixel mass.
        double sxx = 0.0, sxy = 0.0, syy = 0.0;
        for (const auto& p : support) {
            const double ux = p.x - mean_x, uy = p.y - mean_y;
            sxx += ux * ux;
            sxy += ux * uy;
            syy += uy * uy;
        }
        double fdx = dx, fdy = dy;
        if (std::abs(sxy) > 1e-12 || std::abs(sxx - syy) > 1e-12) {
            const double angle = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
            fdx = std::cos(angle);
            fdy = std::sin(angle);
            if (fdx * dx + fdy * dy < 0.0) {
                fdx = -fdx;
                fdy = -fdy;
            }
        }

        std::vector<double> ts;
        ts.reserve(support.size());
        for (const auto& p : support) {
            ts.push_back((p.x - mean_x) * fdx + (p.y - mean_y) * fdy);
        }
        std::vector<LineSegment> runs;
        const auto to_point = [&](double t) -> Point {
            return {mean_x + t * fdx, mean_y + t * fdy};
        };
        emit_runs(ts, params.segment_gap_px, params.min_segment_len_px, to_point, runs);
        if (runs.empty()) {
            out.push_back(seg);
            continue;
        }
        // Prefer the run overlapping the original segment's midpoint.
        const Point mid{(seg.p0.x + seg.p1.x) * 0.5, (seg.p0.y + seg.p1.y) * 0.5};
        const double mid_t = (mid.x - mean_x) * fdx + (mid.y - mean_y) * fdy;
        const LineSegment* best = nullptr;
        for (const auto& run : runs) {
            const double t0 = (run.p0.x - mean_x) * fdx + (run.p0.y - mean_y) * fdy;
            const double t1 = (run.p1.x - mean_x) * fdx + (run.p1.y - mean_y) * fdy;
            if (mid_t >= t0 && mid_t <= t1) {
                best = &run;
                break;
            }
        }
        if (!best) {
            best = &*std::max_element(runs.begin(), runs.end(),
                                      [](const LineSegment& a, const LineSegment& b) {
                                          return a.length() < b.length();
                                      });
        }
        out.push_back(*best);
    }
    return out;
}

}  // namespace histdoc
