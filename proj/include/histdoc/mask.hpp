#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "histdoc/geometry.hpp"

namespace histdoc {

/// Row-major binary grid. `scale` is page-pixels per mask-pixel: a mask
/// produced at 1/4 of the page resolution has scale 4, a page-resolution
/// mask has scale 1.
struct BinaryMask {
    int width = 0;
    int height = 0;
    int scale = 1;
    std::vector<std::uint8_t> bits;

    BinaryMask() = default;
    BinaryMask(int w, int h, int s = 1);

    bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
    std::size_t true_count() const;
};

struct HoughParams {
    double theta_step_deg = 1.0;
    double rho_step_px = 1.0;
    /// Accumulator votes required for a peak; 0 means auto
    /// (0.3 * min(width, height) of the voted mask).
    int vote_threshold = 0;
    double merge_slope_deg = 45.0;
    double merge_intercept_px = 200.0;
    double segment_gap_px = 30.0;
    double min_segment_len_px = 50.0;
    /// Pixel band used to refit a deduplicated line against the mask;
    /// 0 disables refitting.
    double refit_radius_px = 25.0;
    /// Keep at most this many accumulator peaks (by votes); 0 = no cap.
    int max_peaks = 128;

    bool operator==(const HoughParams&) const = default;
};

/// Line in normal form: rho = x*cos(theta) + y*sin(theta), theta in
/// degrees within [0, 180).
struct HoughPeak {
    double rho = 0.0;
    double theta_deg = 0.0;
    int votes = 0;
};

struct ComponentInfo {
    int id = 0;
    std::size_t pixel_count = 0;
    AABox bbox;  // mask-pixel units, half-open [x_left, x_right)
};

/// 8-connected component labeling; components are numbered in row-major
/// order of their first pixel.
std::vector<ComponentInfo> connected_components(const BinaryMask& mask);

/// Clears every component with pixel_count < min_area.
BinaryMask filter_noise(const BinaryMask& mask, std::size_t min_area);

/// Nearest-neighbor expansion by an integer factor, which must divide
/// the mask scale. Throws std::invalid_argument otherwise.
BinaryMask upscale(const BinaryMask& mask, int factor);

/// Standard Hough transform over true pixels. The mask must be at page
/// scale (scale == 1). Returned peaks meet the vote threshold and are
/// local maxima of their 3x3 accumulator neighborhood, sorted by votes
/// descending.
std::vector<HoughPeak> hough_lines(const BinaryMask& mask, const HoughParams& params);

/// For each peak, projects the true pixels within 2 px of the infinite
/// line onto it, splits the sorted projections at gaps larger than
/// segment_gap_px and emits every run of at least min_segment_len_px as
/// a segment.
std::vector<LineSegment> extract_segments(const BinaryMask& mask,
                                          const std::vector<HoughPeak>& peaks,
                                          const HoughParams& params);

/// Classifies segments as near-vertical or near-horizontal (segments
/// outside both classes are dropped), clusters same-class segments whose
/// page-midline intercepts differ by less than merge_intercept_px
/// (transitively) and keeps one representative per cluster.
std::vector<LineSegment> dedup_lines(std::vector<LineSegment> segments,
                                     double page_width, double page_height,
                                     const HoughParams& params);

/// Re-estimates each segment from the mask pixels within refit_radius_px
/// of its infinite line (principal-axis fit, then the same projection /
/// gap-split as extract_segments). Quantized Hough peaks over a thick
/// line band systematically favor slightly tilted corridors; the refit
/// recovers the band center line. No-op when refit_radius_px <= 0.
std::vector<LineSegment> refit_segments(const BinaryMask& mask,
                                        const std::vector<LineSegment>& segments,
                                        const HoughParams& params);

}  // namespace histdoc
