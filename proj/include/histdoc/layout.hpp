#pragma once

#include <vector>

#include "histdoc/geometry.hpp"

namespace histdoc {

struct Region {
    int id = 0;       // stable grid id (row-major, top-to-bottom then left-to-right)
    AABox rect;
    int order = 0;    // reading-order index
};

/// Reading order of regions. TopThenRight: top-to-bottom bands, right to
/// left within a band. RightThenTop: right-to-left strips, top to bottom
/// within a strip.
enum class RegionOrder { TopThenRight, RightThenTop };

struct PageLayout {
    double page_width = 0.0;
    double page_height = 0.0;
    std::vector<Region> regions;  // sorted by reading order

    const Region* find(int id) const;
};

/// Extends every near-vertical / near-horizontal line to a full page cut
/// at its midline intercept and splits the page rectangle into a grid of
/// regions. Cuts falling on the page border are dropped.
PageLayout partition_page(const std::vector<LineSegment>& lines,
                          double width, double height,
                          double slope_threshold_deg = 45.0,
                          RegionOrder order = RegionOrder::TopThenRight);

/// Region whose rect contains the detection's box center (clamped to the
/// page). Centers on a shared boundary go to the region with the larger
/// box overlap, ties to the smaller region id.
int assign_region(const CharDetection& det, const PageLayout& layout);

}  // namespace histdoc
