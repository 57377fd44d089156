#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "histdoc/grouping.hpp"
#include "histdoc/layout.hpp"
#include "histdoc/mask.hpp"
#include "histdoc/rescore.hpp"

namespace histdoc {

struct GroupingParams {
    double tol_frac = 0.5;
    double small_frac = 0.67;
    double small_skip_frac = 0.8;
    SpliceOrder splice = SpliceOrder::RightThenLeft;

    bool operator==(const GroupingParams&) const = default;
};

/// Every tunable of the pipeline. The defaults are the documented
/// behavior: parsing an empty config file yields exactly this struct.
struct PipelineConfig {
    std::size_t min_area = 50;  // mask-scale pixels
    HoughParams hough;
    double nms_iou = 0.5;
    GroupingParams grouping;
    RegionOrder region_order = RegionOrder::TopThenRight;
    double line_dist_threshold_px = 50.0;
    std::vector<double> det_iou_thresholds = {0.5, 0.6, 0.7};
    MeanScope rescore_mean = MeanScope::WholeSequence;

    bool operator==(const PipelineConfig&) const = default;
};

/// Parses the flat key = value config format ('#' starts a comment).
/// Unknown keys and malformed values raise input_error.
PipelineConfig parse_config(std::string_view text);

PipelineConfig load_config_file(const std::filesystem::path& path);

/// The defaults in config-file syntax, with one line per key.
std::string default_config_text();

}  // namespace histdoc
