#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "histdoc/geometry.hpp"

namespace histdoc {

struct LineEvalReport {
    double precision = 0.0;
    double recall = 0.0;
    double f_score = 0.0;
    std::size_t tp = 0;
    std::size_t pred_count = 0;
    std::size_t gt_count = 0;
    std::vector<std::pair<int, int>> matches;  // (pred index, gt index)
};

/// Boundary-line evaluation: greedy one-to-one matching by ascending
/// segment_pair_distance; a pair counts as a true positive when its
/// distance is strictly below dist_threshold.
LineEvalReport eval_lines(std::span<const LineSegment> pred, std::span<const LineSegment> gt,
                          double dist_threshold);

struct DetThresholdResult {
    double iou_threshold = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double h_mean = 0.0;
    std::size_t tp = 0;
};

struct DetEvalReport {
    std::vector<DetThresholdResult> per_threshold;
    std::size_t pred_count = 0;
    std::size_t gt_count = 0;
};

/// Text-line detection evaluation: greedy one-to-one matching by
/// descending IoU, counted per threshold. H-mean = 2PR/(P+R).
DetEvalReport eval_detection(std::span<const Quad> pred, std::span<const Quad> gt,
                             std::span<const double> iou_thresholds);

struct TextEvalReport {
    std::size_t nt = 0;  // ground-truth symbol count
    std::size_t de = 0;  // deletions (gt symbols missing from pred)
    std::size_t se = 0;  // substitutions
    std::size_t ie = 0;  // insertions (pred symbols absent from gt)
    double cr = 0.0;     // (Nt - De - Se) / Nt
    double ar = 0.0;     // (Nt - De - Se - Ie) / Nt, may be negative
};

/// CR/AR from the edit alignment of pred against gt. Whitespace
/// (including line breaks) is stripped from both sides first. Throws
/// std::invalid_argument when gt is empty after stripping.
TextEvalReport eval_text(std::string_view pred, std::string_view gt);

}  // namespace histdoc
