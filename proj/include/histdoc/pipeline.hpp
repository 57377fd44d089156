#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "histdoc/config.hpp"
#include "histdoc/formats.hpp"
#include "histdoc/grouping.hpp"
#include "histdoc/metrics.hpp"

namespace histdoc {

struct PageResult {
    Document document;
    std::string transcript;
    std::optional<std::string> fused_transcript;  // set when line recognition was supplied
    std::vector<LineSegment> lines;               // deduplicated boundary lines
    PageLayout layout;
    std::vector<Quad> column_quads;               // one per document column, reading order
    std::vector<std::string> column_texts;        // matching text (fused when available)
    std::vector<std::string> warnings;
};

/// The boundary-line stages alone: noise filter, upscale to page scale,
/// Hough transform, segment extraction, deduplication and refit.
std::vector<LineSegment> detect_lines(const BinaryMask& mask, const PipelineConfig& config);

/// Full inference pipeline on in-memory inputs. The page size is the
/// mask extent at scale 1 (mask dimensions times mask scale).
PageResult run_page(const std::vector<CharDetection>& detections, const BinaryMask& mask,
                    const std::map<int, ScoredSequence>* line_rec,
                    const PipelineConfig& config);

/// Loads the manifest's files and runs the pipeline. Errors are
/// rethrown with the page id prepended.
PageResult run_page(const PageManifest& manifest, const PipelineConfig& config);

/// Translates each window's detections by its offset, concatenates and
/// applies NMS.
std::vector<CharDetection> merge_windows(const std::vector<WindowOutput>& windows,
                                         double iou_threshold);

struct PageEval {
    std::string page_id;
    std::optional<LineEvalReport> lines;
    std::optional<DetEvalReport> detection;
    std::optional<TextEvalReport> text;
};

struct EvalReports {
    std::size_t pages = 0;
    std::size_t pages_without_gt = 0;
    LineEvalReport lines;     // micro-averaged (counts summed before ratios)
    DetEvalReport detection;
    TextEvalReport text;
    std::optional<TextEvalReport> text_before_rescore;  // when any page fused
    std::vector<PageEval> per_page;
    std::vector<std::string> warnings;
};

/// Runs every page and aggregates the three evaluation protocols.
/// Pages without ground truth are skipped with a warning. With
/// continue_on_error, failing pages are reported and skipped instead of
/// aborting the batch.
EvalReports run_eval(const std::vector<PageManifest>& manifests, const PipelineConfig& config,
                     bool keep_per_page = false, bool continue_on_error = false);

/// Drawing primitives of the debug rendering, exposed so tests can check
/// counts without decoding the raster.
struct DebugOverlay {
    int width = 0;
    int height = 0;
    std::vector<LineSegment> boundary_lines;
    std::vector<double> cut_xs;
    std::vector<double> cut_ys;
    std::vector<AABox> column_boxes;
    std::vector<std::pair<Point, int>> order_labels;  // anchor, 1-based reading index
};

DebugOverlay build_overlay(const PageResult& result, double page_width, double page_height);

/// Rasterizes the overlay to an RGB PNG. Deterministic: identical
/// overlays produce byte-identical files.
void render_debug(const DebugOverlay& overlay, const std::filesystem::path& png_path);

}  // namespace histdoc
