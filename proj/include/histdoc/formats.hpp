#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "histdoc/geometry.hpp"
#include "histdoc/rescore.hpp"

namespace histdoc {

/// Malformed or missing input (exit code 1 at the CLI).
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A processing stage failed (exit code 2 at the CLI).
struct pipeline_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Per-page input bundle. Paths are resolved against the directory of
/// the manifest file on load.
struct PageManifest {
    std::string page_id;
    std::filesystem::path detections_path;
    std::filesystem::path mask_path;
    int mask_scale = 1;
    std::optional<std::filesystem::path> line_rec_path;
    std::optional<std::filesystem::path> ground_truth_path;
};

struct GroundTruth {
    std::vector<LineSegment> boundary_lines;
    std::vector<Quad> line_quads;
    std::vector<std::string> line_texts;  // one per quad, reading order
    std::string transcript;
    // Presence flags: an empty list present in the file (a page without
    // boundary lines) is not the same as an absent annotation.
    bool has_boundary_lines = false;
    bool has_text_lines = false;
};

/// Detections JSON: array of {"box": [l, t, r, b], "label": str,
/// "score": num}. Records are validated; errors name the record index.
std::vector<CharDetection> load_detections(const std::filesystem::path& path);
void save_detections(const std::filesystem::path& path, std::span<const CharDetection> dets);

PageManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const std::filesystem::path& path, const PageManifest& manifest);

/// Manifest list: one manifest path per line, '#' comments allowed.
std::vector<std::filesystem::path> load_manifest_list(const std::filesystem::path& path);

GroundTruth load_ground_truth(const std::filesystem::path& path);
void save_ground_truth(const std::filesystem::path& path, const GroundTruth& gt);

/// Line-recognition JSON: array of {"column": idx, "symbols": [...],
/// "probs": [...]}, keyed by document column index in reading order.
std::map<int, ScoredSequence> load_line_rec(const std::filesystem::path& path);
void save_line_rec(const std::filesystem::path& path,
                   const std::vector<ScoredSequence>& columns);

/// One sliding-window detector output, offset in page coordinates.
struct WindowOutput {
    double dx = 0.0;
    double dy = 0.0;
    std::vector<CharDetection> detections;
};

/// Windows JSON: {"windows": [{"offset": [dx, dy], "detections": [...]}]}.
std::vector<WindowOutput> load_windows(const std::filesystem::path& path);

std::vector<LineSegment> load_segments(const std::filesystem::path& path);
void save_segments(const std::filesystem::path& path, std::span<const LineSegment> segments,
                   double page_width, double page_height);

}  // namespace histdoc
