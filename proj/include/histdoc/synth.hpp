#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "histdoc/geometry.hpp"
#include "histdoc/grouping.hpp"
#include "histdoc/layout.hpp"
#include "histdoc/mask.hpp"
#include "histdoc/rescore.hpp"

namespace histdoc {

/// Parameters of the synthetic page generator. Counts given as
/// [min, max] ranges are drawn uniformly per region / column; degenerate
/// ranges (min == max) pin the value. Generation is a pure function of
/// the spec (all randomness comes from `seed`).
struct SynthSpec {
    std::uint64_t seed = 1;
    double page_width = 1000.0;
    double page_height = 1200.0;
    int h_lines = 1;  // horizontal boundary lines (full-width cuts)
    int v_lines = 0;  // vertical boundary lines (full-height cuts)
    int min_columns = 3;
    int max_columns = 8;
    int min_chars = 4;  // full-width characters per column
    int max_chars = 8;
    double double_column_prob = 0.3;
    /// Rows per double-column run (each row is a half-width glyph pair);
    /// drawn from [1, max_run_rows]. A run never exceeds half the
    /// column's full-width character count so the width median stays on
    /// the full-width glyphs.
    int max_run_rows = 1;
    double jitter_px = 0.0;        // per-box translation amplitude (corrupt)
    double label_flip_prob = 0.0;  // per-character flip probability (corrupt)
    int speck_count = 0;           // mask noise specks (corrupt)
    int speck_size = 2;            // speck side length, mask pixels
    int mask_scale = 4;
    double band_px = 20.0;  // half-width of the rendered boundary-line band
    std::string alphabet =
        "天地玄黃宇宙洪荒日月盈昃辰宿列張寒來暑往秋收冬藏"
        "閏餘成歲律呂調陽雲騰致雨露結為霜金生麗水玉出崑岡";
};

struct SynthPage {
    SynthSpec spec;
    std::vector<LineSegment> gt_lines;
    PageLayout gt_layout;
    Document gt_document;
    std::string gt_transcript;                // emit_text(gt_document)
    std::vector<Quad> gt_line_quads;          // one per document column, reading order
    std::vector<std::string> gt_line_texts;   // matching transcriptions
    std::vector<CharDetection> detections;    // shuffled
    BinaryMask mask;
    int physical_columns = 0;
    int double_column_runs = 0;
};

/// Deterministic synthetic page. Throws std::invalid_argument when the
/// requested geometry does not fit the page (too many lines or columns).
SynthPage generate(const SynthSpec& spec);

/// Mask at 1/scale resolution whose true pixels are exactly those whose
/// page-coordinate distance to any of the segments is <= band_px.
BinaryMask render_mask(const std::vector<LineSegment>& lines, double page_width,
                       double page_height, int scale, double band_px = 20.0);

/// Degrades a page: every detection box is translated by a per-box
/// uniform offset within [-jitter_px, +jitter_px] on each axis, labels
/// are flipped to a random other alphabet symbol with
/// label_flip_prob (flipped scores drop below 0.5), and speck_count
/// isolated speck_size^2 blocks are painted into the mask away from
/// existing true pixels. Ground-truth fields are left untouched.
SynthPage corrupt(const SynthPage& page, const SynthSpec& spec);

/// Ideal text-line recognizer for fusion tests: emits each document
/// column's ground-truth symbols at a fixed confidence.
std::vector<ScoredSequence> oracle_line_rec(const Document& gt_doc, double confidence);

}  // namespace histdoc
