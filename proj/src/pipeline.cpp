#include "histdoc/pipeline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "histdoc/image_io.hpp"

namespace histdoc {

namespace {

std::string join_symbols(const std::vector<std::string>& symbols) {
    std::string out;
    for (const auto& s : symbols) out += s;
    return out;
}

// 3x5 digit glyphs for the reading-order labels, one byte per row.
constexpr std::array<std::array<std::uint8_t, 5>, 10> kDigits{{
    {0b111, 0b101, 0b101, 0b101, 0b111},  // 0
    {0b010, 0b110, 0b010, 0b010, 0b111},  // 1
    {0b111, 0b001, 0b111, 0b100, 0b111},  // 2
    {0b111, 0b001, 0b111, 0b001, 0b111},  // 3
    {0b101, 0b101, 0b111, 0b001, 0b001},  // 4
    {0b111, 0b100, 0b111, 0b001, 0b111},  // 5
    {0b111, 0b100, 0b111, 0b101, 0b111},  // 6
    {0b111, 0b001, 0b010, 0b010, 0b010},  // 7
    {0b111, 0b101, 0b111, 0b101, 0b111},  // 8
    {0b111, 0b101, 0b111, 0b001, 0b111},  // 9
}};

void draw_dot(ImageRGB& img, int x, int y, int thickness, std::uint8_t r, std::uint8_t g,
              std::uint8_t b) {
    for (int dy = 0; dy < thickness; ++dy) {
        for (int dx = 0; dx < thickness; ++dx) img.put(x + dx, y + dy, r, g, b);
    }
}

void draw_line(ImageRGB& img, Point p0, Point p1, int thickness, std::uint8_t r, std::uint8_t g,
               std::uint8_t b) {
    const double len = distance(p0, p1);
    const int steps = std::max(1, static_cast<int>(std::ceil(len * 2.0)));
    for (int i = 0; i <= steps; ++i) {
        const double t = static_cast<double>(i) / steps;
        const int x = static_cast<int>(std::lround(p0.x + t * (p1.x - p0.x)));
        const int y = static_cast<int>(std::lround(p0.y + t * (p1.y - p0.y)));
        draw_dot(img, x - thickness / 2, y - thickness / 2, thickness, r, g, b);
    }
}

void draw_box(ImageRGB& img, const AABox& box, int thickness, std::uint8_t r, std::uint8_t g,
              std::uint8_t b) {
    draw_line(img, {box.x_left, box.y_top}, {box.x_right, box.y_top}, thickness, r, g, b);
    draw_line(img, {box.x_right, box.y_top}, {box.x_right, box.y_bottom}, thickness, r, g, b);
    draw_line(img, {box.x_right, box.y_bottom}, {box.x_left, box.y_bottom}, thickness, r, g, b);
    draw_line(img, {box.x_left, box.y_bottom}, {box.x_left, box.y_top}, thickness, r, g, b);
}

void draw_number(ImageRGB& img, int x, int y, int value, int px_scale, std::uint8_t r,
                 std::uint8_t g, std::uint8_t b) {
    const std::string digits = std::to_string(value);
    for (std::size_t d = 0; d < digits.size(); ++d) {
        const auto& glyph = kDigits[digits[d] - '0'];
        const int gx = x + static_cast<int>(d) * 4 * px_scale;
        for (int row = 0; row < 5; ++row) {
            for (int col = 0; col < 3; ++col) {
                if (glyph[row] & (0b100 >> col)) {
                    draw_dot(img, gx + col * px_scale, y + row * px_scale, px_scale, r, g, b);
                }
            }
        }
    }
}

AABox quad_bounds(const Quad& q) {
    AABox box{q.v[0].x, q.v[0].y, q.v[0].x, q.v[0].y};
    for (const auto& p : q.v) {
        box.x_left = std::min(box.x_left, p.x);
        box.y_top = std::min(box.y_top, p.y);
        box.x_right = std::max(box.x_right, p.x);
        box.y_bottom = std::max(box.y_bottom, p.y);
    }
    return box;
}

}  // namespace

std::vector<LineSegment> detect_lines(const BinaryMask& mask, const PipelineConfig& config) {
    const double page_w = static_cast<double>(mask.width) * mask.scale;
    const double page_h = static_cast<double>(mask.height) * mask.scale;
    const BinaryMask filtered = filter_noise(mask, config.min_area);
    const BinaryMask full = upscale(filtered, filtered.scale);
    const auto peaks = hough_lines(full, config.hough);
    auto segments = extract_segments(full, peaks, config.hough);
    auto lines = dedup_lines(std::move(segments), page_w, page_h, config.hough);
    return refit_segments(full, lines, config.hough);
}

PageResult run_page(const std::vector<CharDetection>& detections, const BinaryMask& mask,
                    const std::map<int, ScoredSequence>* line_rec,
                    const PipelineConfig& config) {
    const double page_w = static_cast<double>(mask.width) * mask.scale;
    const double page_h = static_cast<double>(mask.height) * mask.scale;

    PageResult result;
    result.lines = detect_lines(mask, config);
    result.layout = partition_page(result.lines, page_w, page_h,
                                   config.hough.merge_slope_deg, config.region_order);

    std::map<int, std::vector<CharDetection>> by_region;
    for (const auto& det : detections) {
        by_region[assign_region(det, result.layout)].push_back(det);
    }
    std::map<int, std::vector<ColumnGroup>> groups;
    for (auto& [region_id, chars] : by_region) {
        for (auto& col : group_columns(std::move(chars), config.grouping.tol_frac)) {
            groups[region_id].push_back(
                refine_double_columns(col, config.grouping.small_frac, config.grouping.tol_frac,
                                      config.grouping.splice, config.grouping.small_skip_frac));
        }
    }
    result.document = order_document(result.layout, groups);
    result.transcript = emit_text(result.document);

    std::string fused_text;
    int col_idx = 0;
    for (std::size_t r = 0; r < result.document.regions.size(); ++r) {
        if (r > 0) fused_text.push_back('\n');
        for (const auto& col : result.document.regions[r].columns) {
            result.column_quads.push_back(column_quad(col));

            ScoredSequence char_seq;
            for (const auto& c : col.chars) {
                char_seq.symbols.push_back(c.label);
                char_seq.probs.push_back(c.score);
            }
            std::string col_text = join_symbols(char_seq.symbols);
            if (line_rec) {
                if (const auto it = line_rec->find(col_idx); it != line_rec->end()) {
                    const FuseResult fr = fuse(char_seq, it->second, config.rescore_mean);
                    if (fr.empty_char_fallback) {
                        result.warnings.push_back("column " + std::to_string(col_idx) +
                                                  ": empty character sequence, using line output");
                    }
                    col_text = join_symbols(fr.output.symbols);
                }
            }
            result.column_texts.push_back(col_text);
            fused_text += col_text;
            fused_text.push_back('\n');
            ++col_idx;
        }
    }
    if (line_rec) result.fused_transcript = fused_text;
    return result;
}

PageResult run_page(const PageManifest& manifest, const PipelineConfig& config) {
    try {
        const auto detections = load_detections(manifest.detections_path);
        const auto mask = read_mask(manifest.mask_path, manifest.mask_scale);
        std::map<int, ScoredSequence> line_rec;
        const bool has_line_rec = manifest.line_rec_path.has_value();
        if (has_line_rec) line_rec = load_line_rec(*manifest.line_rec_path);
        return run_page(detections, mask, has_line_rec ? &line_rec : nullptr, config);
    } catch (const input_error& e) {
        throw input_error("page " + manifest.page_id + ": " + e.what());
    } catch (const std::exception& e) {
        throw pipeline_error("page " + manifest.page_id + ": " + e.what());
    }
}

std::vector<CharDetection> merge_windows(const std::vector<WindowOutput>& windows,
                                         double iou_threshold) {
    std::vector<CharDetection> all;
    for (const auto& w : windows) {
        for (CharDetection det : w.detections) {
            det.box.x_left += w.dx;
            det.box.x_right += w.dx;
            det.box.y_top += w.dy;
            det.box.y_bottom += w.dy;
            all.push_back(std::move(det));
        }
    }
    return nms(std::move(all), iou_threshold);
}

EvalReports run_eval(const std::vector<PageManifest>& manifests, const PipelineConfig& config,
                     bool keep_per_page, bool continue_on_error) {
    EvalReports rep;
    std::size_t line_tp = 0, line_pred = 0, line_gt = 0;
    std::vector<std::size_t> det_tp(config.det_iou_thresholds.size(), 0);
    std::size_t det_pred = 0, det_gt = 0;
    std::size_t nt = 0, de = 0, se = 0, ie = 0;
    std::size_t nt0 = 0, de0 = 0, se0 = 0, ie0 = 0;
    bool any_line = false, any_det = false, any_text = false, any_fused = false;

    for (const auto& manifest : manifests) {
        try {
            const PageResult res = run_page(manifest, config);
            ++rep.pages;
            if (!manifest.ground_truth_path) {
                ++rep.pages_without_gt;
                rep.warnings.push_back("page " + manifest.page_id + ": no ground truth, skipped");
                continue;
            }
            const GroundTruth gt = load_ground_truth(*manifest.ground_truth_path);
            PageEval pe;
            pe.page_id = manifest.page_id;

            if (gt.has_boundary_lines) {
                const auto lr = eval_lines(res.lines, gt.boundary_lines,
                                           config.line_dist_threshold_px);
                line_tp += lr.tp;
                line_pred += lr.pred_count;
                line_gt += lr.gt_count;
                any_line = true;
                pe.lines = lr;
            } else {
                rep.warnings.push_back("page " + manifest.page_id +
                                       ": no boundary-line ground truth, line metric skipped");
            }

            if (gt.has_text_lines) {
                const auto dr = eval_detection(res.column_quads, gt.line_quads,
                                               config.det_iou_thresholds);
                for (std::size_t i = 0; i < dr.per_threshold.size(); ++i) {
                    det_tp[i] += dr.per_threshold[i].tp;
                }
                det_pred += dr.pred_count;
                det_gt += dr.gt_count;
                any_det = true;
                pe.detection = dr;
            } else {
                rep.warnings.push_back("page " + manifest.page_id +
                                       ": no text-line ground truth, detection metric skipped");
            }

            if (!gt.transcript.empty()) {
                const std::string& pred_text =
                    res.fused_transcript ? *res.fused_transcript : res.transcript;
                const auto tr = eval_text(pred_text, gt.transcript);
                nt += tr.nt;
                de += tr.de;
                se += tr.se;
                ie += tr.ie;
                any_text = true;
                pe.text = tr;
                if (res.fused_transcript) {
                    const auto tr0 = eval_text(res.transcript, gt.transcript);
                    nt0 += tr0.nt;
                    de0 += tr0.de;
                    se0 += tr0.se;
                    ie0 += tr0.ie;
                    any_fused = true;
                }
            } else {
                rep.warnings.push_back("page " + manifest.page_id +
                                       ": no transcript ground truth, text metric skipped");
            }
            if (keep_per_page) rep.per_page.push_back(std::move(pe));
        } catch (const std::exception& e) {
            if (!continue_on_error) throw;
            rep.warnings.push_back(std::string("page skipped after error: ") + e.what());
        }
    }

    rep.lines.tp = line_tp;
    rep.lines.pred_count = line_pred;
    rep.lines.gt_count = line_gt;
    if (any_line && (line_pred > 0 || line_gt > 0)) {
        rep.lines.precision = line_pred ? static_cast<double>(line_tp) / line_pred : 0.0;
        rep.lines.recall = line_gt ? static_cast<double>(line_tp) / line_gt : 0.0;
        const double pr = rep.lines.precision + rep.lines.recall;
        rep.lines.f_score = pr > 0 ? 2 * rep.lines.precision * rep.lines.recall / pr : 0.0;
    } else if (any_line) {
        rep.lines.precision = rep.lines.recall = rep.lines.f_score = 1.0;
    }

    rep.detection.pred_count = det_pred;
    rep.detection.gt_count = det_gt;
    for (std::size_t i = 0; i < config.det_iou_thresholds.size(); ++i) {
        DetThresholdResult res;
        res.iou_threshold = config.det_iou_thresholds[i];
        res.tp = det_tp[i];
        if (any_det && (det_pred > 0 || det_gt > 0)) {
            res.precision = det_pred ? static_cast<double>(res.tp) / det_pred : 0.0;
            res.recall = det_gt ? static_cast<double>(res.tp) / det_gt : 0.0;
            const double pr = res.precision + res.recall;
            res.h_mean = pr > 0 ? 2 * res.precision * res.recall / pr : 0.0;
        } else if (any_det) {
            res.precision = res.recall = res.h_mean = 1.0;
        }
        rep.detection.per_threshold.push_back(res);
    }

    if (any_text) {
        rep.text.nt = nt;
        rep.text.de = de;
        rep.text.se = se;
        rep.text.ie = ie;
        const double n = static_cast<double>(nt);
        rep.text.cr = (n - de - se) / n;
        rep.text.ar = rep.text.cr - ie / n;
    }
    if (any_fused) {
        TextEvalReport before;
        before.nt = nt0;
        before.de = de0;
        before.se = se0;
        before.ie = ie0;
        const double n = static_cast<double>(nt0);
        before.cr = (n - de0 - se0) / n;
        before.ar = before.cr - ie0 / n;
        rep.text_before_rescore = before;
    }
    return rep;
}

DebugOverlay build_overlay(const PageResult& result, double page_width, double page_height) {
    DebugOverlay overlay;
    overlay.width = static_cast<int>(std::lround(page_width));
    overlay.height = static_cast<int>(std::lround(page_height));
    overlay.boundary_lines = result.lines;

    std::set<double> xs, ys;
    for (const auto& region : result.layout.regions) {
        if (region.rect.x_left > 0.0) xs.insert(region.rect.x_left);
        if (region.rect.y_top > 0.0) ys.insert(region.rect.y_top);
    }
    overlay.cut_xs.assign(xs.begin(), xs.end());
    overlay.cut_ys.assign(ys.begin(), ys.end());

    int idx = 1;
    for (const auto& quad : result.column_quads) {
        const AABox box = quad_bounds(quad);
        overlay.column_boxes.push_back(box);
        overlay.order_labels.emplace_back(Point{box.x_left + 2.0, box.y_top + 2.0}, idx++);
    }
    return overlay;
}

void render_debug(const DebugOverlay& overlay, const std::filesystem::path& png_path) {
    ImageRGB img(std::max(overlay.width, 1), std::max(overlay.height, 1));
    for (double x : overlay.cut_xs) {
        draw_line(img, {x, 0.0}, {x, static_cast<double>(overlay.height)}, 1, 150, 180, 255);
    }
    for (double y : overlay.cut_ys) {
        draw_line(img, {0.0, y}, {static_cast<double>(overlay.width), y}, 1, 150, 180, 255);
    }
    for (const auto& seg : overlay.boundary_lines) draw_line(img, seg.p0, seg.p1, 3, 220, 40, 40);
    for (const auto& box : overlay.column_boxes) draw_box(img, box, 2, 30, 150, 30);
    for (const auto& [anchor, value] : overlay.order_labels) {
        draw_number(img, static_cast<int>(std::lround(anchor.x)),
                    static_cast<int>(std::lround(anchor.y)), value, 2, 0, 0, 0);
    }
    write_png_rgb(png_path, img);
}

}  // namespace histdoc
