#include "histdoc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "histdoc/text.hpp"

namespace histdoc {

namespace {

// Page geometry of the generator, in page pixels. Chosen so that edge
// joins survive box translations up to a quarter glyph: every pair of
// edges is either shared (difference 0) or at least 52 px apart, while
// the grouping threshold is half the 48 px glyph width.
constexpr double kGlyphW = 48.0;
constexpr double kGlyphH = 48.0;
constexpr double kColPitch = 84.0;
constexpr double kRowPitch = 64.0;
constexpr double kSmallW = 16.0;
constexpr double kSmallH = 24.0;
constexpr double kSmallRowPitch = 40.0;
constexpr double kRegionMargin = 40.0;
// Boundary lines keep this distance from page edges and each other, so
// intercept-based deduplication (200 px) can never merge distinct lines.
constexpr double kLineSep = 340.0;

void validate(const SynthSpec& spec) {
    const auto bad = [](const char* what) {
        throw std::invalid_argument(std::string("SynthSpec: ") + what);
    };
    if (spec.page_width <= 0 || spec.page_height <= 0) bad("page size must be positive");
    if (spec.h_lines < 0 || spec.v_lines < 0) bad("line counts must be >= 0");
    if (spec.min_columns < 1 || spec.max_columns < spec.min_columns) bad("bad column range");
    if (spec.min_chars < 1 || spec.max_chars < spec.min_chars) bad("bad chars range");
    if (spec.double_column_prob < 0 || spec.double_column_prob > 1) bad("bad probability");
    if (spec.label_flip_prob < 0 || spec.label_flip_prob > 1) bad("bad probability");
    if (spec.jitter_px < 0) bad("jitter must be >= 0");
    if (spec.speck_count < 0 || spec.speck_size < 1) bad("bad speck parameters");
    if (spec.mask_scale < 1) bad("mask scale must be >= 1");
    if (spec.band_px <= 0) bad("band must be positive");
    if (spec.max_run_rows < 1) bad("max_run_rows must be >= 1");
}

std::vector<double> place_cuts(std::mt19937_64& rng, int count, double limit) {
    std::vector<double> cuts;
    std::uniform_real_distribution<double> dist(kLineSep, limit - kLineSep);
    for (int i = 0; i < count; ++i) {
        bool placed = false;
        for (int attempt = 0; attempt < 5000 && !placed; ++attempt) {
            const double c = dist(rng);
            placed = std::all_of(cuts.begin(), cuts.end(),
                                 [c](double o) { return std::abs(o - c) >= kLineSep; });
            if (placed) cuts.push_back(c);
        }
        if (!placed) {
            throw std::invalid_argument("SynthSpec: infeasible, boundary lines do not fit the page");
        }
    }
    std::sort(cuts.begin(), cuts.end());
    return cuts;
}

}  // namespace

BinaryMask render_mask(const std::vector<LineSegment>& lines, double page_width,
                       double page_height, int scale, double band_px) {
    if (scale < 1) throw std::invalid_argument("render_mask: scale must be >= 1");
    if (band_px <= 0) throw std::invalid_argument("render_mask: band must be positive");

    const int mw = static_cast<int>(std::llround(page_width / scale));
    const int mh = static_cast<int>(std::llround(page_height / scale));
    BinaryMask mask(mw, mh, scale);
    for (int my = 0; my < mh; ++my) {
        const double py = (my + 0.5) * scale - 0.5;
        for (int mx = 0; mx < mw; ++mx) {
            const double px = (mx + 0.5) * scale - 0.5;
            for (const auto& seg : lines) {
                if (point_segment_distance({px, py}, seg) <= band_px) {
                    mask.set(mx, my, true);
                    break;
                }
            }
        }
    }
    return mask;
}

SynthPage generate(const SynthSpec& spec) {
    validate(spec);
    const auto symbols = utf8_symbols(spec.alphabet);
    if (symbols.size() < 2) throw std::invalid_argument("SynthSpec: alphabet needs >= 2 symbols");

    std::mt19937_64 rng(spec.seed);
    SynthPage page;
    page.spec = spec;

    const auto ys = place_cuts(rng, spec.h_lines, spec.page_height);
    const auto xs = place_cuts(rng, spec.v_lines, spec.page_width);
    for (double y : ys) page.gt_lines.push_back({{0.0, y}, {spec.page_width, y}});
    for (double x : xs) page.gt_lines.push_back({{x, 0.0}, {x, spec.page_height}});

    page.gt_layout = partition_page(page.gt_lines, spec.page_width, spec.page_height);

    std::uniform_real_distribution<double> score_dist(0.8, 0.99);
    std::uniform_int_distribution<std::size_t> sym_dist(0, symbols.size() - 1);
    const auto make_char = [&](double l, double t, double w, double h) {
        CharDetection c;
        c.box = {l, t, l + w, t + h};
        c.label = symbols[sym_dist(rng)];
        c.score = score_dist(rng);
        return c;
    };

    std::map<int, std::vector<ColumnGroup>> groups_by_region;
    for (const auto& region : page.gt_layout.regions) {
        AABox inner = region.rect;
        inner.x_left += kRegionMargin;
        inner.y_top += kRegionMargin;
        inner.x_right -= kRegionMargin;
        inner.y_bottom -= kRegionMargin;

        const int fit_cols = inner.width() >= kGlyphW
                                 ? 1 + static_cast<int>((inner.width() - kGlyphW) / kColPitch)
                                 : 0;
        if (fit_cols < spec.min_columns) {
            throw std::invalid_argument("SynthSpec: infeasible, region too narrow for columns");
        }
        const int n_cols = std::uniform_int_distribution<int>(
            spec.min_columns, std::min(spec.max_columns, fit_cols))(rng);

        for (int ci = 0; ci < n_cols; ++ci) {
            const double x_right = inner.x_right - ci * kColPitch;
            const double x_left = x_right - kGlyphW;

            int run_rows = 0;
            if (std::bernoulli_distribution(spec.double_column_prob)(rng)) {
                run_rows = std::uniform_int_distribution<int>(1, spec.max_run_rows)(rng);
            }
            int fit_rows = static_cast<int>(
                (inner.height() - run_rows * kSmallRowPitch) / kRowPitch);
            while (run_rows > 0 && fit_rows < spec.min_chars) {
                --run_rows;
                fit_rows = static_cast<int>(
                    (inner.height() - run_rows * kSmallRowPitch) / kRowPitch);
            }
            if (fit_rows < spec.min_chars) {
                throw std::invalid_argument("SynthSpec: infeasible, region too short for columns");
            }
            const int n_big = std::uniform_int_distribution<int>(
                spec.min_chars, std::min(spec.max_chars, fit_rows))(rng);
            // The width median must stay on full-width glyphs.
            run_rows = std::min(run_rows, n_big / 2);
            const int run_pos = run_rows > 0
                                    ? std::uniform_int_distribution<int>(0, n_big)(rng)
                                    : 0;

            ColumnGroup group;
            std::vector<CharDetection> main_buf;
            const auto flush_main = [&] {
                if (!main_buf.empty()) group.push_back(make_column(main_buf));
                main_buf.clear();
            };

            double y = inner.y_top;
            for (int slot = 0; slot <= n_big; ++slot) {
                if (run_rows > 0 && slot == run_pos) {
                    flush_main();
                    std::vector<CharDetection> right_sub, left_sub;
                    for (int row = 0; row < run_rows; ++row) {
                        right_sub.push_back(make_char(x_right - kSmallW, y, kSmallW, kSmallH));
                        left_sub.push_back(make_char(x_left, y, kSmallW, kSmallH));
                        y += kSmallRowPitch;
                    }
                    group.push_back(make_column(right_sub));
                    group.push_back(make_column(left_sub));
                    ++page.double_column_runs;
                }
                if (slot < n_big) {
                    main_buf.push_back(make_char(x_left, y, kGlyphW, kGlyphH));
                    y += kRowPitch;
                }
            }
            flush_main();

            for (const auto& frag : group) {
                for (const auto& c : frag.chars) page.detections.push_back(c);
            }
            groups_by_region[region.id].push_back(std::move(group));
            ++page.physical_columns;
        }
    }

    // Ground-truth document straight from construction order; the
    // pipeline's own ordering code is deliberately not involved.
    for (const auto& region : page.gt_layout.regions) {
        const auto it = groups_by_region.find(region.id);
        if (it == groups_by_region.end()) continue;
        DocumentRegion dr;
        dr.region_id = region.id;
        for (const auto& group : it->second) {
            for (const auto& frag : group) dr.columns.push_back(frag);
        }
        page.gt_document.regions.push_back(std::move(dr));
    }

    for (const auto& region : page.gt_document.regions) {
        for (const auto& col : region.columns) {
            AABox box = col.chars.front().box;
            std::string text;
            for (const auto& c : col.chars) {
                box.x_left = std::min(box.x_left, c.box.x_left);
                box.y_top = std::min(box.y_top, c.box.y_top);
                box.x_right = std::max(box.x_right, c.box.x_right);
                box.y_bottom = std::max(box.y_bottom, c.box.y_bottom);
                text += c.label;
            }
            page.gt_line_quads.push_back(Quad::from_box(box));
            page.gt_line_texts.push_back(std::move(text));
        }
    }
    page.gt_transcript = emit_text(page.gt_document);
    page.mask = render_mask(page.gt_lines, spec.page_width, spec.page_height,
                            spec.mask_scale, spec.band_px);
    std::shuffle(page.detections.begin(), page.detections.end(), rng);
    return page;
}

SynthPage corrupt(const SynthPage& page, const SynthSpec& spec) {
    validate(spec);
    const auto symbols = utf8_symbols(spec.alphabet);
    std::mt19937_64 rng(spec.seed * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL);

    SynthPage out = page;
    std::uniform_real_distribution<double> jitter(-spec.jitter_px, spec.jitter_px);
    std::bernoulli_distribution flip(spec.label_flip_prob);
    std::uniform_real_distribution<double> low_score(0.2, 0.45);
    const double w = page.spec.page_width, h = page.spec.page_height;

    for (auto& det : out.detections) {
        double dx = jitter(rng), dy = jitter(rng);
        dx = std::clamp(dx, -det.box.x_left, w - det.box.x_right);
        dy = std::clamp(dy, -det.box.y_top, h - det.box.y_bottom);
        det.box.x_left += dx;
        det.box.x_right += dx;
        det.box.y_top += dy;
        det.box.y_bottom += dy;

        if (flip(rng) && symbols.size() >= 2) {
            std::size_t pick =
                std::uniform_int_distribution<std::size_t>(0, symbols.size() - 2)(rng);
            if (symbols[pick] == det.label) pick = symbols.size() - 1;
            det.label = symbols[pick];
            det.score = low_score(rng);
        }
    }

    const int s = spec.speck_size;
    if (spec.speck_count > 0 && out.mask.width > s && out.mask.height > s) {
        std::uniform_int_distribution<int> px(0, out.mask.width - s);
        std::uniform_int_distribution<int> py(0, out.mask.height - s);
        for (int i = 0; i < spec.speck_count; ++i) {
            for (int attempt = 0; attempt < 200; ++attempt) {
                const int sx = px(rng), sy = py(rng);
                bool clear = true;
                for (int y = sy - 1; y <= sy + s && clear; ++y) {
                    for (int x = sx - 1; x <= sx + s && clear; ++x) {
                        if (out.mask.in_bounds(x, y) && out.mask.at(x, y)) clear = false;
                    }
                }
                if (!clear) continue;
                for (int y = sy; y < sy + s; ++y) {
                    for (int x = sx; x < sx + s; ++x) out.mask.set(x, y, true);
                }
                break;
            }
        }
    }
    return out;
}

std::vector<ScoredSequence> oracle_line_rec(const Document& gt_doc, double confidence) {
    std::vector<ScoredSequence> out;
    for (const auto& region : gt_doc.regions) {
        for (const auto& col : region.columns) {
            ScoredSequence seq;
            for (const auto& c : col.chars) {
                seq.symbols.push_back(c.label);
                seq.probs.push_back(confidence);
            }
            out.push_back(std::move(seq));
        }
    }
    return out;
}

}  // namespace histdoc
