#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "histdoc/config.hpp"
#include "histdoc/formats.hpp"
#include "histdoc/image_io.hpp"
#include "histdoc/pipeline.hpp"
#include "histdoc/synth.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace histdoc;

namespace {

PipelineConfig resolve_config(const std::string& config_path) {
    if (config_path.empty()) return PipelineConfig{};
    return load_config_file(config_path);
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot write file: " + path.string());
    out << text;
}

void emit_json(const json& j, const std::string& output) {
    if (output.empty()) {
        std::cout << j.dump(2) << '\n';
    } else {
        std::ofstream out(output, std::ios::binary);
        if (!out) throw input_error("cannot write file: " + output);
        out << j.dump(2) << '\n';
    }
}

std::vector<PageManifest> collect_manifests(const std::string& manifest,
                                            const std::string& manifest_list) {
    std::vector<PageManifest> manifests;
    if (!manifest.empty()) manifests.push_back(load_manifest(manifest));
    if (!manifest_list.empty()) {
        for (const auto& p : load_manifest_list(manifest_list)) {
            manifests.push_back(load_manifest(p));
        }
    }
    if (manifests.empty()) throw input_error("no manifests given");
    return manifests;
}

json segment_json(const LineSegment& s) {
    return json::array({{s.p0.x, s.p0.y}, {s.p1.x, s.p1.y}});
}

json page_json(const PageManifest& manifest, const PageResult& res) {
    json j{{"page_id", manifest.page_id}, {"transcript", res.transcript}};
    if (res.fused_transcript) j["fused_transcript"] = *res.fused_transcript;
    j["lines"] = json::array();
    for (const auto& seg : res.lines) j["lines"].push_back(segment_json(seg));

    j["regions"] = json::array();
    std::size_t col_idx = 0;
    for (const auto& region : res.document.regions) {
        const Region* info = res.layout.find(region.region_id);
        json jr{{"region_id", region.region_id}};
        if (info) {
            jr["rect"] = {info->rect.x_left, info->rect.y_top, info->rect.x_right,
                          info->rect.y_bottom};
        }
        jr["columns"] = json::array();
        for (const auto& col : region.columns) {
            json quad = json::array();
            for (const auto& p : res.column_quads[col_idx].v) quad.push_back({p.x, p.y});
            json jc{{"quad", quad}, {"text", res.column_texts[col_idx]}};
            json chars = json::array();
            for (const auto& c : col.chars) {
                chars.push_back(json{{"box", {c.box.x_left, c.box.y_top, c.box.x_right,
                                              c.box.y_bottom}},
                                     {"label", c.label},
                                     {"score", c.score}});
            }
            jc["chars"] = chars;
            jr["columns"].push_back(jc);
            ++col_idx;
        }
        j["regions"].push_back(jr);
    }
    return j;
}

json line_report_json(const LineEvalReport& r) {
    return json{{"precision", r.precision}, {"recall", r.recall}, {"f_score", r.f_score},
                {"tp", r.tp},               {"pred", r.pred_count}, {"gt", r.gt_count}};
}

json det_report_json(const DetEvalReport& r) {
    json thresholds = json::array();
    for (const auto& t : r.per_threshold) {
        thresholds.push_back(json{{"iou", t.iou_threshold},
                                  {"precision", t.precision},
                                  {"recall", t.recall},
                                  {"h_mean", t.h_mean},
                                  {"tp", t.tp}});
    }
    return json{{"thresholds", thresholds}, {"pred", r.pred_count}, {"gt", r.gt_count}};
}

json text_report_json(const TextEvalReport& r) {
    return json{{"nt", r.nt}, {"de", r.de}, {"se", r.se},
                {"ie", r.ie}, {"cr", r.cr}, {"ar", r.ar}};
}

int cmd_lines(const std::string& config_path, const std::string& mask_path, int scale,
              const std::string& output) {
    const auto cfg = resolve_config(config_path);
    const auto mask = read_mask(mask_path, scale);
    const auto lines = detect_lines(mask, cfg);
    const double w = static_cast<double>(mask.width) * mask.scale;
    const double h = static_cast<double>(mask.height) * mask.scale;
    json arr = json::array();
    for (const auto& s : lines) arr.push_back(segment_json(s));
    emit_json(json{{"page_width", w}, {"page_height", h}, {"segments", arr}}, output);
    return 0;
}

int cmd_parse(const std::string& config_path, const std::string& manifest,
              const std::string& manifest_list, const std::string& out_dir,
              bool continue_on_error) {
    const auto cfg = resolve_config(config_path);
    const auto manifests = collect_manifests(manifest, manifest_list);
    if (out_dir.empty() && manifests.size() > 1) {
        throw input_error("--out-dir is required with a manifest list");
    }
    if (!out_dir.empty()) fs::create_directories(out_dir);

    bool failed = false;
    for (const auto& m : manifests) {
        try {
            const PageResult res = run_page(m, cfg);
            for (const auto& w : res.warnings) {
                std::cerr << "warning: page " << m.page_id << ": " << w << '\n';
            }
            if (out_dir.empty()) {
                std::cout << (res.fused_transcript ? *res.fused_transcript : res.transcript);
            } else {
                const fs::path base = fs::path(out_dir) / m.page_id;
                write_text_file(base.string() + ".txt", res.transcript);
                if (res.fused_transcript) {
                    write_text_file(base.string() + ".fused.txt", *res.fused_transcript);
                }
                std::ofstream out(base.string() + ".json", std::ios::binary);
                if (!out) throw input_error("cannot write file: " + base.string() + ".json");
                out << page_json(m, res).dump(2) << '\n';
            }
        } catch (const std::exception& e) {
            if (!continue_on_error) throw;
            failed = true;
            std::cerr << "error: " << e.what() << '\n';
        }
    }
    (void)failed;
    return 0;
}

int cmd_rescore(const std::string& config_path, const std::string& chars_path,
                const std::string& lines_path, const std::string& output) {
    const auto cfg = resolve_config(config_path);
    const auto char_cols = load_line_rec(chars_path);
    const auto line_cols = load_line_rec(lines_path);

    json out = json::array();
    for (const auto& [col, char_seq] : char_cols) {
        ScoredSequence fused = char_seq;
        if (const auto it = line_cols.find(col); it != line_cols.end()) {
            const FuseResult fr = fuse(char_seq, it->second, cfg.rescore_mean);
            if (fr.empty_char_fallback) {
                std::cerr << "warning: column " << col
                          << ": empty character sequence, using line output\n";
            }
            fused = fr.output;
        }
        out.push_back(json{{"column", col}, {"symbols", fused.symbols}, {"probs", fused.probs}});
    }
    emit_json(out, output);
    return 0;
}

int cmd_eval(const std::string& config_path, const std::string& manifest,
             const std::string& manifest_list, const std::string& output, bool per_page,
             bool continue_on_error) {
    const auto cfg = resolve_config(config_path);
    const auto manifests = collect_manifests(manifest, manifest_list);
    const EvalReports rep = run_eval(manifests, cfg, per_page, continue_on_error);
    for (const auto& w : rep.warnings) std::cerr << "warning: " << w << '\n';

    json j{{"pages", rep.pages},
           {"pages_without_gt", rep.pages_without_gt},
           {"lines", line_report_json(rep.lines)},
           {"detection", det_report_json(rep.detection)},
           {"text", text_report_json(rep.text)}};
    if (rep.text_before_rescore) {
        j["text_before_rescore"] = text_report_json(*rep.text_before_rescore);
    }
    if (per_page) {
        json pages = json::array();
        for (const auto& pe : rep.per_page) {
            json jp{{"page_id", pe.page_id}};
            if (pe.lines) jp["lines"] = line_report_json(*pe.lines);
            if (pe.detection) jp["detection"] = det_report_json(*pe.detection);
            if (pe.text) jp["text"] = text_report_json(*pe.text);
            pages.push_back(jp);
        }
        j["per_page"] = pages;
    }
    emit_json(j, output);
    return 0;
}

struct SynthCliOptions {
    SynthSpec spec;
    std::string out_dir;
    int pages = 1;
    double line_rec_confidence = 0.0;
    std::string mask_format = "pgm";
};

int cmd_synth(const SynthCliOptions& opt) {
    if (opt.mask_format != "pgm" && opt.mask_format != "png") {
        throw input_error("--mask-format must be pgm or png");
    }
    fs::create_directories(opt.out_dir);
    std::string manifest_list;
    for (int i = 0; i < opt.pages; ++i) {
        SynthSpec spec = opt.spec;
        spec.seed = opt.spec.seed + static_cast<std::uint64_t>(i);
        const SynthPage clean = generate(spec);
        const bool corrupted = spec.jitter_px > 0 || spec.label_flip_prob > 0 ||
                               spec.speck_count > 0;
        const SynthPage page = corrupted ? corrupt(clean, spec) : clean;

        char id[32];
        std::snprintf(id, sizeof(id), "page-%04d", i + 1);
        const fs::path dir = fs::path(opt.out_dir) / id;
        fs::create_directories(dir);

        save_detections(dir / "detections.json", page.detections);
        const std::string mask_name = "mask." + opt.mask_format;
        if (opt.mask_format == "pgm") {
            write_mask_pgm(dir / mask_name, page.mask);
        } else {
            write_mask_png(dir / mask_name, page.mask);
        }

        GroundTruth gt;
        gt.boundary_lines = clean.gt_lines;
        gt.has_boundary_lines = true;
        gt.line_quads = clean.gt_line_quads;
        gt.line_texts = clean.gt_line_texts;
        gt.has_text_lines = true;
        gt.transcript = clean.gt_transcript;
        save_ground_truth(dir / "gt.json", gt);

        PageManifest manifest;
        manifest.page_id = id;
        manifest.detections_path = dir / "detections.json";
        manifest.mask_path = dir / mask_name;
        manifest.mask_scale = page.mask.scale;
        manifest.ground_truth_path = dir / "gt.json";
        if (opt.line_rec_confidence > 0.0) {
            save_line_rec(dir / "line_rec.json",
                          oracle_line_rec(clean.gt_document, opt.line_rec_confidence));
            manifest.line_rec_path = dir / "line_rec.json";
        }
        save_manifest(dir / "manifest.json", manifest);
        manifest_list += (fs::path(id) / "manifest.json").string() + "\n";
    }
    write_text_file(fs::path(opt.out_dir) / "manifests.txt", manifest_list);
    return 0;
}

int cmd_merge_windows(const std::string& config_path, const std::string& input,
                      const std::string& output) {
    const auto cfg = resolve_config(config_path);
    const auto windows = load_windows(input);
    const auto merged = merge_windows(windows, cfg.nms_iou);
    json arr = json::array();
    for (const auto& d : merged) {
        arr.push_back(json{{"box", {d.box.x_left, d.box.y_top, d.box.x_right, d.box.y_bottom}},
                           {"label", d.label},
                           {"score", d.score}});
    }
    emit_json(arr, output);
    return 0;
}

int cmd_render_debug(const std::string& config_path, const std::string& manifest_path,
                     const std::string& output) {
    const auto cfg = resolve_config(config_path);
    const auto manifest = load_manifest(manifest_path);
    const PageResult res = run_page(manifest, cfg);
    const auto overlay = build_overlay(res, res.layout.page_width, res.layout.page_height);
    render_debug(overlay, output);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reading-order restoration for historical document pages"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "Pipeline config file (flat key = value)")
        ->envname("HISTDOC_CONFIG");

    // lines
    auto* lines = app.add_subcommand("lines", "Detect boundary lines in a layout mask");
    std::string lines_mask, lines_out;
    int lines_scale = 1;
    lines->add_option("--mask", lines_mask, "Mask image (PGM or PNG, nonzero = line)")
        ->required();
    lines->add_option("--scale", lines_scale, "Page pixels per mask pixel")->default_val(1);
    lines->add_option("-o,--output", lines_out, "Output JSON (default: stdout)");

    // parse
    auto* parse = app.add_subcommand("parse", "Restore reading-order text for pages");
    std::string parse_manifest, parse_list, parse_out_dir;
    bool parse_continue = false;
    parse->add_option("--manifest", parse_manifest, "Single page manifest");
    parse->add_option("--manifest-list", parse_list, "File with one manifest path per line");
    parse->add_option("--out-dir", parse_out_dir, "Directory for per-page outputs");
    parse->add_flag("--continue-on-error", parse_continue, "Keep going after page errors");

    // rescore
    auto* rescore = app.add_subcommand("rescore", "Fuse character and text-line recognition");
    std::string rescore_chars, rescore_lines, rescore_out;
    rescore->add_option("--chars", rescore_chars, "Character sequences (line-rec JSON)")
        ->required();
    rescore->add_option("--lines", rescore_lines, "Text-line sequences (line-rec JSON)")
        ->required();
    rescore->add_option("-o,--output", rescore_out, "Output JSON (default: stdout)");

    // eval
    auto* eval = app.add_subcommand("eval", "Evaluate pages against ground truth");
    std::string eval_manifest, eval_list, eval_out;
    bool eval_per_page = false, eval_continue = false;
    eval->add_option("--manifest", eval_manifest, "Single page manifest");
    eval->add_option("--manifest-list", eval_list, "File with one manifest path per line");
    eval->add_option("-o,--output", eval_out, "Report JSON (default: stdout)");
    eval->add_flag("--per-page", eval_per_page, "Include a per-page breakdown");
    eval->add_flag("--continue-on-error", eval_continue, "Keep going after page errors");

    // synth
    auto* synth = app.add_subcommand("synth", "Generate synthetic pages with ground truth");
    SynthCliOptions so;
    std::uint64_t synth_seed = 1;
    synth->add_option("--out-dir", so.out_dir, "Output directory")->required();
    synth->add_option("--pages", so.pages, "Number of pages")->default_val(1);
    synth->add_option("--seed", synth_seed, "Base seed (page i uses seed + i)")->default_val(1);
    synth->add_option("--width", so.spec.page_width)->default_val(1000.0);
    synth->add_option("--height", so.spec.page_height)->default_val(1200.0);
    synth->add_option("--h-lines", so.spec.h_lines)->default_val(1);
    synth->add_option("--v-lines", so.spec.v_lines)->default_val(0);
    synth->add_option("--min-cols", so.spec.min_columns)->default_val(3);
    synth->add_option("--max-cols", so.spec.max_columns)->default_val(8);
    synth->add_option("--min-chars", so.spec.min_chars)->default_val(4);
    synth->add_option("--max-chars", so.spec.max_chars)->default_val(8);
    synth->add_option("--double-col-prob", so.spec.double_column_prob)->default_val(0.3);
    synth->add_option("--max-run-rows", so.spec.max_run_rows)->default_val(1);
    synth->add_option("--jitter", so.spec.jitter_px)->default_val(0.0);
    synth->add_option("--flip-prob", so.spec.label_flip_prob)->default_val(0.0);
    synth->add_option("--specks", so.spec.speck_count)->default_val(0);
    synth->add_option("--speck-size", so.spec.speck_size)->default_val(2);
    synth->add_option("--scale", so.spec.mask_scale)->default_val(4);
    synth->add_option("--band", so.spec.band_px)->default_val(20.0);
    synth->add_option("--mask-format", so.mask_format, "pgm or png")->default_val("pgm");
    synth->add_option("--line-rec-confidence", so.line_rec_confidence,
                      "Emit an oracle line_rec.json at this confidence (0 = off)")
        ->default_val(0.0);

    // merge-windows
    auto* merge = app.add_subcommand("merge-windows", "Merge sliding-window detections via NMS");
    std::string merge_input, merge_out;
    merge->add_option("--input", merge_input, "Windows JSON")->required();
    merge->add_option("-o,--output", merge_out, "Output detections JSON (default: stdout)");

    // render-debug
    auto* debug = app.add_subcommand("render-debug", "Render a page overlay PNG");
    std::string debug_manifest, debug_out;
    debug->add_option("--manifest", debug_manifest, "Page manifest")->required();
    debug->add_option("-o,--output", debug_out, "Output PNG")->required();

    try {
        app.parse(argc, argv);
        if (*lines) return cmd_lines(config_path, lines_mask, lines_scale, lines_out);
        if (*parse) {
            return cmd_parse(config_path, parse_manifest, parse_list, parse_out_dir,
                             parse_continue);
        }
        if (*rescore) return cmd_rescore(config_path, rescore_chars, rescore_lines, rescore_out);
        if (*eval) {
            return cmd_eval(config_path, eval_manifest, eval_list, eval_out, eval_per_page,
                            eval_continue);
        }
        if (*synth) {
            so.spec.seed = synth_seed;
            return cmd_synth(so);
        }
        if (*merge) return cmd_merge_windows(config_path, merge_input, merge_out);
        if (*debug) return cmd_render_debug(config_path, debug_manifest, debug_out);
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
