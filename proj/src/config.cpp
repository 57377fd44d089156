#include "histdoc/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "histdoc/formats.hpp"

namespace histdoc {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view value, int line_no) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw input_error("config line " + std::to_string(line_no) + ": bad number '" +
                          std::string(value) + "'");
    }
    return out;
}

long parse_int(std::string_view value, int line_no) {
    long out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw input_error("config line " + std::to_string(line_no) + ": bad integer '" +
                          std::string(value) + "'");
    }
    return out;
}

std::vector<double> parse_list(std::string_view value, int line_no) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= value.size()) {
        const std::size_t comma = value.find(',', start);
        const std::string_view item =
            trim(value.substr(start, comma == std::string_view::npos ? comma : comma - start));
        if (!item.empty()) out.push_back(parse_double(item, line_no));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (out.empty()) {
        throw input_error("config line " + std::to_string(line_no) + ": empty list");
    }
    return out;
}

}  // namespace

PipelineConfig parse_config(std::string_view text) {
    PipelineConfig cfg;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw input_error("config line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key{trim(line.substr(0, eq))};
        const std::string_view value = trim(line.substr(eq + 1));

        if (key == "min_area") {
            const long v = parse_int(value, line_no);
            if (v < 0) throw input_error("config line " + std::to_string(line_no) + ": min_area < 0");
            cfg.min_area = static_cast<std::size_t>(v);
        } else if (key == "theta_step_deg") {
            cfg.hough.theta_step_deg = parse_double(value, line_no);
        } else if (key == "rho_step_px") {
            cfg.hough.rho_step_px = parse_double(value, line_no);
        } else if (key == "vote_threshold") {
            cfg.hough.vote_threshold = static_cast<int>(parse_int(value, line_no));
        } else if (key == "merge_slope_deg") {
            cfg.hough.merge_slope_deg = parse_double(value, line_no);
        } else if (key == "merge_intercept_px") {
            cfg.hough.merge_intercept_px = parse_double(value, line_no);
        } else if (key == "segment_gap_px") {
            cfg.hough.segment_gap_px = parse_double(value, line_no);
        } else if (key == "min_segment_len_px") {
            cfg.hough.min_segment_len_px = parse_double(value, line_no);
        } else if (key == "refit_radius_px") {
            cfg.hough.refit_radius_px = parse_double(value, line_no);
        } else if (key == "max_peaks") {
            cfg.hough.max_peaks = static_cast<int>(parse_int(value, line_no));
        } else if (key == "nms_iou") {
            cfg.nms_iou = parse_double(value, line_no);
        } else if (key == "tol_frac") {
            cfg.grouping.tol_frac = parse_double(value, line_no);
        } else if (key == "small_frac") {
            cfg.grouping.small_frac = parse_double(value, line_no);
        } else if (key == "small_skip_frac") {
            cfg.grouping.small_skip_frac = parse_double(value, line_no);
        } else if (key == "splice_order") {
            if (value == "right-then-left") cfg.grouping.splice = SpliceOrder::RightThenLeft;
            else if (value == "row-interleave") cfg.grouping.splice = SpliceOrder::RowInterleave;
            else throw input_error("config line " + std::to_string(line_no) + ": bad splice_order");
        } else if (key == "region_order") {
            if (value == "top-right") cfg.region_order = RegionOrder::TopThenRight;
            else if (value == "right-top") cfg.region_order = RegionOrder::RightThenTop;
            else throw input_error("config line " + std::to_string(line_no) + ": bad region_order");
        } else if (key == "dist_threshold_px") {
            cfg.line_dist_threshold_px = parse_double(value, line_no);
        } else if (key == "det_iou_thresholds") {
            cfg.det_iou_thresholds = parse_list(value, line_no);
        } else if (key == "rescore_mean_scope") {
            if (value == "sequence") cfg.rescore_mean = MeanScope::WholeSequence;
            else if (value == "mismatch") cfg.rescore_mean = MeanScope::MismatchOnly;
            else throw input_error("config line " + std::to_string(line_no) + ": bad rescore_mean_scope");
        } else {
            throw input_error("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }
    return cfg;
}

PipelineConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const input_error& e) {
        throw input_error(path.string() + ": " + e.what());
    }
}

std::string default_config_text() {
    return
        "# Pipeline defaults.\n"
        "min_area = 50              # mask-scale pixels, layout-mask noise filter\n"
        "theta_step_deg = 1\n"
        "rho_step_px = 1\n"
        "vote_threshold = 0         # 0 = 0.3 * min(page width, page height)\n"
        "merge_slope_deg = 45\n"
        "merge_intercept_px = 200\n"
        "segment_gap_px = 30\n"
        "min_segment_len_px = 50\n"
        "refit_radius_px = 25\n"
        "max_peaks = 128\n"
        "nms_iou = 0.5\n"
        "tol_frac = 0.5             # column join threshold, fraction of median char width\n"
        "small_frac = 0.67          # double-column character cutoff\n"
        "small_skip_frac = 0.8\n"
        "splice_order = right-then-left\n"
        "region_order = top-right\n"
        "dist_threshold_px = 50     # boundary-line match threshold\n"
        "det_iou_thresholds = 0.5, 0.6, 0.7\n"
        "rescore_mean_scope = sequence\n";
}

}  // namespace histdoc
