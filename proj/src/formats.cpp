#include "histdoc/formats.hpp"

#include <fstream>

#include <json.hpp>

namespace histdoc {

namespace {

using json = nlohmann::ordered_json;

json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open file: " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw input_error(path.string() + ": " + e.what());
    }
}

void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot write file: " + path.string());
    out << j.dump(2) << '\n';
}

Point parse_point(const json& j, const std::string& ctx) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw input_error(ctx + ": expected [x, y]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

json point_json(const Point& p) {
    return json::array({p.x, p.y});
}

CharDetection parse_detection(const json& j, const std::string& ctx) {
    if (!j.is_object()) throw input_error(ctx + ": expected an object");
    if (!j.contains("box") || !j["box"].is_array() || j["box"].size() != 4) {
        throw input_error(ctx + ": expected \"box\": [l, t, r, b]");
    }
    CharDetection det;
    for (int k = 0; k < 4; ++k) {
        if (!j["box"][k].is_number()) throw input_error(ctx + ": box coordinates must be numbers");
    }
    det.box = {j["box"][0].get<double>(), j["box"][1].get<double>(),
               j["box"][2].get<double>(), j["box"][3].get<double>()};
    if (det.box.x_left >= det.box.x_right) {
        throw input_error(ctx + ": x_left must be smaller than x_right");
    }
    if (det.box.y_top >= det.box.y_bottom) {
        throw input_error(ctx + ": y_top must be smaller than y_bottom");
    }
    if (!j.contains("label") || !j["label"].is_string() || j["label"].get<std::string>().empty()) {
        throw input_error(ctx + ": missing label");
    }
    det.label = j["label"].get<std::string>();
    if (!j.contains("score") || !j["score"].is_number()) {
        throw input_error(ctx + ": missing score");
    }
    det.score = j["score"].get<double>();
    if (det.score < 0.0 || det.score > 1.0) {
        throw input_error(ctx + ": score out of [0, 1]");
    }
    return det;
}

json detection_json(const CharDetection& det) {
    return json{{"box", {det.box.x_left, det.box.y_top, det.box.x_right, det.box.y_bottom}},
                {"label", det.label},
                {"score", det.score}};
}

LineSegment parse_segment(const json& j, const std::string& ctx) {
    if (!j.is_array() || j.size() != 2) throw input_error(ctx + ": expected [[x0,y0],[x1,y1]]");
    return {parse_point(j[0], ctx), parse_point(j[1], ctx)};
}

json segment_json(const LineSegment& s) {
    return json::array({point_json(s.p0), point_json(s.p1)});
}

}  // namespace

std::vector<CharDetection> load_detections(const std::filesystem::path& path) {
    const json j = load_json(path);
    if (!j.is_array()) throw input_error(path.string() + ": expected a JSON array");
    std::vector<CharDetection> dets;
    dets.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        dets.push_back(
            parse_detection(j[i], path.string() + ": detections[" + std::to_string(i) + "]"));
    }
    return dets;
}

void save_detections(const std::filesystem::path& path, std::span<const CharDetection> dets) {
    json j = json::array();
    for (const auto& d : dets) j.push_back(detection_json(d));
    write_json(path, j);
}

PageManifest load_manifest(const std::filesystem::path& path) {
    const json j = load_json(path);
    if (!j.is_object()) throw input_error(path.string() + ": expected a JSON object");
    const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    const auto resolve = [&](const std::string& rel) {
        std::filesystem::path p(rel);
        return p.is_absolute() ? p : base / p;
    };

    PageManifest m;
    try {
        m.page_id = j.at("page_id").get<std::string>();
        m.detections_path = resolve(j.at("detections").get<std::string>());
        m.mask_path = resolve(j.at("mask").get<std::string>());
        m.mask_scale = j.at("mask_scale").get<int>();
    } catch (const json::exception& e) {
        throw input_error(path.string() + ": " + e.what());
    }
    if (m.mask_scale < 1) throw input_error(path.string() + ": mask_scale must be >= 1");
    if (j.contains("line_rec")) m.line_rec_path = resolve(j["line_rec"].get<std::string>());
    if (j.contains("ground_truth")) {
        m.ground_truth_path = resolve(j["ground_truth"].get<std::string>());
    }
    return m;
}

void save_manifest(const std::filesystem::path& path, const PageManifest& manifest) {
    // Paths are written relative to the manifest location when possible.
    const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    const auto rel = [&](const std::filesystem::path& p) {
        const auto r = p.lexically_relative(base);
        return (r.empty() || r.native().starts_with("..")) ? p.string() : r.string();
    };
    json j{{"page_id", manifest.page_id},
           {"detections", rel(manifest.detections_path)},
           {"mask", rel(manifest.mask_path)},
           {"mask_scale", manifest.mask_scale}};
    if (manifest.line_rec_path) j["line_rec"] = rel(*manifest.line_rec_path);
    if (manifest.ground_truth_path) j["ground_truth"] = rel(*manifest.ground_truth_path);
    write_json(path, j);
}

std::vector<std::filesystem::path> load_manifest_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open manifest list: " + path.string());
    const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    std::vector<std::filesystem::path> out;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r')) {
            line.pop_back();
        }
        std::size_t start = 0;
        while (start < line.size() && (line[start] == ' ' || line[start] == '\t')) ++start;
        line = line.substr(start);
        if (line.empty()) continue;
        std::filesystem::path p(line);
        out.push_back(p.is_absolute() ? p : base / p);
    }
    return out;
}

GroundTruth load_ground_truth(const std::filesystem::path& path) {
    const json j = load_json(path);
    if (!j.is_object()) throw input_error(path.string() + ": expected a JSON object");

    GroundTruth gt;
    if (j.contains("boundary_lines")) {
        gt.has_boundary_lines = true;
        const auto& arr = j["boundary_lines"];
        if (!arr.is_array()) throw input_error(path.string() + ": boundary_lines must be an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            gt.boundary_lines.push_back(parse_segment(
                arr[i], path.string() + ": boundary_lines[" + std::to_string(i) + "]"));
        }
    }
    if (j.contains("text_lines")) {
        gt.has_text_lines = true;
        const auto& arr = j["text_lines"];
        if (!arr.is_array()) throw input_error(path.string() + ": text_lines must be an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string ctx = path.string() + ": text_lines[" + std::to_string(i) + "]";
            const auto& item = arr[i];
            if (!item.is_object() || !item.contains("quad") || !item["quad"].is_array() ||
                item["quad"].size() != 4) {
                throw input_error(ctx + ": expected {\"quad\": [[x,y] x4], \"text\": str}");
            }
            std::array<Point, 4> pts;
            for (int k = 0; k < 4; ++k) pts[k] = parse_point(item["quad"][k], ctx);
            gt.line_quads.emplace_back(pts[0], pts[1], pts[2], pts[3]);
            gt.line_texts.push_back(item.value("text", std::string{}));
        }
    }
    gt.transcript = j.value("transcript", std::string{});
    return gt;
}

void save_ground_truth(const std::filesystem::path& path, const GroundTruth& gt) {
    json lines = json::array();
    for (const auto& s : gt.boundary_lines) lines.push_back(segment_json(s));
    json text_lines = json::array();
    for (std::size_t i = 0; i < gt.line_quads.size(); ++i) {
        json quad = json::array();
        for (const auto& p : gt.line_quads[i].v) quad.push_back(point_json(p));
        text_lines.push_back(json{
            {"quad", quad},
            {"text", i < gt.line_texts.size() ? gt.line_texts[i] : std::string{}}});
    }
    write_json(path, json{{"boundary_lines", lines},
                          {"text_lines", text_lines},
                          {"transcript", gt.transcript}});
}

std::map<int, ScoredSequence> load_line_rec(const std::filesystem::path& path) {
    const json j = load_json(path);
    if (!j.is_array()) throw input_error(path.string() + ": expected a JSON array");
    std::map<int, ScoredSequence> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string ctx = path.string() + ": records[" + std::to_string(i) + "]";
        const auto& item = j[i];
        if (!item.is_object() || !item.contains("column") || !item.contains("symbols") ||
            !item.contains("probs")) {
            throw input_error(ctx + ": expected {\"column\", \"symbols\", \"probs\"}");
        }
        const int col = item["column"].get<int>();
        ScoredSequence seq;
        for (const auto& s : item["symbols"]) seq.symbols.push_back(s.get<std::string>());
        for (const auto& p : item["probs"]) {
            const double v = p.get<double>();
            if (v < 0.0 || v > 1.0) throw input_error(ctx + ": probability out of [0, 1]");
            seq.probs.push_back(v);
        }
        if (seq.symbols.size() != seq.probs.size()) {
            throw input_error(ctx + ": symbols/probs length mismatch");
        }
        if (!out.emplace(col, std::move(seq)).second) {
            throw input_error(ctx + ": duplicate column index");
        }
    }
    return out;
}

void save_line_rec(const std::filesystem::path& path,
                   const std::vector<ScoredSequence>& columns) {
    json j = json::array();
    for (std::size_t i = 0; i < columns.size(); ++i) {
        j.push_back(json{{"column", i},
                         {"symbols", columns[i].symbols},
                         {"probs", columns[i].probs}});
    }
    write_json(path, j);
}

std::vector<WindowOutput> load_windows(const std::filesystem::path& path) {
    const json j = load_json(path);
    if (!j.is_object() || !j.contains("windows") || !j["windows"].is_array()) {
        throw input_error(path.string() + ": expected {\"windows\": [...]}");
    }
    std::vector<WindowOutput> out;
    const auto& arr = j["windows"];
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string ctx = path.string() + ": windows[" + std::to_string(i) + "]";
        const auto& item = arr[i];
        if (!item.is_object() || !item.contains("offset") || !item.contains("detections")) {
            throw input_error(ctx + ": expected {\"offset\": [dx, dy], \"detections\": [...]}");
        }
        WindowOutput w;
        const Point off = parse_point(item["offset"], ctx);
        w.dx = off.x;
        w.dy = off.y;
        const auto& dets = item["detections"];
        if (!dets.is_array()) throw input_error(ctx + ": detections must be an array");
        for (std::size_t k = 0; k < dets.size(); ++k) {
            w.detections.push_back(
                parse_detection(dets[k], ctx + ".detections[" + std::to_string(k) + "]"));
        }
        out.push_back(std::move(w));
    }
    return out;
}

std::vector<LineSegment> load_segments(const std::filesystem::path& path) {
    const json j = load_json(path);
    if (!j.is_object() || !j.contains("segments") || !j["segments"].is_array()) {
        throw input_error(path.string() + ": expected {\"segments\": [...]}");
    }
    std::vector<LineSegment> out;
    const auto& arr = j["segments"];
    for (std::size_t i = 0; i < arr.size(); ++i) {
        out.push_back(
            parse_segment(arr[i], path.string() + ": segments[" + std::to_string(i) + "]"));
    }
    return out;
}

void save_segments(const std::filesystem::path& path, std::span<const LineSegment> segments,
                   double page_width, double page_height) {
    json arr = json::array();
    for (const auto& s : segments) arr.push_back(segment_json(s));
    write_json(path, json{{"page_width", page_width},
                          {"page_height", page_height},
                          {"segments", arr}});
}

}  // namespace histdoc
