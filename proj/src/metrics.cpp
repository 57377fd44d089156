#include "histdoc/metrics.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

#include "histdoc/rescore.hpp"
#include "histdoc/text.hpp"

namespace histdoc {

namespace {

double safe_ratio(std::size_t num, std::size_t den) {
    return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

double f_measure(double p, double r) {
    return (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

}  // namespace

LineEvalReport eval_lines(std::span<const LineSegment> pred, std::span<const LineSegment> gt,
                          double dist_threshold) {
    if (dist_threshold <= 0.0) throw std::invalid_argument("eval_lines: threshold must be > 0");

    struct Pair {
        double dist;
        int pi, gi;
    };
    std::vector<Pair> pairs;
    pairs.reserve(pred.size() * gt.size());
    for (std::size_t p = 0; p < pred.size(); ++p) {
        for (std::size_t g = 0; g < gt.size(); ++g) {
            pairs.push_back({segment_pair_distance(pred[p], gt[g]),
                             static_cast<int>(p), static_cast<int>(g)});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        return std::tie(a.dist, a.pi, a.gi) < std::tie(b.dist, b.pi, b.gi);
    });

    LineEvalReport report;
    report.pred_count = pred.size();
    report.gt_count = gt.size();
    std::vector<bool> pred_used(pred.size(), false), gt_used(gt.size(), false);
    for (const auto& pair : pairs) {
        if (pair.dist >= dist_threshold) break;
        if (pred_used[pair.pi] || gt_used[pair.gi]) continue;
        pred_used[pair.pi] = gt_used[pair.gi] = true;
        report.matches.emplace_back(pair.pi, pair.gi);
        ++report.tp;
    }

    if (pred.empty() && gt.empty()) {
        report.precision = report.recall = report.f_score = 1.0;
    } else {
        report.precision = safe_ratio(report.tp, report.pred_count);
        report.recall = safe_ratio(report.tp, report.gt_count);
        report.f_score = f_measure(report.precision, report.recall);
    }
    return report;
}

DetEvalReport eval_detection(std::span<const Quad> pred, std::span<const Quad> gt,
                             std::span<const double> iou_thresholds) {
    for (double t : iou_thresholds) {
        if (t <= 0.0 || t > 1.0) throw std::invalid_argument("eval_detection: threshold out of (0,1]");
    }

    struct Pair {
        double iou;
        int pi, gi;
    };
    std::vector<Pair> pairs;
    for (std::size_t p = 0; p < pred.size(); ++p) {
        for (std::size_t g = 0; g < gt.size(); ++g) {
            const double iou = iou_quad(pred[p], gt[g]);
            if (iou > 0.0) pairs.push_back({iou, static_cast<int>(p), static_cast<int>(g)});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        return std::tie(b.iou, a.pi, a.gi) < std::tie(a.iou, b.pi, b.gi);
    });

    // One greedy run; a pair accepted with iou >= t is exactly what the
    // threshold-t greedy would accept, since only higher-IoU pairs can
    // have consumed a partner.
    std::vector<double> accepted;
    std::vector<bool> pred_used(pred.size(), false), gt_used(gt.size(), false);
    for (const auto& pair : pairs) {
        if (pred_used[pair.pi] || gt_used[pair.gi]) continue;
        pred_used[pair.pi] = gt_used[pair.gi] = true;
        accepted.push_back(pair.iou);
    }

    DetEvalReport report;
    report.pred_count = pred.size();
    report.gt_count = gt.size();
    for (double t : iou_thresholds) {
        DetThresholdResult res;
        res.iou_threshold = t;
        res.tp = static_cast<std::size_t>(
            std::count_if(accepted.begin(), accepted.end(), [t](double v) { return v >= t; }));
        if (pred.empty() && gt.empty()) {
            res.precision = res.recall = res.h_mean = 1.0;
        } else {
            res.precision = safe_ratio(res.tp, report.pred_count);
            res.recall = safe_ratio(res.tp, report.gt_count);
            res.h_mean = f_measure(res.precision, res.recall);
        }
        report.per_threshold.push_back(res);
    }
    return report;
}

TextEvalReport eval_text(std::string_view pred, std::string_view gt) {
    const auto gt_syms = utf8_symbols(strip_whitespace(gt));
    const auto pred_syms = utf8_symbols(strip_whitespace(pred));
    if (gt_syms.empty()) throw std::invalid_argument("eval_text: empty ground truth");

    TextEvalReport report;
    report.nt = gt_syms.size();
    for (const auto& op : edit_script(gt_syms, pred_syms)) {
        switch (op.kind) {
            case EditOpKind::Replace: ++report.se; break;
            case EditOpKind::Delete: ++report.de; break;
            case EditOpKind::Insert: ++report.ie; break;
            case EditOpKind::Equal: break;
        }
    }
    const double nt = static_cast<double>(report.nt);
    report.cr = (nt - static_cast<double>(report.de) - static_cast<double>(report.se)) / nt;
    report.ar = report.cr - static_cast<double>(report.ie) / nt;
    return report;
}

}  // namespace histdoc
