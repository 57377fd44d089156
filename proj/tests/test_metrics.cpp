#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "helpers.hpp"
#include "histdoc/metrics.hpp"

using namespace histdoc;

namespace {

/// Exhaustive optimal one-to-one matching: the largest number of pairs
/// with IoU >= threshold over all assignments (n <= 5).
std::size_t optimal_tp(const std::vector<Quad>& pred, const std::vector<Quad>& gt,
                       double threshold) {
    std::vector<int> order(pred.size());
    std::iota(order.begin(), order.end(), 0);
    std::size_t best = 0;
    do {
        std::size_t tp = 0;
        std::vector<bool> used(gt.size(), false);
        for (std::size_t p = 0; p < pred.size(); ++p) {
            const std::size_t g = order[p];
            if (g < gt.size() && !used[g] && iou_quad(pred[p], gt[g]) >= threshold) {
                used[g] = true;
                ++tp;
            }
        }
        best = std::max(best, tp);
    } while (std::next_permutation(order.begin(), order.end()));
    return best;
}

Quad box_quad(double l, double t, double r, double b) {
    return Quad::from_box({l, t, r, b});
}

}  // namespace

TEST_SUITE_BEGIN("metrics");

TEST_CASE("eval_lines basics") {
    const std::vector<LineSegment> gt{{{0, 100}, {1000, 100}}, {{0, 500}, {1000, 500}}};

    auto report = eval_lines(gt, gt, 50.0);
    CHECK(report.precision == 1.0);
    CHECK(report.recall == 1.0);
    CHECK(report.f_score == 1.0);

    report = eval_lines({}, gt, 50.0);
    CHECK(report.precision == 0.0);
    CHECK(report.recall == 0.0);
    CHECK(report.f_score == 0.0);

    report = eval_lines({}, {}, 50.0);
    CHECK(report.precision == 1.0);
    CHECK(report.recall == 1.0);
    CHECK(report.f_score == 1.0);

    // one exact copy plus one far spurious line
    const std::vector<LineSegment> pred{gt[0], {{0, 9000}, {1000, 9000}}};
    report = eval_lines(pred, gt, 50.0);
    CHECK(report.tp == 1);
    CHECK(report.precision == doctest::Approx(0.5));
    CHECK(report.recall == doctest::Approx(0.5));
    CHECK(report.f_score == doctest::Approx(0.5));

    CHECK_THROWS_AS((void)eval_lines(pred, gt, 0.0), std::invalid_argument);
}

TEST_CASE("eval_lines matching is one-to-one and monotone in the threshold") {
    std::mt19937_64 rng(91);
    std::uniform_real_distribution<double> c(0.0, 1000.0);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<LineSegment> pred, gt;
        for (int i = 0; i < 6; ++i) pred.push_back({{c(rng), c(rng)}, {c(rng), c(rng)}});
        for (int i = 0; i < 5; ++i) gt.push_back({{c(rng), c(rng)}, {c(rng), c(rng)}});
        double prev_p = 2.0, prev_r = 2.0;
        for (double threshold : {800.0, 400.0, 200.0, 100.0, 50.0}) {
            const auto r = eval_lines(pred, gt, threshold);
            CHECK(r.tp <= std::min(pred.size(), gt.size()));
            CHECK(r.precision <= prev_p);
            CHECK(r.recall <= prev_r);
            prev_p = r.precision;
            prev_r = r.recall;
        }
    }
}

TEST_CASE("eval_detection basics") {
    const std::vector<Quad> gt{box_quad(0, 0, 100, 400), box_quad(200, 0, 300, 400)};
    const std::vector<double> thresholds{0.5, 0.6, 0.7};

    auto report = eval_detection(gt, gt, thresholds);
    for (const auto& t : report.per_threshold) CHECK(t.h_mean == 1.0);

    report = eval_detection({}, {}, thresholds);
    for (const auto& t : report.per_threshold) CHECK(t.h_mean == 1.0);

    CHECK_THROWS_AS((void)eval_detection(gt, gt, std::vector<double>{0.0}),
                    std::invalid_argument);
}

TEST_CASE("eval_detection counts a 0.65-IoU pair at 0.5 and 0.6 but not 0.7") {
    // same-size boxes shifted so IoU = (1-s)/(1+s) = 0.65 -> s = 0.35/1.65
    const double s = 0.35 / 1.65;
    const std::vector<Quad> gt{box_quad(0, 0, 1, 1)};
    const std::vector<Quad> pred{box_quad(s, 0, 1 + s, 1)};
    REQUIRE(iou_quad(pred[0], gt[0]) == doctest::Approx(0.65).epsilon(1e-9));

    const std::vector<double> thresholds{0.5, 0.6, 0.7};
    const auto report = eval_detection(pred, gt, thresholds);
    CHECK(report.per_threshold[0].tp == 1);
    CHECK(report.per_threshold[1].tp == 1);
    CHECK(report.per_threshold[2].tp == 0);
    CHECK(report.per_threshold[0].h_mean == 1.0);
    CHECK(report.per_threshold[2].h_mean == 0.0);
}

TEST_CASE("eval_detection greedy equals exhaustive assignment on unambiguous fixtures") {
    std::mt19937_64 rng(97);
    std::uniform_real_distribution<double> pos(0.0, 800.0), jit(-8.0, 8.0);
    for (int trial = 0; trial < 20; ++trial) {
        // well-separated ground truths, each with one clearly best prediction
        std::vector<Quad> gt, pred;
        for (int i = 0; i < 4; ++i) {
            const double x = 200.0 * i, y = pos(rng) * 0;
            gt.push_back(box_quad(x, y, x + 100, y + 150));
            pred.push_back(box_quad(x + jit(rng), y + jit(rng), x + 100 + jit(rng),
                                    y + 150 + jit(rng)));
        }
        for (double threshold : {0.5, 0.7, 0.9}) {
            const auto report = eval_detection(pred, gt, std::vector<double>{threshold});
            CHECK(report.per_threshold[0].tp == optimal_tp(pred, gt, threshold));
        }
    }
}

TEST_CASE("eval_detection h-mean is non-increasing in the threshold") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<Quad> pred, gt;
        for (int i = 0; i < 6; ++i) gt.push_back(testutil::random_convex_quad(rng, 200.0));
        for (int i = 0; i < 6; ++i) pred.push_back(testutil::random_convex_quad(rng, 200.0));
        const std::vector<double> thresholds{0.1, 0.3, 0.5, 0.7, 0.9};
        const auto report = eval_detection(pred, gt, thresholds);
        for (std::size_t i = 0; i + 1 < report.per_threshold.size(); ++i) {
            CHECK(report.per_threshold[i].h_mean >= report.per_threshold[i + 1].h_mean);
        }
    }
}

TEST_CASE("eval_text basics") {
    auto r = eval_text("abcd", "abcd");
    CHECK(r.cr == 1.0);
    CHECK(r.ar == 1.0);
    CHECK(r.nt == 4);

    r = eval_text("abxd", "abcd");
    CHECK(r.se == 1);
    CHECK(r.cr == doctest::Approx(0.75));
    CHECK(r.ar == doctest::Approx(0.75));

    r = eval_text("abcde", "abcd");
    CHECK(r.ie == 1);
    CHECK(r.cr == doctest::Approx(1.0));
    CHECK(r.ar == doctest::Approx(0.75));

    r = eval_text("ad", "abcd");
    CHECK(r.de == 2);
    CHECK(r.cr == doctest::Approx(0.5));

    CHECK_THROWS_AS((void)eval_text("abc", ""), std::invalid_argument);
    CHECK_THROWS_AS((void)eval_text("abc", " \n\t "), std::invalid_argument);
}

TEST_CASE("eval_text strips whitespace and handles multi-byte symbols") {
    const auto r = eval_text("天地\n玄黃\n", "天 地玄\t黃");
    CHECK(r.nt == 4);
    CHECK(r.cr == 1.0);
    CHECK(r.ar == 1.0);

    const auto sub = eval_text("天地玄黑", "天地玄黃");
    CHECK(sub.se == 1);
    CHECK(sub.cr == doctest::Approx(0.75));
}

TEST_CASE("eval_text: AR can go negative, CR >= AR always") {
    const auto padded = eval_text("abcdabcdabcd", "ab");
    CHECK(padded.ar < 0.0);
    CHECK(padded.cr >= padded.ar);

    std::mt19937_64 rng(103);
    for (int trial = 0; trial < 500; ++trial) {
        auto gt = testutil::random_symbols(rng, 8, 4);
        if (gt.empty()) gt.push_back("a");
        const auto pred = testutil::random_symbols(rng, 8, 4);
        std::string gt_text, pred_text;
        for (const auto& s : gt) gt_text += s;
        for (const auto& s : pred) pred_text += s;
        const auto r = eval_text(pred_text, gt_text);
        CHECK(r.cr >= r.ar);
        if (r.ie == 0) CHECK(r.cr == doctest::Approx(r.ar));
        CHECK(r.nt == gt.size());
    }
}

TEST_SUITE_END();
