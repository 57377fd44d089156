#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "histdoc/geometry.hpp"

using namespace histdoc;

TEST_SUITE_BEGIN("geometry");

TEST_CASE("iou_aabox basics") {
    const AABox a{0, 0, 10, 10};
    CHECK(iou_aabox(a, a) == doctest::Approx(1.0));
    CHECK(iou_aabox(a, {20, 20, 30, 30}) == 0.0);
    // overlap 5x10 = 50, union 100 + 100 - 50 = 150
    CHECK(iou_aabox(a, {5, 0, 15, 10}) == doctest::Approx(50.0 / 150.0));
    // degenerate zero-area boxes
    CHECK(iou_aabox({1, 1, 1, 1}, {1, 1, 1, 1}) == 0.0);
    CHECK(iou_aabox({0, 0, 0, 10}, a) == 0.0);
}

TEST_CASE("polygon_area basics") {
    const std::vector<Point> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK(polygon_area(square) == doctest::Approx(1.0));
    const std::vector<Point> tri{{0, 0}, {4, 0}, {0, 3}};
    CHECK(polygon_area(tri) == doctest::Approx(6.0));
    const std::vector<Point> degenerate{{0, 0}, {1, 1}};
    CHECK_THROWS_AS((void)polygon_area(degenerate), std::invalid_argument);
}

TEST_CASE("polygon_area matches Monte-Carlo rasterization") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 4; ++trial) {
        const Quad q = testutil::random_convex_quad(rng);
        double min_x = q.v[0].x, max_x = q.v[0].x, min_y = q.v[0].y, max_y = q.v[0].y;
        for (const auto& p : q.v) {
            min_x = std::min(min_x, p.x);
            max_x = std::max(max_x, p.x);
            min_y = std::min(min_y, p.y);
            max_y = std::max(max_y, p.y);
        }
        const int samples = 400000;
        std::uniform_real_distribution<double> xs(min_x, max_x), ys(min_y, max_y);
        long long hits = 0;
        for (int i = 0; i < samples; ++i) {
            if (testutil::point_in_convex(q, xs(rng), ys(rng))) ++hits;
        }
        const double mc = (max_x - min_x) * (max_y - min_y) * hits / samples;
        const double area = polygon_area(q.v);
        CHECK(std::abs(area - mc) <= 0.01 * area + 1.0);
    }
}

TEST_CASE("clip_polygon basics") {
    const std::vector<Point> inner{{2, 2}, {4, 2}, {4, 4}, {2, 4}};
    const std::vector<Point> outer{{0, 0}, {10, 0}, {10, 10}, {0, 10}};
    const auto kept = clip_polygon(inner, outer);
    REQUIRE(kept.size() == 4);
    CHECK(polygon_area(kept) == doctest::Approx(4.0));

    const std::vector<Point> far{{20, 20}, {30, 20}, {30, 30}, {20, 30}};
    CHECK(clip_polygon(inner, far).empty());

    // two overlapping axis-aligned squares clip to their box intersection
    const std::vector<Point> a{{0, 0}, {10, 0}, {10, 10}, {0, 10}};
    const std::vector<Point> b{{5, 3}, {15, 3}, {15, 13}, {5, 13}};
    const auto inter = clip_polygon(a, b);
    REQUIRE(inter.size() >= 3);
    CHECK(polygon_area(inter) == doctest::Approx(5.0 * 7.0));
}

TEST_CASE("clip area never exceeds either input") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const Quad a = testutil::random_convex_quad(rng);
        const Quad b = testutil::random_convex_quad(rng);
        const auto inter = clip_polygon(a.v, b.v);
        if (inter.size() < 3) continue;
        const double ai = polygon_area(inter);
        CHECK(ai <= a.area() + 1e-6);
        CHECK(ai <= b.area() + 1e-6);
    }
}

TEST_CASE("iou_quad basics") {
    const Quad a = Quad::from_box({0, 0, 10, 10});
    CHECK(iou_quad(a, a) == doctest::Approx(1.0));
    CHECK(iou_quad(a, Quad::from_box({30, 30, 40, 40})) == 0.0);
}

TEST_CASE("iou_quad agrees with iou_aabox on axis-aligned quads") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coord(0.0, 100.0), size(1.0, 50.0);
    for (int trial = 0; trial < 100; ++trial) {
        const AABox a{coord(rng), coord(rng), 0, 0};
        const AABox b{coord(rng), coord(rng), 0, 0};
        const AABox fa{a.x_left, a.y_top, a.x_left + size(rng), a.y_top + size(rng)};
        const AABox fb{b.x_left, b.y_top, b.x_left + size(rng), b.y_top + size(rng)};
        CHECK(iou_quad(Quad::from_box(fa), Quad::from_box(fb)) ==
              doctest::Approx(iou_aabox(fa, fb)).epsilon(1e-9));
    }
}

TEST_CASE("iou_quad symmetry and self-identity") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const Quad a = testutil::random_convex_quad(rng);
        const Quad b = testutil::random_convex_quad(rng);
        CHECK(std::abs(iou_quad(a, b) - iou_quad(b, a)) <= 1e-9);
        CHECK(iou_quad(a, a) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("segment_pair_distance") {
    const LineSegment a{{0, 0}, {0, 100}};
    CHECK(segment_pair_distance(a, a) == 0.0);
    const LineSegment reversed{{0, 100}, {0, 0}};
    CHECK(segment_pair_distance(a, reversed) == 0.0);
    const LineSegment b{{3, 0}, {3, 100}};
    CHECK(segment_pair_distance(a, b) == doctest::Approx(6.0));
}

TEST_CASE("segment_pair_distance is symmetric, non-negative, zero iff same endpoints") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> coord(0.0, 500.0);
    for (int trial = 0; trial < 200; ++trial) {
        const LineSegment a{{coord(rng), coord(rng)}, {coord(rng), coord(rng)}};
        const LineSegment b{{coord(rng), coord(rng)}, {coord(rng), coord(rng)}};
        const double d = segment_pair_distance(a, b);
        CHECK(d >= 0.0);
        CHECK(d == doctest::Approx(segment_pair_distance(b, a)));
        CHECK(d > 0.0);  // random segments almost surely differ
    }
}

TEST_CASE("nms basics") {
    const CharDetection single{{0, 0, 10, 10}, "a", 0.9};
    auto kept = nms({single}, 0.5);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].score == 0.9);

    const CharDetection low{{0, 0, 10, 10}, "b", 0.8};
    kept = nms({low, single}, 0.5);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].score == 0.9);
    CHECK(kept[0].label == "a");
}

TEST_CASE("nms breaks score ties towards the smaller (x_left, y_top)") {
    const CharDetection right{{10, 0, 20, 10}, "r", 0.5};
    const CharDetection left{{9, 0, 19, 10}, "l", 0.5};
    const auto kept = nms({right, left}, 0.3);  // IoU 9/11 > 0.3
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].label == "l");
}

TEST_CASE("nms matches the definitional reference on small random inputs") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> pos(0.0, 60.0), size(5.0, 30.0);
    std::uniform_int_distribution<int> n_dist(1, 6), score_decile(0, 9);
    const double thresholds[] = {0.1, 0.3, 0.5, 0.8};
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<CharDetection> dets(n_dist(rng));
        for (auto& d : dets) {
            const double l = pos(rng), t = pos(rng);
            d.box = {l, t, l + size(rng), t + size(rng)};
            d.label = "x";
            d.score = score_decile(rng) / 10.0;  // coarse scores to exercise ties
        }
        const double thr = thresholds[trial % 4];
        const auto got = nms(dets, thr);
        const auto want = testutil::reference_nms(dets, thr);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].box.x_left == want[i].box.x_left);
            CHECK(got[i].box.y_top == want[i].box.y_top);
            CHECK(got[i].score == want[i].score);
        }
        // survivors overlap at most by the threshold
        for (std::size_t i = 0; i < got.size(); ++i) {
            for (std::size_t j = i + 1; j < got.size(); ++j) {
                CHECK(iou_aabox(got[i].box, got[j].box) <= thr + 1e-12);
            }
        }
    }
}

TEST_CASE("nms is idempotent") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> pos(0.0, 80.0), size(5.0, 25.0), score(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<CharDetection> dets(12);
        for (auto& d : dets) {
            const double l = pos(rng), t = pos(rng);
            d.box = {l, t, l + size(rng), t + size(rng)};
            d.label = "x";
            d.score = score(rng);
        }
        const auto once = nms(dets, 0.4);
        const auto twice = nms(once, 0.4);
        REQUIRE(once.size() == twice.size());
        for (std::size_t i = 0; i < once.size(); ++i) {
            CHECK(once[i].box.x_left == twice[i].box.x_left);
            CHECK(once[i].score == twice[i].score);
        }
    }
}

TEST_CASE("classify_segment and axis_intercept") {
    CHECK(classify_segment({{100, 0}, {100, 500}}, 45.0) == LineClass::Vertical);
    CHECK(classify_segment({{0, 200}, {800, 200}}, 45.0) == LineClass::Horizontal);
    CHECK(classify_segment({{0, 0}, {100, 100}}, 45.0) == LineClass::Vertical);  // 45° tie
    CHECK(classify_segment({{0, 0}, {100, 100}}, 30.0) == LineClass::None);

    const LineSegment tilted{{100, 0}, {110, 1000}};
    CHECK(axis_intercept(tilted, LineClass::Vertical, 800, 1000) == doctest::Approx(105.0));
    const LineSegment h{{0, 300}, {1000, 320}};
    CHECK(axis_intercept(h, LineClass::Horizontal, 1000, 800) == doctest::Approx(310.0));
}

TEST_SUITE_END();
