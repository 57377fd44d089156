#include <doctest.h>

#include <random>

#include "histdoc/mask.hpp"
#include "histdoc/synth.hpp"
#include "histdoc/text.hpp"

using namespace histdoc;

TEST_SUITE_BEGIN("synth");

TEST_CASE("generate is deterministic in the seed") {
    SynthSpec spec;
    spec.seed = 77;
    spec.h_lines = 2;
    spec.v_lines = 1;
    const SynthPage a = generate(spec);
    const SynthPage b = generate(spec);
    CHECK(a.gt_transcript == b.gt_transcript);
    REQUIRE(a.detections.size() == b.detections.size());
    for (std::size_t i = 0; i < a.detections.size(); ++i) {
        CHECK(a.detections[i].box.x_left == b.detections[i].box.x_left);
        CHECK(a.detections[i].label == b.detections[i].label);
        CHECK(a.detections[i].score == b.detections[i].score);
    }
    CHECK(a.mask.bits == b.mask.bits);

    spec.seed = 78;
    CHECK(generate(spec).gt_transcript != a.gt_transcript);
}

TEST_CASE("a minimal spec yields exactly the requested characters") {
    SynthSpec spec;
    spec.h_lines = 0;
    spec.v_lines = 0;
    spec.min_columns = spec.max_columns = 1;
    spec.min_chars = spec.max_chars = 3;
    spec.double_column_prob = 0.0;
    const SynthPage page = generate(spec);
    CHECK(page.physical_columns == 1);
    CHECK(page.double_column_runs == 0);
    CHECK(utf8_symbols(strip_whitespace(page.gt_transcript)).size() == 3);
    CHECK(page.detections.size() == 3);
    REQUIRE(page.gt_document.regions.size() == 1);
}

TEST_CASE("double-column probability one inserts a run into every column") {
    SynthSpec spec;
    spec.seed = 11;
    spec.h_lines = 1;
    spec.double_column_prob = 1.0;
    spec.max_run_rows = 2;
    const SynthPage page = generate(spec);
    CHECK(page.double_column_runs == page.physical_columns);
    // fragments: every physical column contributes at least 2 extra lines
    CHECK(page.gt_line_quads.size() >=
          static_cast<std::size_t>(page.physical_columns + 2 * page.double_column_runs));
}

TEST_CASE("infeasible specs are rejected") {
    SynthSpec spec;
    spec.min_columns = spec.max_columns = 60;
    CHECK_THROWS_AS((void)generate(spec), std::invalid_argument);

    SynthSpec crowded;
    crowded.h_lines = 12;  // cannot keep 340 px separations
    CHECK_THROWS_AS((void)generate(crowded), std::invalid_argument);
}

TEST_CASE("render_mask basics") {
    CHECK(render_mask({}, 400, 300, 1).true_count() == 0);

    // vertical line at x = 200, band 20, scale 1 -> 41 px wide stripe
    const std::vector<LineSegment> v{{{200, 0}, {200, 300}}};
    const auto m = render_mask(v, 400, 300, 1, 20.0);
    std::size_t row_count = 0;
    for (int x = 0; x < m.width; ++x) {
        if (m.at(x, 150)) ++row_count;
    }
    CHECK(row_count == 41);
    CHECK(m.at(180, 150));
    CHECK(m.at(220, 150));
    CHECK_FALSE(m.at(179, 150));
    CHECK_FALSE(m.at(221, 150));

    // at scale 4 the stripe is 10-11 mask pixels wide
    const auto q = render_mask(v, 400, 300, 4, 20.0);
    CHECK(q.scale == 4);
    std::size_t qrow = 0;
    for (int x = 0; x < q.width; ++x) {
        if (q.at(x, 30)) ++qrow;
    }
    CHECK(qrow >= 10);
    CHECK(qrow <= 11);
}

TEST_CASE("render_mask matches a pointwise distance check") {
    const std::vector<LineSegment> lines{{{30, 10}, {90, 70}}, {{10, 80}, {110, 80}}};
    for (int scale : {1, 2}) {
        const auto m = render_mask(lines, 120, 100, scale, 12.0);
        for (int y = 0; y < m.height; ++y) {
            for (int x = 0; x < m.width; ++x) {
                const Point p{(x + 0.5) * scale - 0.5, (y + 0.5) * scale - 0.5};
                double d = 1e18;
                for (const auto& seg : lines) d = std::min(d, point_segment_distance(p, seg));
                CHECK(m.at(x, y) == (d <= 12.0));
            }
        }
    }
}

TEST_CASE("corrupt with zero parameters is the identity") {
    SynthSpec spec;
    spec.seed = 5;
    const SynthPage page = generate(spec);
    const SynthPage same = corrupt(page, spec);
    CHECK(same.mask.bits == page.mask.bits);
    REQUIRE(same.detections.size() == page.detections.size());
    for (std::size_t i = 0; i < page.detections.size(); ++i) {
        CHECK(same.detections[i].box.x_left == page.detections[i].box.x_left);
        CHECK(same.detections[i].label == page.detections[i].label);
        CHECK(same.detections[i].score == page.detections[i].score);
    }
}

TEST_CASE("corrupt keeps boxes within the jitter bound") {
    SynthSpec spec;
    spec.seed = 6;
    spec.h_lines = 1;
    const SynthPage page = generate(spec);
    SynthSpec noisy = spec;
    noisy.jitter_px = 7.0;
    const SynthPage moved = corrupt(page, noisy);
    REQUIRE(moved.detections.size() == page.detections.size());
    for (std::size_t i = 0; i < page.detections.size(); ++i) {
        const auto& a = page.detections[i].box;
        const auto& b = moved.detections[i].box;
        CHECK(std::abs(a.x_left - b.x_left) <= 7.0);
        CHECK(std::abs(a.y_top - b.y_top) <= 7.0);
        CHECK(a.width() == doctest::Approx(b.width()));
        CHECK(a.height() == doctest::Approx(b.height()));
    }
}

TEST_CASE("corrupt flips every label with probability one on a two-symbol alphabet") {
    SynthSpec spec;
    spec.seed = 7;
    spec.alphabet = "ab";
    const SynthPage page = generate(spec);
    SynthSpec flip = spec;
    flip.label_flip_prob = 1.0;
    const SynthPage flipped = corrupt(page, flip);
    for (std::size_t i = 0; i < page.detections.size(); ++i) {
        CHECK(flipped.detections[i].label != page.detections[i].label);
        CHECK(flipped.detections[i].score < 0.5);
    }
}

TEST_CASE("specks below the noise threshold wash out in filter_noise") {
    SynthSpec spec;
    spec.seed = 8;
    spec.h_lines = 1;
    spec.v_lines = 1;
    const SynthPage page = generate(spec);
    SynthSpec speckled = spec;
    speckled.speck_count = 10;
    speckled.speck_size = 2;
    const SynthPage noisy = corrupt(page, speckled);
    CHECK(noisy.mask.true_count() > page.mask.true_count());

    const auto clean_comps = connected_components(filter_noise(noisy.mask, 50));
    const auto gt_comps = connected_components(page.mask);
    CHECK(clean_comps.size() == gt_comps.size());
}

TEST_CASE("oracle_line_rec mirrors the document columns") {
    SynthSpec spec;
    spec.seed = 9;
    spec.double_column_prob = 1.0;
    const SynthPage page = generate(spec);
    const auto rec = oracle_line_rec(page.gt_document, 0.95);
    std::size_t columns = 0;
    for (const auto& r : page.gt_document.regions) columns += r.columns.size();
    REQUIRE(rec.size() == columns);
    for (const auto& seq : rec) {
        for (double p : seq.probs) CHECK(p == 0.95);
        CHECK(seq.symbols.size() == seq.probs.size());
    }
}

TEST_SUITE_END();
