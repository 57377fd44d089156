#include "histdoc/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

namespace histdoc {

namespace {

double median(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return (values[n / 2 - 1] + values[n / 2]) * 0.5;
}

double median_width(const std::vector<CharDetection>& chars) {
    std::vector<double> widths;
    widths.reserve(chars.size());
    for (const auto& c : chars) widths.push_back(c.box.width());
    return median(std::move(widths));
}

// Small-character baseline. The median is unusable here: a double-column
// run longer than its surrounding full-width characters drags the median
// onto the half-width glyphs and the cutoff stops firing. The mean stays
// between the two widths for any small share below ~75%.
double mean_width(const std::vector<CharDetection>& chars) {
    double sum = 0.0;
    for (const auto& c : chars) sum += c.box.width();
    return chars.empty() ? 0.0 : sum / static_cast<double>(chars.size());
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

bool char_order(const CharDetection& a, const CharDetection& b) {
    return std::tie(a.box.y_top, b.box.x_left, a.box.x_right, a.label) <
           std::tie(b.box.y_top, a.box.x_left, b.box.x_right, b.label);
}

}  // namespace

Column make_column(std::vector<CharDetection> chars) {
    std::sort(chars.begin(), chars.end(), char_order);
    Column col;
    col.chars = std::move(chars);
    col.x_min = col.chars.front().box.x_left;
    col.x_max = col.chars.front().box.x_right;
    for (const auto& c : col.chars) {
        col.x_min = std::min(col.x_min, c.box.x_left);
        col.x_max = std::max(col.x_max, c.box.x_right);
    }
    return col;
}

std::vector<Column> group_columns(std::vector<CharDetection> chars, double tol_frac) {
    if (chars.empty()) return {};

    const double t = tol_frac * median_width(chars);
    UnionFind uf(chars.size());
    for (std::size_t i = 0; i < chars.size(); ++i) {
        for (std::size_t j = i + 1; j < chars.size(); ++j) {
            const bool left_join = std::abs(chars[i].box.x_left - chars[j].box.x_left) < t;
            const bool right_join = std::abs(chars[i].box.x_right - chars[j].box.x_right) < t;
            if (left_join || right_join) uf.unite(static_cast<int>(i), static_cast<int>(j));
        }
    }

    std::map<int, std::vector<CharDetection>> buckets;
    for (std::size_t i = 0; i < chars.size(); ++i) {
        buckets[uf.find(static_cast<int>(i))].push_back(chars[i]);
    }

    std::vector<Column> columns;
    columns.reserve(buckets.size());
    for (auto& [root, members] : buckets) columns.push_back(make_column(std::move(members)));
    std::sort(columns.begin(), columns.end(), [](const Column& a, const Column& b) {
        return std::tie(b.x_max, a.chars.front().box.y_top, b.x_min) <
               std::tie(a.x_max, b.chars.front().box.y_top, a.x_min);
    });
    return columns;
}

ColumnGroup refine_double_columns(const Column& col, double small_frac, double tol_frac,
                                  SpliceOrder splice, double small_skip_frac) {
    const std::size_t n = col.chars.size();
    if (n == 0) return {};

    const double cutoff = small_frac * mean_width(col.chars);
    std::vector<bool> is_small(n);
    std::size_t small_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        is_small[i] = col.chars[i].box.width() < cutoff;
        if (is_small[i]) ++small_count;
    }
    if (small_count == 0) return {col};
    if (static_cast<double>(small_count) > small_skip_frac * static_cast<double>(n)) {
        return {col};  // degenerate column, leave as-is
    }

    ColumnGroup fragments;
    std::vector<CharDetection> buffer;
    const auto flush_main = [&] {
        if (!buffer.empty()) fragments.push_back(make_column(std::move(buffer)));
        buffer.clear();
    };
    const auto flush_small = [&] {
        if (buffer.empty()) return;
        if (splice == SpliceOrder::RowInterleave) {
            fragments.push_back(make_column(std::move(buffer)));
        } else {
            auto subs = group_columns(std::move(buffer), tol_frac);  // right-to-left already
            for (auto& sub : subs) fragments.push_back(std::move(sub));
        }
        buffer.clear();
    };

    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && is_small[i] != is_small[i - 1]) {
            if (is_small[i - 1]) flush_small();
            else flush_main();
        }
        buffer.push_back(col.chars[i]);
    }
    if (is_small[n - 1]) flush_small();
    else flush_main();
    return fragments;
}

Document order_document(const PageLayout& layout,
                        const std::map<int, std::vector<ColumnGroup>>& groups_by_region) {
    Document doc;
    for (const auto& region : layout.regions) {
        const auto it = groups_by_region.find(region.id);
        if (it == groups_by_region.end() || it->second.empty()) continue;

        std::vector<const ColumnGroup*> groups;
        for (const auto& g : it->second) {
            if (!g.empty()) groups.push_back(&g);
        }
        if (groups.empty()) continue;

        // Physical columns right-to-left by the group's right edge.
        const auto extent = [](const ColumnGroup& g) {
            double right = g.front().x_max, top = g.front().top();
            for (const auto& frag : g) {
                right = std::max(right, frag.x_max);
                top = std::min(top, frag.top());
            }
            return std::pair{right, top};
        };
        std::sort(groups.begin(), groups.end(), [&](const ColumnGroup* a, const ColumnGroup* b) {
            const auto [ra, ta] = extent(*a);
            const auto [rb, tb] = extent(*b);
            return std::tie(rb, ta) < std::tie(ra, tb);
        });

        DocumentRegion dr;
        dr.region_id = region.id;
        for (const auto* g : groups) {
            for (const auto& frag : *g) dr.columns.push_back(frag);
        }
        doc.regions.push_back(std::move(dr));
    }
    return doc;
}

Quad column_quad(const Column& col) {
    AABox box = col.chars.front().box;
    for (const auto& c : col.chars) {
        box.x_left = std::min(box.x_left, c.box.x_left);
        box.y_top = std::min(box.y_top, c.box.y_top);
        box.x_right = std::max(box.x_right, c.box.x_right);
        box.y_bottom = std::max(box.y_bottom, c.box.y_bottom);
    }
    return Quad::from_box(box);
}

std::string emit_text(const Document& doc) {
    std::string out;
    for (std::size_t r = 0; r < doc.regions.size(); ++r) {
        if (r > 0) out.push_back('\n');
        for (const auto& col : doc.regions[r].columns) {
            for (const auto& c : col.chars) out += c.label;
            out.push_back('\n');
        }
    }
    return out;
}

}  // namespace histdoc
