#pragma once

#include <map>
#include <string>
#include <vector>

#include "histdoc/geometry.hpp"
#include "histdoc/layout.hpp"

namespace histdoc {

/// A vertical run of characters, sorted by y_top ascending (ties by
/// x_left descending).
struct Column {
    std::vector<CharDetection> chars;
    double x_min = 0.0;  // min x_left over members
    double x_max = 0.0;  // max x_right over members

    double top() const { return chars.empty() ? 0.0 : chars.front().box.y_top; }
};

Column make_column(std::vector<CharDetection> chars);

/// Fragments of one physical column in reading order, as produced by
/// refine_double_columns.
using ColumnGroup = std::vector<Column>;

/// How the sub-columns of a small-character run are spliced back into
/// the reading order. RightThenLeft reads the right sub-column fully,
/// then the left one; RowInterleave keeps the run as one fragment read
/// row by row, right before left.
enum class SpliceOrder { RightThenLeft, RowInterleave };

/// Joins characters into columns when their left or right edges differ
/// by less than tol_frac * median character width (transitive closure).
/// Columns are returned right-to-left (x_max descending, ties by top
/// ascending).
std::vector<Column> group_columns(std::vector<CharDetection> chars, double tol_frac);

/// Splits double-column (interlinear) insertions out of a column.
/// Characters narrower than small_frac * mean member width are
/// re-grouped among themselves; each maximal vertical run of them is
/// replaced by its sub-columns at the run's position. Skipped (returned
/// unchanged) when more than small_skip_frac of the column is small.
ColumnGroup refine_double_columns(const Column& col, double small_frac, double tol_frac,
                                  SpliceOrder splice = SpliceOrder::RightThenLeft,
                                  double small_skip_frac = 0.8);

struct DocumentRegion {
    int region_id = 0;
    std::vector<Column> columns;  // reading order (fragments spliced in place)
};

struct Document {
    std::vector<DocumentRegion> regions;  // layout reading order; empty regions omitted
};

/// Assembles the document: regions in layout order, physical columns
/// right-to-left within a region (by the group's right edge), fragments
/// of a group kept in their splice order.
Document order_document(const PageLayout& layout,
                        const std::map<int, std::vector<ColumnGroup>>& groups_by_region);

/// Axis-aligned bounding quad of the union of member boxes.
Quad column_quad(const Column& col);

/// One line per column, a blank line between regions, UTF-8 labels
/// concatenated in reading order.
std::string emit_text(const Document& doc);

}  // namespace histdoc
