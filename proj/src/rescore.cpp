#include "histdoc/rescore.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace histdoc {

double ScoredSequence::mean_prob() const {
    if (probs.empty()) return 0.0;
    return std::accumulate(probs.begin(), probs.end(), 0.0) / static_cast<double>(probs.size());
}

std::vector<EditOp> edit_script(std::span<const std::string> a, std::span<const std::string> b) {
    const std::size_t m = a.size(), n = b.size();
    std::vector<int> d((m + 1) * (n + 1));
    const auto idx = [n](std::size_t i, std::size_t j) { return i * (n + 1) + j; };

    for (std::size_t i = 0; i <= m; ++i) d[idx(i, 0)] = static_cast<int>(i);
    for (std::size_t j = 0; j <= n; ++j) d[idx(0, j)] = static_cast<int>(j);
    for (std::size_t i = 1; i <= m; ++i) {
        for (std::size_t j = 1; j <= n; ++j) {
            const int sub = d[idx(i - 1, j - 1)] + (a[i - 1] == b[j - 1] ? 0 : 1);
            const int del = d[idx(i - 1, j)] + 1;
            const int ins = d[idx(i, j - 1)] + 1;
            d[idx(i, j)] = std::min({sub, del, ins});
        }
    }

    // Backtrace, preferring equal > replace > delete > insert.
    std::vector<EditOp> ops;
    std::size_t i = m, j = n;
    while (i > 0 || j > 0) {
        const int cur = d[idx(i, j)];
        if (i > 0 && j > 0 && a[i - 1] == b[j - 1] && cur == d[idx(i - 1, j - 1)]) {
            ops.push_back({EditOpKind::Equal, static_cast<int>(i - 1), static_cast<int>(j - 1)});
            --i;
            --j;
        } else if (i > 0 && j > 0 && cur == d[idx(i - 1, j - 1)] + 1) {
            ops.push_back({EditOpKind::Replace, static_cast<int>(i - 1), static_cast<int>(j - 1)});
            --i;
            --j;
        } else if (i > 0 && cur == d[idx(i - 1, j)] + 1) {
            ops.push_back({EditOpKind::Delete, static_cast<int>(i - 1), -1});
            --i;
        } else {
            ops.push_back({EditOpKind::Insert, -1, static_cast<int>(j - 1)});
            --j;
        }
    }
    std::reverse(ops.begin(), ops.end());
    return ops;
}

std::vector<EditOp> edit_script(const ScoredSequence& a, const ScoredSequence& b) {
    return edit_script(std::span<const std::string>(a.symbols),
                       std::span<const std::string>(b.symbols));
}

std::size_t levenshtein(std::span<const std::string> a, std::span<const std::string> b) {
    std::size_t count = 0;
    for (const auto& op : edit_script(a, b)) {
        if (op.kind != EditOpKind::Equal) ++count;
    }
    return count;
}

FuseResult fuse(const ScoredSequence& char_seq, const ScoredSequence& line_seq, MeanScope scope) {
    if (char_seq.symbols.size() != char_seq.probs.size() ||
        line_seq.symbols.size() != line_seq.probs.size()) {
        throw std::invalid_argument("fuse: symbols/probs length mismatch");
    }
    if (char_seq.empty()) return {line_seq, true};
    if (line_seq.empty()) return {char_seq, false};

    const auto ops = edit_script(line_seq, char_seq);
    std::size_t replaces = 0, indels = 0;
    for (const auto& op : ops) {
        if (op.kind == EditOpKind::Replace) ++replaces;
        else if (op.kind != EditOpKind::Equal) ++indels;
    }

    if (replaces == 0) return {char_seq, false};  // all equal, or indels only

    if (indels == 0) {
        // Replace-only: symbol-by-symbol, higher probability wins
        // (character output on ties).
        FuseResult result{char_seq, false};
        for (const auto& op : ops) {
            if (op.kind != EditOpKind::Replace) continue;
            if (line_seq.probs[op.pos_a] > char_seq.probs[op.pos_b]) {
                result.output.symbols[op.pos_b] = line_seq.symbols[op.pos_a];
                result.output.probs[op.pos_b] = line_seq.probs[op.pos_a];
            }
        }
        return result;
    }

    // Replace mixed with insert/delete: whole sequences compete on their
    // average probability.
    double char_mean = 0.0, line_mean = 0.0;
    if (scope == MeanScope::WholeSequence) {
        char_mean = char_seq.mean_prob();
        line_mean = line_seq.mean_prob();
    } else {
        double cs = 0.0, ls = 0.0;
        std::size_t cn = 0, ln = 0;
        for (const auto& op : ops) {
            if (op.kind == EditOpKind::Equal) continue;
            if (op.pos_a >= 0) {
                ls += line_seq.probs[op.pos_a];
                ++ln;
            }
            if (op.pos_b >= 0) {
                cs += char_seq.probs[op.pos_b];
                ++cn;
            }
        }
        char_mean = cn ? cs / static_cast<double>(cn) : 0.0;
        line_mean = ln ? ls / static_cast<double>(ln) : 0.0;
    }
    if (line_mean > char_mean) return {line_seq, false};
    return {char_seq, false};
}

}  // namespace histdoc
