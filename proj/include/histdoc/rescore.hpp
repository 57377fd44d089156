#pragma once

#include <span>
#include <string>
#include <vector>

namespace histdoc {

/// Recognition symbols with their per-symbol probabilities.
struct ScoredSequence {
    std::vector<std::string> symbols;
    std::vector<double> probs;

    std::size_t size() const { return symbols.size(); }
    bool empty() const { return symbols.empty(); }
    double mean_prob() const;

    bool operator==(const ScoredSequence&) const = default;
};

enum class EditOpKind { Equal, Replace, Insert, Delete };

/// One alignment step transforming sequence `a` into sequence `b`.
/// pos_a / pos_b are -1 for the side an insert/delete does not touch.
struct EditOp {
    EditOpKind kind = EditOpKind::Equal;
    int pos_a = -1;
    int pos_b = -1;

    bool operator==(const EditOp&) const = default;
};

/// Minimal unit-cost edit script from `a` to `b`. The backtrace prefers
/// equal > replace > delete > insert, which makes the script
/// deterministic; the non-equal op count is the Levenshtein distance.
std::vector<EditOp> edit_script(std::span<const std::string> a, std::span<const std::string> b);
std::vector<EditOp> edit_script(const ScoredSequence& a, const ScoredSequence& b);

std::size_t levenshtein(std::span<const std::string> a, std::span<const std::string> b);

/// Which probabilities enter the rule-(c) average: the whole sequence or
/// only the misaligned positions.
enum class MeanScope { WholeSequence, MismatchOnly };

struct FuseResult {
    ScoredSequence output;
    /// Set when char_seq was empty and line_seq was returned instead.
    bool empty_char_fallback = false;
};

/// Fuses a column's character-level sequence with the text-line
/// recognizer's sequence for the same column. The line sequence is
/// aligned to the character sequence with edit_script; then
///   - all ops equal                      -> character sequence;
///   - only replace mismatches            -> per mismatch, the symbol
///     with the higher probability (character wins ties);
///   - replace plus any insert/delete     -> whichever whole sequence
///     has the higher mean probability (character wins ties);
///   - only insert/delete                 -> character sequence.
FuseResult fuse(const ScoredSequence& char_seq, const ScoredSequence& line_seq,
                MeanScope scope = MeanScope::WholeSequence);

}  // namespace histdoc
