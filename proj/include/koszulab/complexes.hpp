#pragma once

#include <climits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "koszulab/span.hpp"

namespace koszulab {

// One block (m, n, W, g) of a bar or cobar complex, graded by syzygy degree
// s = W - V. dims[s] is the dimension in syzygy degree s. For a bar complex
// differentials[s] maps degree s to degree s + 1 (one vertex fewer); for a
// cobar complex differentials[s] maps degree s + 1 to degree s.
struct ChainComplexBlock {
    BlockKey key;
    bool cobar = false;
    std::vector<int> dims;
    std::vector<SparseMatrix> differentials;
    HomologyProfile homology;  // syzygy degree -> dimension

    long total_dim() const;
    // Syzygy degrees with nonzero homology other than 0.
    std::vector<int> positive_syzygies() const;
};

// Arities (a, b) of genus-zero blocks by weight, for weights 1..max_weight.
std::map<int, std::set<std::pair<int, int>>> block_arities(const Presentation& p, int max_weight);

// Bar complex of the dioperad: trees decorated by quotient classes.
std::vector<ChainComplexBlock> bar_dioperad(SpanEngine& e, int m, int n, int max_weight);

// Diamond bar complex of the genus-truncated properadic envelope: graphs of
// genus up to max_genus, decorated by genus-zero quotient classes; only
// edges that are the unique edge between their endpoints are contracted.
std::vector<ChainComplexBlock> bar_prop_diamond(SpanEngine& e, int m, int n, int max_weight, int max_genus);

// A single block of the diamond bar complex.
ChainComplexBlock bar_block(SpanEngine& e, const BlockKey& key);

// Diamond cobar complex on the coproperad dual to the quotient blocks of
// the given (dual) presentation: the transpose of its diamond bar complex.
std::vector<ChainComplexBlock> cobar_diamond(SpanEngine& dual, int m, int n, int max_genus, int max_weight);
ChainComplexBlock cobar_block(SpanEngine& dual, const BlockKey& key);

struct KoszulRanges {
    int m_min = 1, m_max = 1;
    int n_min = 1, n_max = 1;
    int max_legs = INT_MAX;  // bound on m + n
    bool diagonal = false;   // only m == n
    int max_genus = 0;
    int max_weight = 1;
};

struct BlockProfile {
    BlockKey key;
    HomologyProfile homology;
    int expected = -1;  // quotient dimension of the predual, when compared
};

enum class Verdict { Pass, Fail, Inconclusive };

struct KoszulVerdict {
    std::string presentation;
    KoszulRanges ranges;
    std::vector<BlockProfile> blocks;
    Verdict verdict = Verdict::Pass;
    BlockKey failed_block;
    int failed_degree = 0;
    std::string reason;
};

// Checks every block in range: the cobar complex of the dual must have
// homology only in syzygy degree 0, equal there to the quotient dimension
// of the predual. Resource limits make the verdict inconclusive.
KoszulVerdict koszul_report(SpanEngine& predual, SpanEngine& dual, const KoszulRanges& ranges);

std::string to_string(Verdict v);
// JSON list of {presentation, block: {m, n, W, g}, dims_by_syzygy, verdict}.
std::string report_json(const KoszulVerdict& v);
std::string block_json(const std::string& presentation, const ChainComplexBlock& b);

}  // namespace koszulab
