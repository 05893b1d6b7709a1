#include "koszulab/complexes.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"
#include "koszulab/errors.hpp"

namespace koszulab {

long ChainComplexBlock::total_dim() const {
    long t = 0;
    for (int d : dims) t += d;
    return t;
}

std::vector<int> ChainComplexBlock::positive_syzygies() const {
    std::vector<int> out;
    for (const auto& [s, h] : homology)
        if (s > 0 && h != 0) out.push_back(s);
    return out;
}

// Arities (a, b) of weight-w genus-zero blocks, for w = 1..max_weight.
std::map<int, std::set<std::pair<int, int>>> block_arities(const Presentation& p, int max_weight) {
    std::map<int, std::set<std::pair<int, int>>> out;
    for (const auto& g : p.generators) out[1].insert({g.inputs, g.outputs});
    for (int w = 2; w <= max_weight; ++w)
        for (const auto& [a, b] : out[w - 1])
            for (const auto& g : p.generators) out[w].insert({a + g.inputs - 1, b + g.outputs - 1});
    return out;
}

namespace {

int uniform_degree(const Presentation& p) {
    if (p.generators.empty()) throw Error("presentation has no generators");
    const int d = p.generators.front().degree;
    for (const auto& g : p.generators)
        if (g.degree != d) throw Error("bar complex needs generators of a single degree");
    return d;
}

class BarBuilder {
public:
    BarBuilder(SpanEngine& e, const BlockKey& key) : e_(e), key_(key) {}

    ChainComplexBlock build();

private:
    SparseMatrix differential(const GraphSpace& from, const GraphSpace& to);

    SpanEngine& e_;
    BlockKey key_;
    std::vector<BlockKey> type_keys_;
    std::map<BlockKey, int> type_index_;
    std::shared_ptr<const Collection> coll_;
};

ChainComplexBlock BarBuilder::build() {
    const auto [m, n, W, g] = key_;
    ChainComplexBlock out;
    out.key = key_;
    if (W < 1) return out;
    const int degree = uniform_degree(e_.presentation());

    // Candidate vertex types, then those occurring in some vertex multiset
    // and with a nonzero quotient block.
    std::vector<BlockKey> candidates;
    std::vector<Arity> arities;
    std::vector<int> weights;
    for (const auto& [w, set] : block_arities(e_.presentation(), W))
        for (const auto& [a, b] : set) {
            if (a > m + W + g || b > n + W + g) continue;
            arities.push_back({static_cast<int>(candidates.size()), a, b});
            weights.push_back(w);
            candidates.push_back({a, b, w, 0});
        }
    std::vector<std::vector<std::vector<Arity>>> by_vertices(W + 1);
    std::set<int> used;
    for (int V = 1; V <= W; ++V) {
        by_vertices[V] = vertex_multisets(m, n, g, V, W, arities, weights);
        for (const auto& ms : by_vertices[V])
            for (const auto& a : ms) used.insert(a.type);
    }
    std::map<int, int> remap;
    std::vector<VertexType> types;
    for (int c : used) {
        const BlockKey& k = candidates[c];
        const int dim = e_.dimension(k, SpanMode::Quotient);
        if (dim == 0) continue;
        VertexType t;
        t.name = to_string(k);
        t.inputs = k.m;
        t.outputs = k.n;
        t.weight = k.weight;
        t.dim = dim;
        t.odd = ((1 + k.weight * degree) % 2 + 2) % 2 == 1;
        for (int i = 0; i + 1 < k.m; ++i) t.in_transpositions.push_back(e_.quotient_action(k, true, i));
        for (int i = 0; i + 1 < k.n; ++i) t.out_transpositions.push_back(e_.quotient_action(k, false, i));
        remap[c] = static_cast<int>(types.size());
        type_index_[k] = remap[c];
        type_keys_.push_back(k);
        types.push_back(std::move(t));
    }
    coll_ = std::make_shared<const Collection>(std::move(types));

    std::vector<std::shared_ptr<GraphSpace>> spaces(W + 1);
    for (int V = W; V >= 1; --V) {
        std::vector<std::vector<Arity>> kept;
        for (auto ms : by_vertices[V]) {
            bool ok = true;
            for (auto& a : ms) {
                const auto it = remap.find(a.type);
                if (it == remap.end()) {
                    ok = false;
                    break;
                }
                a.type = it->second;
            }
            if (ok) kept.push_back(std::move(ms));
        }
        spaces[V] = std::make_shared<GraphSpace>(coll_, m, n, g, kept, e_.options().max_rigid);
    }

    for (int s = 0; s < W; ++s) out.dims.push_back(spaces[W - s]->dim());
    for (int s = 0; s + 1 < W; ++s) out.differentials.push_back(differential(*spaces[W - s], *spaces[W - s - 1]));
    if (out.differentials.empty())
        out.homology[0] = out.dims[0];
    else
        out.homology = homology(out.differentials);
    return out;
}

// Sum over contractible edges of each representative: the edge u -> v is
// contracted when it is the only edge between u and v and no other directed
// path joins them. With vertex parities p, the sign of contracting u < v is
// (-1)^(p_0 + ... + p_{u-1}) (-1)^(p_v (p_{u+1} + ... + p_{v-1})) (-1)^(p_u + 1).
SparseMatrix BarBuilder::differential(const GraphSpace& from, const GraphSpace& to) {
    SparseMatrix d(to.dim(), from.dim());
    for (int c = 0; c < from.dim(); ++c) {
        const auto [si, tensor] = from.representative(c);
        const RigidGraph& gr = from.shapes()[si].form;
        const std::vector<int> digits = tensor_digits(tensor, from.shapes()[si].dims);
        const int V = gr.vertex_count();
        std::vector<int> parity(V);
        for (int k = 0; k < V; ++k) parity[k] = coll_->type(gr.types[k]).odd ? 1 : 0;
        std::map<int, Rational> column;
        for (int v = 0; v < V; ++v)
            for (int s = 0; s < static_cast<int>(gr.ins[v].size()); ++s) {
                const End src = gr.ins[v][s];
                if (src.external()) continue;
                const int u = src.vertex;
                int parallel = 0;
                for (const End& e : gr.ins[v])
                    if (e.vertex == u) ++parallel;
                if (parallel > 1) continue;
                Contraction ct;
                try {
                    ct = contract(gr, v, s);
                } catch (const CreatesCycle&) {
                    continue;
                }
                if (u >= v) throw Error("representative is not topologically ordered");
                const BlockKey& ku = type_keys_[gr.types[u]];
                const BlockKey& kv = type_keys_[gr.types[v]];
                const BlockKey merged{ku.m + kv.m - 1, ku.n + kv.n - 1, ku.weight + kv.weight, 0};
                const auto it = type_index_.find(merged);
                if (it == type_index_.end()) continue;
                const SparseVector& x = e_.compose_basis(kv, digits[v], ku, digits[u], {{src.slot + 1, s + 1}});
                if (x.empty()) continue;

                int exponent = parity[u] + 1;
                for (int k = 0; k < u; ++k) exponent += parity[k];
                if (parity[v])
                    for (int k = u + 1; k < v; ++k) exponent += parity[k];
                const Rational sign = exponent % 2 ? -1 : 1;

                RigidGraph sk = ct.skeleton;
                sk.types[ct.merged] = it->second;
                const std::vector<int> dims = to.vertex_dims(sk);
                std::vector<int> nd(sk.vertex_count(), 0);
                for (int k = 0; k < V; ++k)
                    if (k != u && k != v) nd[ct.vertex_map[k]] = digits[k];
                for (const auto& [q, coef] : x) {
                    nd[ct.merged] = q;
                    for (const auto& [row, val] : to.normalize(sk, tensor_index(nd, dims), sign * coef))
                        column[row] += val;
                }
            }
        for (const auto& [row, val] : column)
            if (val != 0) d.set(row, c, val);
    }
    return d;
}

ChainComplexBlock transpose_block(ChainComplexBlock b) {
    b.cobar = true;
    for (auto& d : b.differentials) d = d.transpose();
    return b;
}

}  // namespace

ChainComplexBlock bar_block(SpanEngine& e, const BlockKey& key) { return BarBuilder(e, key).build(); }

std::vector<ChainComplexBlock> bar_prop_diamond(SpanEngine& e, int m, int n, int max_weight, int max_genus) {
    std::vector<ChainComplexBlock> out;
    for (int g = 0; g <= max_genus; ++g)
        for (int w = 1; w <= max_weight; ++w) out.push_back(bar_block(e, {m, n, w, g}));
    return out;
}

std::vector<ChainComplexBlock> bar_dioperad(SpanEngine& e, int m, int n, int max_weight) {
    return bar_prop_diamond(e, m, n, max_weight, 0);
}

ChainComplexBlock cobar_block(SpanEngine& dual, const BlockKey& key) { return transpose_block(bar_block(dual, key)); }

std::vector<ChainComplexBlock> cobar_diamond(SpanEngine& dual, int m, int n, int max_genus, int max_weight) {
    std::vector<ChainComplexBlock> out;
    for (auto& b : bar_prop_diamond(dual, m, n, max_weight, max_genus)) out.push_back(transpose_block(std::move(b)));
    return out;
}

KoszulVerdict koszul_report(SpanEngine& predual, SpanEngine& dual, const KoszulRanges& r) {
    KoszulVerdict out;
    out.presentation = predual.presentation().name;
    out.ranges = r;
    bool inconclusive = false;
    for (int m = r.m_min; m <= r.m_max; ++m)
        for (int n = r.n_min; n <= r.n_max; ++n) {
            if (m + n > r.max_legs || (r.diagonal && m != n)) continue;
            // The (1, 1) block holds only the unit; its complexes are empty.
            if (m == 1 && n == 1) continue;
            for (int g = 0; g <= r.max_genus; ++g)
                for (int w = 1; w <= r.max_weight; ++w) {
                    const BlockKey key{m, n, w, g};
                    BlockProfile prof;
                    prof.key = key;
                    try {
                        prof.homology = cobar_block(dual, key).homology;
                        prof.expected = predual.dimension(key, SpanMode::Quotient);
                    } catch (const ResourceLimit& e) {
                        inconclusive = true;
                        if (out.reason.empty()) out.reason = to_string(key) + ": " + e.what();
                        out.blocks.push_back(prof);
                        continue;
                    }
                    out.blocks.push_back(prof);
                    if (out.verdict == Verdict::Fail) continue;
                    for (const auto& [s, h] : prof.homology)
                        if (s > 0 && h != 0) {
                            out.verdict = Verdict::Fail;
                            out.failed_block = key;
                            out.failed_degree = s;
                            out.reason = "homology of dimension " + std::to_string(h) + " in syzygy degree " +
                                         std::to_string(s);
                            break;
                        }
                    const long h0 = prof.homology.count(0) ? prof.homology.at(0) : 0;
                    if (out.verdict != Verdict::Fail && h0 != prof.expected) {
                        out.verdict = Verdict::Fail;
                        out.failed_block = key;
                        out.failed_degree = 0;
                        out.reason = "syzygy degree 0 has dimension " + std::to_string(h0) + ", quotient has " +
                                     std::to_string(prof.expected);
                    }
                }
        }
    if (out.verdict != Verdict::Fail && inconclusive) out.verdict = Verdict::Inconclusive;
    return out;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "";
}

namespace {

nlohmann::ordered_json block_object(const std::string& presentation, const BlockKey& k, const HomologyProfile& h,
                                    const std::string& verdict) {
    nlohmann::ordered_json j;
    j["presentation"] = presentation;
    j["block"] = {{"m", k.m}, {"n", k.n}, {"W", k.weight}, {"g", k.genus}};
    nlohmann::ordered_json dims = nlohmann::ordered_json::object();
    for (const auto& [s, d] : h) dims[std::to_string(s)] = d;
    j["dims_by_syzygy"] = dims;
    j["verdict"] = verdict;
    return j;
}

}  // namespace

std::string report_json(const KoszulVerdict& v) {
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const auto& b : v.blocks) {
        std::string verdict = "pass";
        if (b.expected < 0)
            verdict = "inconclusive";
        else if (v.verdict == Verdict::Fail && b.key == v.failed_block)
            verdict = "fail";
        list.push_back(block_object(v.presentation, b.key, b.homology, verdict));
    }
    return list.dump(2);
}

std::string block_json(const std::string& presentation, const ChainComplexBlock& b) {
    const bool concentrated = b.positive_syzygies().empty();
    return block_object(presentation, b.key, b.homology, concentrated ? "pass" : "fail").dump(2);
}

}  // namespace koszulab
