#include "koszulab/graphs.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "json.hpp"
#include "koszulab/errors.hpp"

namespace koszulab {

namespace {

constexpr int kInternalKey = 1000;

long factorial(int k) {
    long f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace

int RigidGraph::edge_count() const {
    int e = 0;
    for (const auto& slots : ins)
        for (const auto& s : slots)
            if (!s.external()) ++e;
    return e;
}

int RigidGraph::add_vertex(int type, int inputs, int outputs) {
    types.push_back(type);
    ins.emplace_back(inputs, End{-1, 0});
    outs.emplace_back(outputs, End{-1, 0});
    return vertex_count() - 1;
}

void RigidGraph::connect(int src, int src_slot, int dst, int dst_slot) {
    outs.at(src).at(src_slot) = End{dst, dst_slot};
    ins.at(dst).at(dst_slot) = End{src, src_slot};
}

void RigidGraph::attach_input(int label, int dst, int dst_slot) { ins.at(dst).at(dst_slot) = End{-1, label}; }

void RigidGraph::attach_output(int src, int src_slot, int label) { outs.at(src).at(src_slot) = End{-1, label}; }

bool is_acyclic(const RigidGraph& g) {
    const int v = g.vertex_count();
    std::vector<int> indeg(v, 0);
    for (int i = 0; i < v; ++i)
        for (const auto& s : g.ins[i])
            if (!s.external()) ++indeg[i];
    std::vector<int> ready;
    for (int i = 0; i < v; ++i)
        if (indeg[i] == 0) ready.push_back(i);
    int seen = 0;
    while (!ready.empty()) {
        int u = ready.back();
        ready.pop_back();
        ++seen;
        for (const auto& s : g.outs[u])
            if (!s.external() && --indeg[s.vertex] == 0) ready.push_back(s.vertex);
    }
    return seen == v;
}

bool is_connected(const RigidGraph& g) {
    const int v = g.vertex_count();
    if (v == 0) return false;
    std::vector<char> seen(v, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (const auto* side : {&g.ins[u], &g.outs[u]})
            for (const auto& s : *side)
                if (!s.external() && !seen[s.vertex]) {
                    seen[s.vertex] = 1;
                    ++count;
                    stack.push_back(s.vertex);
                }
    }
    return count == v;
}

void validate(const RigidGraph& g) {
    const int v = g.vertex_count();
    if (static_cast<int>(g.ins.size()) != v || static_cast<int>(g.outs.size()) != v)
        throw ArityMismatch("slot tables do not match the vertex count");
    std::vector<int> in_labels, out_labels;
    for (int i = 0; i < v; ++i) {
        for (std::size_t k = 0; k < g.ins[i].size(); ++k) {
            const End& s = g.ins[i][k];
            if (s.external()) {
                in_labels.push_back(s.slot);
                continue;
            }
            if (s.vertex >= v || s.slot < 0 || s.slot >= static_cast<int>(g.outs[s.vertex].size()))
                throw ArityMismatch("in-slot attached to a missing out-slot");
            const End& back = g.outs[s.vertex][s.slot];
            if (back.vertex != i || back.slot != static_cast<int>(k))
                throw ArityMismatch("edge ends disagree");
            if (s.vertex == i) throw CreatesCycle("directed self-loop");
        }
        for (std::size_t k = 0; k < g.outs[i].size(); ++k) {
            const End& s = g.outs[i][k];
            if (s.external()) {
                out_labels.push_back(s.slot);
                continue;
            }
            if (s.vertex >= v || s.slot < 0 || s.slot >= static_cast<int>(g.ins[s.vertex].size()))
                throw ArityMismatch("out-slot attached to a missing in-slot");
            const End& back = g.ins[s.vertex][s.slot];
            if (back.vertex != i || back.slot != static_cast<int>(k))
                throw ArityMismatch("edge ends disagree");
        }
    }
    auto cover = [](std::vector<int> labels, int total, const char* side) {
        std::sort(labels.begin(), labels.end());
        std::vector<int> want(total);
        std::iota(want.begin(), want.end(), 1);
        if (labels != want) throw ArityMismatch(std::string(side) + " legs must be labelled 1.." + std::to_string(total));
    };
    cover(in_labels, g.m, "input");
    cover(out_labels, g.n, "output");
    if (!is_acyclic(g)) throw CreatesCycle("graph has a directed cycle");
    if (!is_connected(g)) throw std::invalid_argument("graph is not connected");
}

// ---------------------------------------------------------------------------
// Canonical form.

namespace {

class Canonicalizer {
public:
    explicit Canonicalizer(const RigidGraph& g) : g_(g), v_(g.vertex_count()), pos_(v_, -1) {}

    void run() {
        order_.reserve(v_);
        search(0);
    }

    std::vector<std::vector<int>> best;
    std::vector<std::vector<int>> orders;

private:
    bool ready(int v) const {
        for (const auto& s : g_.ins[v])
            if (!s.external() && pos_[s.vertex] < 0) return false;
        return true;
    }

    std::vector<int> vertex_code(int v) const {
        std::vector<int> keys;
        keys.reserve(g_.ins[v].size());
        for (const auto& s : g_.ins[v]) keys.push_back(s.external() ? s.slot : kInternalKey + pos_[s.vertex]);
        std::sort(keys.begin(), keys.end());
        std::vector<int> ext;
        for (const auto& s : g_.outs[v])
            if (s.external()) ext.push_back(s.slot);
        std::sort(ext.begin(), ext.end());
        std::vector<int> code{g_.types[v], static_cast<int>(g_.ins[v].size()), static_cast<int>(g_.outs[v].size())};
        code.insert(code.end(), keys.begin(), keys.end());
        code.push_back(static_cast<int>(ext.size()));
        code.insert(code.end(), ext.begin(), ext.end());
        return code;
    }

    void search(int depth) {
        if (depth == v_) {
            orders.push_back(order_);
            return;
        }
        std::vector<std::pair<std::vector<int>, int>> cands;
        for (int v = 0; v < v_; ++v)
            if (pos_[v] < 0 && ready(v)) cands.emplace_back(vertex_code(v), v);
        const std::vector<int>* low = nullptr;
        for (const auto& c : cands)
            if (!low || c.first < *low) low = &c.first;
        if (static_cast<int>(best.size()) > depth) {
            if (*low > best[depth]) return;
            if (*low < best[depth]) {
                best.resize(depth);
                best.push_back(*low);
                orders.clear();
            }
        } else {
            best.push_back(*low);
        }
        const std::vector<int> target = *low;
        for (const auto& c : cands) {
            if (c.first != target) continue;
            // A deeper reset may have replaced best[depth]; stop if this
            // prefix is no longer minimal.
            if (best.size() > static_cast<std::size_t>(depth) && best[depth] != target) return;
            pos_[c.second] = depth;
            order_.push_back(c.second);
            search(depth + 1);
            order_.pop_back();
            pos_[c.second] = -1;
        }
    }

    const RigidGraph& g_;
    int v_;
    std::vector<int> pos_;
    std::vector<int> order_;
};

}  // namespace

void slot_layout(const RigidGraph& g, const std::vector<int>& order, std::vector<Perm>& in_perm,
                 std::vector<Perm>& out_perm) {
    const int v = g.vertex_count();
    std::vector<int> pos(v);
    for (int k = 0; k < v; ++k) pos[order[k]] = k;
    in_perm.assign(v, {});
    out_perm.assign(v, {});
    for (int u = 0; u < v; ++u) {
        auto layout = [&](const std::vector<End>& slots, bool incoming) {
            std::vector<std::pair<std::pair<int, int>, int>> keyed;
            for (std::size_t i = 0; i < slots.size(); ++i) {
                const End& s = slots[i];
                std::pair<int, int> key;
                if (s.external())
                    key = {s.slot, 0};
                else
                    key = {kInternalKey + pos[s.vertex], incoming ? s.slot : static_cast<int>(i)};
                keyed.push_back({key, static_cast<int>(i)});
            }
            std::sort(keyed.begin(), keyed.end());
            Perm p(slots.size());
            for (std::size_t r = 0; r < keyed.size(); ++r) p[keyed[r].second] = static_cast<int>(r);
            return p;
        };
        in_perm[u] = layout(g.ins[u], true);
        out_perm[u] = layout(g.outs[u], false);
    }
}

RigidGraph relabel(const RigidGraph& g, const std::vector<int>& order, const std::vector<Perm>& in_perm,
                   const std::vector<Perm>& out_perm) {
    const int v = g.vertex_count();
    std::vector<int> pos(v);
    for (int k = 0; k < v; ++k) pos[order[k]] = k;
    RigidGraph r;
    r.m = g.m;
    r.n = g.n;
    r.types.resize(v);
    r.ins.resize(v);
    r.outs.resize(v);
    for (int k = 0; k < v; ++k) {
        const int u = order[k];
        r.types[k] = g.types[u];
        r.ins[k].resize(g.ins[u].size());
        r.outs[k].resize(g.outs[u].size());
        for (std::size_t i = 0; i < g.ins[u].size(); ++i) {
            const End& s = g.ins[u][i];
            r.ins[k][in_perm[u][i]] = s.external() ? s : End{pos[s.vertex], out_perm[s.vertex][s.slot]};
        }
        for (std::size_t j = 0; j < g.outs[u].size(); ++j) {
            const End& s = g.outs[u][j];
            r.outs[k][out_perm[u][j]] = s.external() ? s : End{pos[s.vertex], in_perm[s.vertex][s.slot]};
        }
    }
    return r;
}

Canonical canonicalize(const RigidGraph& g) {
    Canonicalizer c(g);
    c.run();
    Canonical out;
    out.code = {g.m, g.n, g.vertex_count()};
    for (const auto& vc : c.best) out.code.insert(out.code.end(), vc.begin(), vc.end());
    out.minimal_orders = std::move(c.orders);
    out.order = out.minimal_orders.front();
    slot_layout(g, out.order, out.in_perm, out.out_perm);
    out.form = relabel(g, out.order, out.in_perm, out.out_perm);
    long mult = 1;
    for (const auto& slots : out.form.outs) {
        std::map<int, int> per_target;
        for (const auto& s : slots)
            if (!s.external()) ++per_target[s.vertex];
        for (const auto& [t, k] : per_target) mult *= factorial(k);
    }
    out.automorphisms = static_cast<long>(out.minimal_orders.size()) * mult;
    return out;
}

// ---------------------------------------------------------------------------
// Enumeration.

std::vector<std::vector<Arity>> vertex_multisets(int m, int n, int genus, int vertex_count, int weight,
                                                 const std::vector<Arity>& types, const std::vector<int>& weights) {
    std::vector<std::vector<Arity>> out;
    const int edges = vertex_count - 1 + genus;
    if (edges < 0) return out;
    std::vector<Arity> cur;
    std::function<void(std::size_t, int, int, int, int)> rec = [&](std::size_t t, int left, int w, int si, int so) {
        if (left == 0) {
            if (w == weight && si == m + edges && so == n + edges) out.push_back(cur);
            return;
        }
        if (t == types.size()) return;
        for (int k = left; k >= 0; --k) {
            const int nw = w + k * weights[t];
            const int nsi = si + k * types[t].inputs, nso = so + k * types[t].outputs;
            if (nw > weight || nsi > m + edges || nso > n + edges) continue;
            for (int i = 0; i < k; ++i) cur.push_back(types[t]);
            rec(t + 1, left - k, nw, nsi, nso);
            cur.resize(cur.size() - k);
        }
    };
    rec(0, vertex_count, 0, 0, 0);
    return out;
}

namespace {

// Distinct orderings of a vertex multiset.
std::vector<std::vector<Arity>> orderings(std::vector<Arity> vs) {
    auto less = [](const Arity& a, const Arity& b) { return a.type < b.type; };
    std::sort(vs.begin(), vs.end(), less);
    std::vector<std::vector<Arity>> out;
    do out.push_back(vs);
    while (std::next_permutation(vs.begin(), vs.end(), less));
    return out;
}

// Splits labels 1..total into groups of the given sizes, in every way.
void label_splits(int total, const std::vector<int>& sizes,
                  const std::function<void(const std::vector<std::vector<int>>&)>& emit) {
    std::vector<std::vector<int>> groups(sizes.size());
    std::function<void(int)> rec = [&](int label) {
        if (label > total) {
            emit(groups);
            return;
        }
        for (std::size_t v = 0; v < sizes.size(); ++v) {
            if (static_cast<int>(groups[v].size()) == sizes[v]) continue;
            groups[v].push_back(label);
            rec(label + 1);
            groups[v].pop_back();
        }
    };
    rec(1);
}

void check_budget(std::size_t& count, std::size_t cap) {
    if (++count > cap) throw ResourceLimit("rigid graph count exceeds " + std::to_string(cap));
}

// Every rigid graph on a fixed vertex sequence: bijections between edge
// sources (input legs, out-slots) and edge targets (in-slots, output legs).
void rigid_bijections(int m, int n, const std::vector<Arity>& seq, std::size_t cap, std::size_t& count,
                      std::vector<RigidGraph>& out) {
    const int v = static_cast<int>(seq.size());
    RigidGraph g;
    g.m = m;
    g.n = n;
    for (const auto& a : seq) g.add_vertex(a.type, a.inputs, a.outputs);
    // Targets in a fixed order; each is matched with an unused source.
    std::vector<End> targets;
    for (int i = 0; i < v; ++i)
        for (int k = 0; k < seq[i].inputs; ++k) targets.push_back(End{i, k});
    for (int l = 1; l <= n; ++l) targets.push_back(End{-1, l});
    std::vector<End> sources;
    for (int l = 1; l <= m; ++l) sources.push_back(End{-1, l});
    for (int i = 0; i < v; ++i)
        for (int k = 0; k < seq[i].outputs; ++k) sources.push_back(End{i, k});
    if (sources.size() != targets.size()) return;
    std::vector<char> used(sources.size(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t t) {
        if (t == targets.size()) {
            if (is_acyclic(g) && is_connected(g)) {
                check_budget(count, cap);
                out.push_back(g);
            }
            return;
        }
        const End& dst = targets[t];
        for (std::size_t s = 0; s < sources.size(); ++s) {
            if (used[s]) continue;
            const End& src = sources[s];
            if (src.external() && dst.external()) continue;
            if (!src.external() && !dst.external() && src.vertex == dst.vertex) continue;
            used[s] = 1;
            if (dst.external())
                g.outs[src.vertex][src.slot] = dst;
            else if (src.external())
                g.ins[dst.vertex][dst.slot] = src;
            else
                g.connect(src.vertex, src.slot, dst.vertex, dst.slot);
            rec(t + 1);
            used[s] = 0;
        }
    };
    rec(0);
}

}  // namespace

std::vector<RigidGraph> enumerate(int m, int n, const std::vector<Arity>& vertices, const EnumerateOptions& opt) {
    if (m < 1 || n < 1) throw std::invalid_argument("enumerate needs m, n >= 1");
    std::vector<RigidGraph> out;
    const int v = static_cast<int>(vertices.size());
    if (v == 0) return out;
    int sum_in = 0, sum_out = 0;
    for (const auto& a : vertices) {
        if (a.inputs < 1 || a.outputs < 1) throw std::invalid_argument("vertex arities must be at least (1,1)");
        sum_in += a.inputs;
        sum_out += a.outputs;
    }
    const int edges = sum_in - m;
    if (edges < 0 || sum_out - n != edges) return out;
    const int genus = edges - v + 1;
    if (genus < opt.min_genus || genus > opt.max_genus) return out;

    std::size_t count = 0;
    if (!opt.dedupe) {
        for (const auto& seq : orderings(vertices)) rigid_bijections(m, n, seq, opt.max_rigid, count, out);
        return out;
    }

    std::map<std::vector<int>, RigidGraph> classes;
    for (const auto& seq : orderings(vertices)) {
        // Edge multiplicities mult[i][j] for i < j in this topological order.
        std::vector<std::vector<int>> mult(v, std::vector<int>(v, 0));
        std::vector<int> outdeg(v, 0), indeg(v, 0);
        std::vector<std::pair<int, int>> pairs;
        for (int i = 0; i < v; ++i)
            for (int j = i + 1; j < v; ++j) pairs.emplace_back(i, j);

        auto emit_graphs = [&]() {
            RigidGraph g;
            g.m = m;
            g.n = n;
            for (const auto& a : seq) g.add_vertex(a.type, a.inputs, a.outputs);
            std::vector<int> free_in(v), free_out(v);
            for (int i = 0; i < v; ++i) {
                free_in[i] = seq[i].inputs - indeg[i];
                free_out[i] = seq[i].outputs - outdeg[i];
            }
            // Internal edges occupy slots after the external ones.
            std::vector<int> next_in = free_in, next_out = free_out;
            for (int i = 0; i < v; ++i)
                for (int j = i + 1; j < v; ++j)
                    for (int k = 0; k < mult[i][j]; ++k) g.connect(i, next_out[i]++, j, next_in[j]++);
            if (!is_connected(g)) return;
            label_splits(m, free_in, [&](const std::vector<std::vector<int>>& in_groups) {
                for (int i = 0; i < v; ++i)
                    for (std::size_t k = 0; k < in_groups[i].size(); ++k)
                        g.attach_input(in_groups[i][k], i, static_cast<int>(k));
                label_splits(n, free_out, [&](const std::vector<std::vector<int>>& out_groups) {
                    for (int i = 0; i < v; ++i)
                        for (std::size_t k = 0; k < out_groups[i].size(); ++k)
                            g.attach_output(i, static_cast<int>(k), out_groups[i][k]);
                    check_budget(count, opt.max_rigid);
                    Canonical c = canonicalize(g);
                    classes.emplace(std::move(c.code), std::move(c.form));
                });
            });
        };

        std::function<void(std::size_t, int)> rec = [&](std::size_t p, int left) {
            if (p == pairs.size()) {
                if (left == 0) emit_graphs();
                return;
            }
            const auto [i, j] = pairs[p];
            const int cap = std::min({left, seq[i].outputs - outdeg[i], seq[j].inputs - indeg[j]});
            for (int k = 0; k <= cap; ++k) {
                mult[i][j] = k;
                outdeg[i] += k;
                indeg[j] += k;
                rec(p + 1, left - k);
                outdeg[i] -= k;
                indeg[j] -= k;
            }
            mult[i][j] = 0;
        };
        rec(0, edges);
    }
    for (auto& [code, g] : classes) out.push_back(std::move(g));
    return out;
}

// ---------------------------------------------------------------------------
// Surgery and reachability.

Contraction contract(const RigidGraph& g, int dst, int dst_slot) {
    const End e = g.ins.at(dst).at(dst_slot);
    if (e.external()) throw std::invalid_argument("contract: slot is an input leg");
    const int lo = e.vertex, up = dst;
    // Another directed path lo -> ... -> up through a third vertex closes a
    // cycle after contraction.
    std::vector<char> seen(g.vertex_count(), 0);
    std::vector<int> stack;
    for (const auto& s : g.outs[lo])
        if (!s.external() && s.vertex != up && !seen[s.vertex]) {
            seen[s.vertex] = 1;
            stack.push_back(s.vertex);
        }
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        if (u == up) throw CreatesCycle("contraction closes a directed cycle");
        for (const auto& s : g.outs[u])
            if (!s.external() && !seen[s.vertex]) {
                seen[s.vertex] = 1;
                stack.push_back(s.vertex);
            }
    }

    Contraction c;
    const int v = g.vertex_count();
    c.vertex_map.resize(v);
    for (int i = 0, k = 0; i < v; ++i) {
        if (i == up) continue;
        c.vertex_map[i] = k++;
    }
    c.vertex_map[up] = c.vertex_map[lo];
    c.merged = c.vertex_map[lo];

    // New slot index of each old slot of lo and up on the merged vertex.
    std::vector<int> in_lo(g.ins[lo].size()), in_up(g.ins[up].size(), -1);
    std::vector<int> out_lo(g.outs[lo].size(), -1), out_up(g.outs[up].size());
    int k = 0;
    for (std::size_t i = 0; i < g.ins[lo].size(); ++i) in_lo[i] = k++;
    for (std::size_t i = 0; i < g.ins[up].size(); ++i)
        if (static_cast<int>(i) != dst_slot) in_up[i] = k++;
    const int merged_in = k;
    k = 0;
    for (std::size_t j = 0; j < g.outs[lo].size(); ++j)
        if (static_cast<int>(j) != e.slot) out_lo[j] = k++;
    for (std::size_t j = 0; j < g.outs[up].size(); ++j) out_up[j] = k++;
    const int merged_out = k;

    auto new_in_slot = [&](int vert, int slot) {
        if (vert == lo) return in_lo[slot];
        if (vert == up) return in_up[slot];
        return slot;
    };
    auto new_out_slot = [&](int vert, int slot) {
        if (vert == lo) return out_lo[slot];
        if (vert == up) return out_up[slot];
        return slot;
    };

    RigidGraph& s = c.skeleton;
    s.m = g.m;
    s.n = g.n;
    s.types.resize(v - 1);
    s.ins.resize(v - 1);
    s.outs.resize(v - 1);
    for (int i = 0; i < v; ++i) {
        if (i == up) continue;
        const int ni = c.vertex_map[i];
        if (i == lo) {
            s.types[ni] = -1;
            s.ins[ni].resize(merged_in);
            s.outs[ni].resize(merged_out);
        } else {
            s.types[ni] = g.types[i];
            s.ins[ni].resize(g.ins[i].size());
            s.outs[ni].resize(g.outs[i].size());
        }
    }
    for (int i = 0; i < v; ++i) {
        const int ni = c.vertex_map[i];
        for (std::size_t a = 0; a < g.ins[i].size(); ++a) {
            if (i == up && static_cast<int>(a) == dst_slot) continue;
            const End& src = g.ins[i][a];
            End ns = src.external() ? src : End{c.vertex_map[src.vertex], new_out_slot(src.vertex, src.slot)};
            s.ins[ni][new_in_slot(i, static_cast<int>(a))] = ns;
        }
        for (std::size_t b = 0; b < g.outs[i].size(); ++b) {
            if (i == lo && static_cast<int>(b) == e.slot) continue;
            const End& dstend = g.outs[i][b];
            End nd = dstend.external() ? dstend : End{c.vertex_map[dstend.vertex], new_in_slot(dstend.vertex, dstend.slot)};
            s.outs[ni][new_out_slot(i, static_cast<int>(b))] = nd;
            if (i == lo && !dstend.external() && dstend.vertex == up) ++c.remaining_parallel;
        }
    }
    return c;
}

std::set<int> reachable_set(const RigidGraph& g, int input_label) {
    std::set<int> out;
    std::vector<int> stack;
    for (int v = 0; v < g.vertex_count(); ++v)
        for (const auto& s : g.ins[v])
            if (s.external() && s.slot == input_label && out.insert(v).second) stack.push_back(v);
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (const auto& s : g.outs[u])
            if (!s.external() && out.insert(s.vertex).second) stack.push_back(s.vertex);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Fixture format: {"inputs": m, "outputs": n, "vertices": [{"type": t,
// "in": [...], "out": [...]}]} where a slot entry is a leg label or a
// [vertex, slot] pair (both 1-based) naming the other end of an edge.

std::string graph_to_json(const RigidGraph& g) {
    using nlohmann::json;
    auto slot_json = [](const End& s) { return s.external() ? json(s.slot) : json::array({s.vertex + 1, s.slot + 1}); };
    json vs = json::array();
    for (int v = 0; v < g.vertex_count(); ++v) {
        json in = json::array(), out = json::array();
        for (const auto& s : g.ins[v]) in.push_back(slot_json(s));
        for (const auto& s : g.outs[v]) out.push_back(slot_json(s));
        vs.push_back(json{{"type", g.types[v]}, {"in", in}, {"out", out}});
    }
    return json{{"inputs", g.m}, {"outputs", g.n}, {"vertices", vs}}.dump();
}

RigidGraph graph_from_json(const std::string& text) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SyntaxError(e.what(), e.byte);
    }
    RigidGraph g;
    try {
        g.m = doc.at("inputs").get<int>();
        g.n = doc.at("outputs").get<int>();
        auto slot = [](const json& j) {
            if (j.is_array()) return End{j.at(0).get<int>() - 1, j.at(1).get<int>() - 1};
            return End{-1, j.get<int>()};
        };
        for (const auto& v : doc.at("vertices")) {
            g.types.push_back(v.at("type").get<int>());
            std::vector<End> in, out;
            for (const auto& s : v.at("in")) in.push_back(slot(s));
            for (const auto& s : v.at("out")) out.push_back(slot(s));
            g.ins.push_back(std::move(in));
            g.outs.push_back(std::move(out));
        }
    } catch (const json::exception& e) {
        throw SyntaxError(std::string("malformed graph fixture: ") + e.what());
    }
    validate(g);
    return g;
}

}  // namespace koszulab
