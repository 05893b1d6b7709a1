#include "koszulab/span.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "koszulab/errors.hpp"

namespace koszulab {

// ---------------------------------------------------------------------------
// Collections and decoration transport.

const SparseVector& Collection::act(int t, const Perm& in_perm, const Perm& out_perm, int basis) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_tuple(t, in_perm, out_perm);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
        const VertexType& ty = types_.at(t);
        const std::vector<int> wi = reduced_word(in_perm), wo = reduced_word(out_perm);
        std::vector<SparseVector> cols(ty.dim);
        for (int b = 0; b < ty.dim; ++b) {
            SparseVector v{{b, Rational(1)}};
            for (int w : wi) v = ty.in_transpositions.at(w).apply(v);
            for (int w : wo) v = ty.out_transpositions.at(w).apply(v);
            cols[b] = std::move(v);
        }
        it = cache_.emplace(std::move(key), std::move(cols)).first;
    }
    return it->second.at(basis);
}

std::vector<int> tensor_digits(long index, const std::vector<int>& dims) {
    std::vector<int> d(dims.size());
    for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
        d[k] = static_cast<int>(index % dims[k]);
        index /= dims[k];
    }
    return d;
}

long tensor_index(const std::vector<int>& digits, const std::vector<int>& dims) {
    long idx = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) idx = idx * dims[k] + digits[k];
    return idx;
}

namespace {

std::vector<int> dims_of(const Collection& c, const RigidGraph& g) {
    std::vector<int> d;
    d.reserve(g.types.size());
    for (int t : g.types) d.push_back(c.type(t).dim);
    return d;
}

long product(const std::vector<int>& dims) {
    long p = 1;
    for (int d : dims) p *= d;
    return p;
}

}  // namespace

SparseVector transport(const Collection& c, const RigidGraph& g, const std::vector<int>& order,
                       const std::vector<Perm>& in_perm, const std::vector<Perm>& out_perm, const SparseVector& t) {
    const std::vector<int> old_dims = dims_of(c, g);
    std::vector<int> odd;
    for (int u : order)
        if (c.type(g.types[u]).odd) odd.push_back(u);
    const int sgn = sort_sign(odd);
    std::map<int, Rational> acc;
    std::vector<std::pair<int, Rational>> partial, next;
    for (const auto& [idx, coeff] : t) {
        const std::vector<int> digits = tensor_digits(idx, old_dims);
        partial.assign(1, {0, sgn * coeff});
        for (int u : order) {
            const SparseVector& v = c.act(g.types[u], in_perm[u], out_perm[u], digits[u]);
            const int d = old_dims[u];
            next.clear();
            for (const auto& [p, x] : partial)
                for (const auto& [j, y] : v) next.emplace_back(p * d + j, x * y);
            partial.swap(next);
        }
        for (auto& [p, x] : partial) acc[p] += x;
    }
    return from_map(acc);
}

// ---------------------------------------------------------------------------
// Graph spaces.

GraphSpace::GraphSpace(std::shared_ptr<const Collection> c, int m, int n, int genus,
                       const std::vector<std::vector<Arity>>& multisets, std::size_t max_rigid)
    : collection_(std::move(c)), m_(m), n_(n), genus_(genus) {
    EnumerateOptions opt;
    opt.min_genus = opt.max_genus = genus;
    opt.max_rigid = max_rigid;
    for (const auto& ms : multisets) {
        for (RigidGraph& form : enumerate(m, n, ms, opt)) {
            Shape s;
            Canonical canon = canonicalize(form);
            s.form = std::move(form);
            s.automorphisms = canon.automorphisms;
            s.dims = dims_of(*collection_, s.form);
            s.tensor_size = product(s.dims);

            // Automorphisms acting on decorations: every other minimal vertex
            // order, and swaps of adjacent parallel edges.
            std::vector<std::tuple<std::vector<int>, std::vector<Perm>, std::vector<Perm>>> gens;
            const int nv = s.form.vertex_count();
            for (const auto& order : canon.minimal_orders) {
                std::vector<Perm> ip, op;
                slot_layout(s.form, order, ip, op);
                bool identity = is_identity(order);
                for (int v = 0; v < nv && identity; ++v) identity = is_identity(ip[v]) && is_identity(op[v]);
                if (identity) continue;
                if (relabel(s.form, order, ip, op) != s.form)
                    throw std::logic_error("minimal vertex order does not reproduce the canonical form");
                gens.emplace_back(order, std::move(ip), std::move(op));
            }
            for (int u = 0; u < nv; ++u) {
                const auto& outs = s.form.outs[u];
                for (std::size_t j = 0; j + 1 < outs.size(); ++j) {
                    if (outs[j].external() || outs[j + 1].external() || outs[j].vertex != outs[j + 1].vertex) continue;
                    std::vector<Perm> ip, op;
                    for (int v = 0; v < nv; ++v) {
                        ip.push_back(identity_perm(static_cast<int>(s.form.ins[v].size())));
                        op.push_back(identity_perm(static_cast<int>(s.form.outs[v].size())));
                    }
                    std::swap(op[u][j], op[u][j + 1]);
                    const int w = outs[j].vertex;
                    std::swap(ip[w][outs[j].slot], ip[w][outs[j + 1].slot]);
                    gens.emplace_back(identity_perm(nv), std::move(ip), std::move(op));
                }
            }

            s.trivial = gens.empty();
            if (s.trivial) {
                s.basis.resize(s.tensor_size);
                std::iota(s.basis.begin(), s.basis.end(), 0L);
            } else {
                std::vector<SparseVector> rows;
                for (const auto& [order, ip, op] : gens)
                    for (long i = 0; i < s.tensor_size; ++i) {
                        SparseVector e{{i, Rational(1)}};
                        SparseVector r = axpy(transport(*collection_, s.form, order, ip, op, e), -1, e);
                        if (!r.empty()) rows.push_back(std::move(r));
                    }
                SparseMatrix mat(static_cast<int>(rows.size()), static_cast<int>(s.tensor_size));
                for (std::size_t r = 0; r < rows.size(); ++r) mat.set_row(static_cast<int>(r), rows[r]);
                s.coinvariants = ReducedEchelon(mat);
                for (int col : s.coinvariants.free_columns()) s.basis.push_back(col);
            }
            s.offset = dim_;
            for (std::size_t k = 0; k < s.basis.size(); ++k) {
                s.local[s.basis[k]] = static_cast<int>(k);
                coords_.emplace_back(static_cast<int>(shapes_.size()), s.basis[k]);
            }
            dim_ += static_cast<int>(s.basis.size());
            by_code_.emplace(std::move(canon.code), static_cast<int>(shapes_.size()));
            shapes_.push_back(std::move(s));
        }
    }
}

std::vector<int> GraphSpace::vertex_dims(const RigidGraph& g) const { return dims_of(*collection_, g); }

SparseVector GraphSpace::normalize(const RigidGraph& g, const SparseVector& t) const {
    if (t.empty()) return {};
    Canonical canon = canonicalize(g);
    auto it = by_code_.find(canon.code);
    if (it == by_code_.end()) throw BlockMissing("graph shape is not part of this graph space");
    const Shape& s = shapes_[it->second];
    SparseVector v = transport(*collection_, g, canon.order, canon.in_perm, canon.out_perm, t);
    if (!s.trivial) v = s.coinvariants.reduce(v);
    SparseVector out;
    out.reserve(v.size());
    for (const auto& [idx, x] : v) out.emplace_back(s.offset + s.local.at(idx), x);
    return out;
}

SparseVector GraphSpace::normalize(const RigidGraph& g, long tensor, const Rational& coeff) const {
    if (coeff == 0) return {};
    return normalize(g, SparseVector{{tensor, coeff}});
}

std::pair<int, long> GraphSpace::representative(int c) const { return coords_.at(c); }

// ---------------------------------------------------------------------------
// Graph surgery on rigid representatives.

RigidGraph substitute(const RigidGraph& g, int p, const RigidGraph& t) {
    const int nv = g.vertex_count();
    const int up = nv;
    auto tmap = [&](int x) { return x == 0 ? p : up; };
    // Where the legs of t land in the new graph.
    std::map<int, End> tin, tout;
    for (int x = 0; x < 2; ++x) {
        for (std::size_t s = 0; s < t.ins[x].size(); ++s)
            if (t.ins[x][s].external()) tin[t.ins[x][s].slot] = End{tmap(x), static_cast<int>(s)};
        for (std::size_t s = 0; s < t.outs[x].size(); ++s)
            if (t.outs[x][s].external()) tout[t.outs[x][s].slot] = End{tmap(x), static_cast<int>(s)};
    }
    if (static_cast<int>(tin.size()) != static_cast<int>(g.ins[p].size()) ||
        static_cast<int>(tout.size()) != static_cast<int>(g.outs[p].size()))
        throw ArityMismatch("substituted graph does not match the vertex arity");

    RigidGraph r;
    r.m = g.m;
    r.n = g.n;
    r.types = g.types;
    r.types[p] = t.types[0];
    r.types.push_back(t.types[1]);
    r.ins = g.ins;
    r.outs = g.outs;
    r.ins[p] = t.ins[0];
    r.outs[p] = t.outs[0];
    r.ins.push_back(t.ins[1]);
    r.outs.push_back(t.outs[1]);
    // The internal edge of t.
    for (int x = 0; x < 2; ++x) {
        for (auto& s : r.ins[tmap(x)])
            if (!s.external()) s.vertex = tmap(s.vertex);
        for (auto& s : r.outs[tmap(x)])
            if (!s.external()) s.vertex = tmap(s.vertex);
    }
    // Legs of t stand for the slots of p.
    for (int x = 0; x < 2; ++x) {
        const int nvx = tmap(x);
        for (std::size_t s = 0; s < t.ins[x].size(); ++s) {
            if (!t.ins[x][s].external()) continue;
            const End src = g.ins[p][t.ins[x][s].slot - 1];
            r.ins[nvx][s] = src;
            if (!src.external()) r.outs[src.vertex][src.slot] = End{nvx, static_cast<int>(s)};
        }
        for (std::size_t s = 0; s < t.outs[x].size(); ++s) {
            if (!t.outs[x][s].external()) continue;
            const End dst = g.outs[p][t.outs[x][s].slot - 1];
            r.outs[nvx][s] = dst;
            if (!dst.external()) r.ins[dst.vertex][dst.slot] = End{nvx, static_cast<int>(s)};
        }
    }
    return r;
}

RigidGraph glue(const RigidGraph& a, const RigidGraph& b, const Gluing& gluing) {
    const int vb = b.vertex_count();
    RigidGraph r;
    r.types = b.types;
    r.types.insert(r.types.end(), a.types.begin(), a.types.end());
    r.ins = b.ins;
    r.outs = b.outs;
    for (int v = 0; v < a.vertex_count(); ++v) {
        std::vector<End> in = a.ins[v], out = a.outs[v];
        for (auto& s : in)
            if (!s.external()) s.vertex += vb;
        for (auto& s : out)
            if (!s.external()) s.vertex += vb;
        r.ins.push_back(std::move(in));
        r.outs.push_back(std::move(out));
    }
    std::set<int> glued_out, glued_in;
    for (const auto& [ob, ia] : gluing) {
        if (ob < 1 || ob > b.n || ia < 1 || ia > a.m || !glued_out.insert(ob).second || !glued_in.insert(ia).second)
            throw std::invalid_argument("invalid gluing");
    }
    // Locate legs.
    std::map<int, End> b_out, a_in;
    for (int v = 0; v < vb; ++v)
        for (std::size_t j = 0; j < b.outs[v].size(); ++j)
            if (b.outs[v][j].external()) b_out[b.outs[v][j].slot] = End{v, static_cast<int>(j)};
    for (int v = 0; v < a.vertex_count(); ++v)
        for (std::size_t i = 0; i < a.ins[v].size(); ++i)
            if (a.ins[v][i].external()) a_in[a.ins[v][i].slot] = End{v + vb, static_cast<int>(i)};
    for (const auto& [ob, ia] : gluing) r.connect(b_out[ob].vertex, b_out[ob].slot, a_in[ia].vertex, a_in[ia].slot);
    // Relabel the remaining legs.
    int label = 0;
    for (int l = 1; l <= b.m; ++l) {
        for (int v = 0; v < vb; ++v)
            for (auto& s : r.ins[v])
                if (s.external() && s.slot == l) s = End{-1, -(++label)};
    }
    for (int l = 1; l <= a.m; ++l) {
        if (glued_in.count(l)) continue;
        r.ins[a_in[l].vertex][a_in[l].slot] = End{-1, -(++label)};
    }
    r.m = label;
    label = 0;
    for (int l = 1; l <= b.n; ++l) {
        if (glued_out.count(l)) continue;
        r.outs[b_out[l].vertex][b_out[l].slot] = End{-1, -(++label)};
    }
    for (int l = 1; l <= a.n; ++l) {
        for (int v = vb; v < r.vertex_count(); ++v)
            for (auto& s : r.outs[v])
                if (s.external() && s.slot == l) s = End{-1, -(++label)};
    }
    r.n = label;
    for (auto& slots : r.ins)
        for (auto& s : slots)
            if (s.external()) s.slot = -s.slot;
    for (auto& slots : r.outs)
        for (auto& s : slots)
            if (s.external()) s.slot = -s.slot;
    return r;
}

std::pair<RigidGraph, long> term_graph(const TwoVertexTerm& t, const Presentation& p) {
    const int li = p.generator_index(t.lower.gen), ui = p.generator_index(t.upper.gen);
    const auto& lo = p.generators[li];
    const auto& up = p.generators[ui];
    const auto [m, n] = term_arity(t, p);
    RigidGraph g;
    g.m = m;
    g.n = n;
    g.add_vertex(li, lo.inputs, lo.outputs);
    g.add_vertex(ui, up.inputs, up.outputs);
    const int internal_in = static_cast<int>(std::find(t.upper.in.begin(), t.upper.in.end(), 0) - t.upper.in.begin());
    for (int i = 0; i < lo.inputs; ++i) g.attach_input(t.lower.in[i], 0, i);
    for (int j = 0; j < lo.outputs; ++j) {
        if (t.lower.out[j] == 0)
            g.connect(0, j, 1, internal_in);
        else
            g.attach_output(0, j, t.lower.out[j]);
    }
    for (int i = 0; i < up.inputs; ++i)
        if (t.upper.in[i] != 0) g.attach_input(t.upper.in[i], 1, i);
    for (int j = 0; j < up.outputs; ++j) g.attach_output(1, j, t.upper.out[j]);
    return {g, static_cast<long>(t.lower.basis) * up.dim + t.upper.basis};
}

namespace {

void swap_leg_labels(RigidGraph& g, bool inputs, int i) {
    const int a = i + 1, b = i + 2;
    for (auto& slots : inputs ? g.ins : g.outs)
        for (auto& s : slots)
            if (s.external()) {
                if (s.slot == a)
                    s.slot = b;
                else if (s.slot == b)
                    s.slot = a;
            }
}

// Sign of moving the appended upper vertex of a substitution at p back next
// to the lower vertex.
int moved_upper_sign(const Collection& c, const RigidGraph& g, int p) {
    const int nv = g.vertex_count();
    if (!c.type(g.types[nv - 1]).odd) return 1;
    int s = 1;
    for (int v = p + 1; v < nv - 1; ++v)
        if (c.type(g.types[v]).odd) s = -s;
    return s;
}

SparseMatrix rows_to_matrix(const std::vector<SparseVector>& rows, int cols) {
    SparseMatrix m(static_cast<int>(rows.size()), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) m.set_row(static_cast<int>(r), rows[r]);
    return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// Blocks.

std::string to_string(const BlockKey& k) {
    return "(" + std::to_string(k.m) + "," + std::to_string(k.n) + ",w=" + std::to_string(k.weight) +
           ",g=" + std::to_string(k.genus) + ")";
}

int SpanBasis::dim(SpanMode mode) const {
    switch (mode) {
        case SpanMode::Free: return free_dim();
        case SpanMode::Ideal: return ideal_dim();
        case SpanMode::Quotient: return quotient_dim();
    }
    return 0;
}

SparseVector SpanBasis::project(const SparseVector& v) const {
    SparseVector r = ideal.rank() ? ideal.reduce(v) : v;
    SparseVector out;
    out.reserve(r.size());
    for (const auto& [c, x] : r) out.emplace_back(pivot_index.at(c), x);
    return out;
}

SpanEngine::SpanEngine(Presentation p, EngineOptions opt) : p_(std::move(p)), opt_(std::move(opt)) {
    validate(p_);
    hash_ = presentation_hash(p_);
    std::vector<VertexType> types;
    for (std::size_t i = 0; i < p_.generators.size(); ++i) {
        const auto& g = p_.generators[i];
        types.push_back(
            VertexType{g.id, g.inputs, g.outputs, 1, g.dim, g.degree % 2 != 0, g.in_transpositions, g.out_transpositions});
        generator_arities_.push_back(Arity{static_cast<int>(i), g.inputs, g.outputs});
    }
    generators_ = std::make_shared<const Collection>(std::move(types));
}

std::vector<std::vector<Arity>> SpanEngine::generator_multisets(const BlockKey& key) const {
    return vertex_multisets(key.m, key.n, key.genus, key.weight, key.weight, generator_arities_,
                            std::vector<int>(generator_arities_.size(), 1));
}

std::shared_ptr<const GraphSpace> SpanEngine::free_space(const BlockKey& key) {
    std::lock_guard<std::recursive_mutex> lock(mutex_);
    auto it = free_spaces_.find(key);
    if (it != free_spaces_.end()) return it->second;
    auto s = std::make_shared<const GraphSpace>(generators_, key.m, key.n, key.genus, generator_multisets(key),
                                                opt_.max_rigid);
    free_spaces_.emplace(key, s);
    return s;
}

std::vector<std::pair<int, int>> SpanEngine::weight_two_arities() const {
    std::set<std::pair<int, int>> out;
    for (const auto& a : p_.generators)
        for (const auto& b : p_.generators) out.insert({a.inputs + b.inputs - 1, a.outputs + b.outputs - 1});
    return {out.begin(), out.end()};
}

SparseVector SpanEngine::relation_vector(const Relation& r) {
    const auto [m, n] = term_arity(r.terms.front(), p_);
    auto space = free_space(BlockKey{m, n, 2, 0});
    std::map<int, Rational> acc;
    for (const auto& t : r.terms) {
        auto [g, idx] = term_graph(t, p_);
        for (const auto& [c, x] : space->normalize(g, idx, t.coeff)) acc[c] += x;
    }
    return from_map(acc);
}

SparseMatrix SpanEngine::free_action(const BlockKey& key, bool inputs, int i) {
    auto space = free_space(key);
    SparseMatrix a(space->dim(), space->dim());
    for (int c = 0; c < space->dim(); ++c) {
        const auto [si, idx] = space->representative(c);
        RigidGraph g = space->shapes()[si].form;
        swap_leg_labels(g, inputs, i);
        for (const auto& [r, x] : space->normalize(g, idx)) a.set(r, c, x);
    }
    return a;
}

SparseMatrix SpanEngine::quotient_action(const BlockKey& key, bool inputs, int i) {
    const SpanBasis& b = block(key);
    SparseMatrix a(b.quotient_dim(), b.quotient_dim());
    for (int q = 0; q < b.quotient_dim(); ++q) {
        const auto [si, idx] = b.free->representative(b.pivots[q]);
        RigidGraph g = b.free->shapes()[si].form;
        swap_leg_labels(g, inputs, i);
        for (const auto& [r, x] : b.project(b.free->normalize(g, idx))) a.set(r, q, x);
    }
    return a;
}

const ReducedEchelon& SpanEngine::relation_closure(int m, int n) {
    std::lock_guard<std::recursive_mutex> lock(mutex_);
    auto it = closures_.find({m, n});
    if (it != closures_.end()) return *it->second;
    const BlockKey key{m, n, 2, 0};
    auto space = free_space(key);
    std::vector<SparseVector> rows;
    for (const auto& r : p_.relations)
        if (term_arity(r.terms.front(), p_) == std::pair{m, n}) rows.push_back(relation_vector(r));
    std::vector<SparseMatrix> actions;
    for (int i = 0; i + 1 < m; ++i) actions.push_back(free_action(key, true, i));
    for (int j = 0; j + 1 < n; ++j) actions.push_back(free_action(key, false, j));
    ReducedEchelon e(rows_to_matrix(rows, space->dim()));
    for (bool grew = !rows.empty(); grew;) {
        grew = false;
        for (int p : e.pivot_columns())
            for (const auto& a : actions) {
                SparseVector red = e.reduce(a.apply(e.pivot_row(p)));
                if (!red.empty()) {
                    rows.push_back(std::move(red));
                    grew = true;
                }
            }
        if (grew) e = ReducedEchelon(rows_to_matrix(rows, space->dim()));
    }
    return *closures_.emplace(std::pair{m, n}, std::make_unique<ReducedEchelon>(std::move(e))).first->second;
}

ReducedEchelon SpanEngine::ideal_rows(const BlockKey& key, const GraphSpace& free) {
    if (key.weight < 2) return ReducedEchelon(SparseMatrix(0, free.dim()));
    // Placeholder vertex types carrying the closed relation spaces.
    std::vector<VertexType> types = generators_->types();
    std::vector<Arity> arities = generator_arities_;
    std::vector<int> weights(arities.size(), 1);
    std::vector<std::pair<int, int>> placeholder_arity;
    const int ngen = static_cast<int>(types.size());
    for (const auto& [mx, nx] : weight_two_arities()) {
        const ReducedEchelon& cl = relation_closure(mx, nx);
        if (cl.rank() == 0) continue;
        const std::vector<int>& piv = cl.pivot_columns();
        const int k = static_cast<int>(piv.size());
        const RigidGraph& tree0 = free_space(BlockKey{mx, nx, 2, 0})->shapes().front().form;
        const bool odd = generators_->type(tree0.types[0]).odd != generators_->type(tree0.types[1]).odd;
        VertexType vt{"R(" + std::to_string(mx) + "," + std::to_string(nx) + ")", mx, nx, 2, k, odd, {}, {}};
        for (int side = 0; side < 2; ++side) {
            const int count = side == 0 ? mx - 1 : nx - 1;
            for (int i = 0; i < count; ++i) {
                SparseMatrix act = free_action(BlockKey{mx, nx, 2, 0}, side == 0, i);
                SparseMatrix t(k, k);
                for (int j = 0; j < k; ++j) {
                    SparseVector img = act.apply(cl.pivot_row(piv[j]));
                    for (const auto& [c, x] : img) {
                        auto pos = std::lower_bound(piv.begin(), piv.end(), c);
                        if (pos != piv.end() && *pos == c) t.set(static_cast<int>(pos - piv.begin()), j, x);
                    }
                }
                (side == 0 ? vt.in_transpositions : vt.out_transpositions).push_back(std::move(t));
            }
        }
        arities.push_back(Arity{static_cast<int>(types.size()), mx, nx});
        weights.push_back(2);
        placeholder_arity.emplace_back(mx, nx);
        types.push_back(std::move(vt));
    }
    if (placeholder_arity.empty()) return ReducedEchelon(SparseMatrix(0, free.dim()));
    auto coll = std::make_shared<const Collection>(std::move(types));
    auto multisets = vertex_multisets(key.m, key.n, key.genus, key.weight - 1, key.weight, arities, weights);
    GraphSpace outer(coll, key.m, key.n, key.genus, multisets, opt_.max_rigid);

    std::vector<SparseVector> rows;
    for (int c = 0; c < outer.dim(); ++c) {
        const auto [si, idx] = outer.representative(c);
        const Shape& s = outer.shapes()[si];
        const std::vector<int> digits = tensor_digits(idx, s.dims);
        int p = -1;
        for (int v = 0; v < s.form.vertex_count(); ++v)
            if (s.form.types[v] >= ngen) p = v;
        const auto [mx, nx] = placeholder_arity[s.form.types[p] - ngen];
        const ReducedEchelon& cl = relation_closure(mx, nx);
        const SparseVector& rel = cl.pivot_row(cl.pivot_columns()[digits[p]]);
        auto tree_space = free_space(BlockKey{mx, nx, 2, 0});
        std::map<int, Rational> acc;
        for (const auto& [tc, coeff] : rel) {
            const auto [ti, tidx] = tree_space->representative(tc);
            const RigidGraph& tree = tree_space->shapes()[ti].form;
            const std::vector<int> td = tensor_digits(tidx, tree_space->shapes()[ti].dims);
            RigidGraph g = substitute(s.form, p, tree);
            std::vector<int> gd = digits;
            gd[p] = td[0];
            gd.push_back(td[1]);
            const Rational c = moved_upper_sign(*generators_, g, p) * coeff;
            for (const auto& [fc, x] : free.normalize(g, tensor_index(gd, free.vertex_dims(g)), c)) acc[fc] += x;
        }
        SparseVector row = from_map(acc);
        if (!row.empty()) rows.push_back(std::move(row));
    }
    return ReducedEchelon(rows_to_matrix(rows, free.dim()));
}

const SpanBasis& SpanEngine::block(const BlockKey& key) {
    std::lock_guard<std::recursive_mutex> lock(mutex_);
    auto it = blocks_.find(key);
    if (it != blocks_.end()) return *it->second;
    if (key.m < 1 || key.n < 1 || key.weight < 1 || key.genus < 0)
        throw std::invalid_argument("invalid block " + to_string(key));
    auto b = std::make_unique<SpanBasis>();
    b->key = key;
    b->free = free_space(key);
    if (!load_cached(key, *b)) {
        b->ideal = ideal_rows(key, *b->free);
        store_cached(key, *b);
    }
    for (int c = 0; c < b->free->dim(); ++c)
        if (!b->ideal.is_pivot(c)) {
            b->pivot_index[c] = static_cast<int>(b->pivots.size());
            b->pivots.push_back(c);
        }
    return *blocks_.emplace(key, std::move(b)).first->second;
}

// On-disk cache: one JSON file per block holding the reduced ideal rows.
bool SpanEngine::load_cached(const BlockKey& key, SpanBasis& b) {
    if (opt_.cache_dir.empty()) return false;
    namespace fs = std::filesystem;
    const fs::path path = fs::path(opt_.cache_dir) / (hash_ + "_" + std::to_string(key.m) + "_" + std::to_string(key.n) +
                                                     "_" + std::to_string(key.weight) + "_" +
                                                     std::to_string(key.genus) + ".json");
    std::ifstream in(path);
    if (!in) return false;
    try {
        nlohmann::json doc = nlohmann::json::parse(in);
        if (doc.at("free_dim").get<int>() != b.free->dim()) return false;
        std::vector<SparseVector> rows;
        for (const auto& row : doc.at("rows")) {
            SparseVector v;
            for (const auto& e : row) v.emplace_back(e.at(0).get<int>(), parse_rational(e.at(1).get<std::string>()));
            rows.push_back(std::move(v));
        }
        b.ideal = ReducedEchelon(rows_to_matrix(rows, b.free->dim()));
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

void SpanEngine::store_cached(const BlockKey& key, const SpanBasis& b) {
    if (opt_.cache_dir.empty()) return;
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(opt_.cache_dir, ec);
    const std::string stem = hash_ + "_" + std::to_string(key.m) + "_" + std::to_string(key.n) + "_" +
                             std::to_string(key.weight) + "_" + std::to_string(key.genus);
    nlohmann::json rows = nlohmann::json::array();
    for (int p : b.ideal.pivot_columns()) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& [c, x] : b.ideal.pivot_row(p)) row.push_back(nlohmann::json::array({c, to_string(x)}));
        rows.push_back(std::move(row));
    }
    nlohmann::json doc{{"presentation", p_.name}, {"block", {key.m, key.n, key.weight, key.genus}},
                       {"free_dim", b.free->dim()}, {"rows", rows}};
    const fs::path tmp = fs::path(opt_.cache_dir) / (stem + ".tmp");
    {
        std::ofstream out(tmp);
        if (!out) return;
        out << doc.dump();
    }
    fs::rename(tmp, fs::path(opt_.cache_dir) / (stem + ".json"), ec);
}

// ---------------------------------------------------------------------------
// Composition.

const SparseVector& SpanEngine::compose_basis(const BlockKey& ka, int ia, const BlockKey& kb, int ib,
                                              const Gluing& gluing) {
    std::lock_guard<std::recursive_mutex> lock(mutex_);
    auto ckey = std::make_tuple(ka, ia, kb, ib, gluing);
    auto it = compositions_.find(ckey);
    if (it != compositions_.end()) return it->second;
    const int k = static_cast<int>(gluing.size());
    if (k < 1) throw std::invalid_argument("gluing must match at least one leg");
    const BlockKey kr{ka.m + kb.m - k, ka.n + kb.n - k, ka.weight + kb.weight, ka.genus + kb.genus + k - 1};
    if (kr.genus > opt_.max_genus) throw GenusOverflow("composition lands in genus " + std::to_string(kr.genus));
    const SpanBasis& ba = block(ka);
    const SpanBasis& bb = block(kb);
    if (ia < 0 || ia >= ba.quotient_dim() || ib < 0 || ib >= bb.quotient_dim())
        throw BlockMissing("class index outside block " + to_string(ia < 0 || ia >= ba.quotient_dim() ? ka : kb));
    const auto [sa, ta] = ba.free->representative(ba.pivots[ia]);
    const auto [sb, tb] = bb.free->representative(bb.pivots[ib]);
    const Shape& sha = ba.free->shapes()[sa];
    const Shape& shb = bb.free->shapes()[sb];
    RigidGraph g = glue(sha.form, shb.form, gluing);
    const SpanBasis& br = block(kr);
    SparseVector v = br.project(br.free->normalize(g, tb * sha.tensor_size + ta));
    return compositions_.emplace(std::move(ckey), std::move(v)).first->second;
}

ClassVector SpanEngine::relabel_legs(const ClassVector& x, const Perm& in_perm, const Perm& out_perm) {
    if (x.key == kUnitKey) return x;
    const SpanBasis& b = block(x.key);
    std::map<int, Rational> acc;
    for (const auto& [q, c] : x.coeffs) {
        const auto [si, idx] = b.free->representative(b.pivots[q]);
        RigidGraph g = b.free->shapes()[si].form;
        for (auto& slots : g.ins)
            for (auto& s : slots)
                if (s.external()) s.slot = in_perm.at(s.slot - 1) + 1;
        for (auto& slots : g.outs)
            for (auto& s : slots)
                if (s.external()) s.slot = out_perm.at(s.slot - 1) + 1;
        for (const auto& [r, y] : b.project(b.free->normalize(g, idx))) acc[r] += c * y;
    }
    return ClassVector{x.key, from_map(acc)};
}

ClassVector SpanEngine::compose(const ClassVector& a, const ClassVector& b, const Gluing& gluing) {
    const int k = static_cast<int>(gluing.size());
    if (a.key == kUnitKey || b.key == kUnitKey) {
        if (k != 1) throw std::invalid_argument("the unit composes along exactly one leg");
        const ClassVector& x = a.key == kUnitKey ? b : a;
        const ClassVector& u = a.key == kUnitKey ? a : b;
        const Rational c = u.coeffs.empty() ? Rational(0) : u.coeffs.front().second;
        SparseVector coeffs = c == 0 ? SparseVector{} : scaled(x.coeffs, c);
        Perm in = identity_perm(x.key.m), out = identity_perm(x.key.n);
        if (b.key == kUnitKey) {
            // The unit's input comes first, then the unglued inputs of x.
            const int l = gluing[0].second - 1;
            for (int i = 0; i < x.key.m; ++i) in[i] = i < l ? i + 1 : (i == l ? 0 : i);
        } else {
            // The unglued outputs of x come first, then the unit's output.
            const int l = gluing[0].first - 1;
            for (int j = 0; j < x.key.n; ++j) out[j] = j < l ? j : (j == l ? x.key.n - 1 : j - 1);
        }
        return relabel_legs(ClassVector{x.key, std::move(coeffs)}, in, out);
    }
    ClassVector r;
    r.key = BlockKey{a.key.m + b.key.m - k, a.key.n + b.key.n - k, a.key.weight + b.key.weight,
                     a.key.genus + b.key.genus + k - 1};
    std::map<int, Rational> acc;
    for (const auto& [i, x] : a.coeffs)
        for (const auto& [j, y] : b.coeffs)
            for (const auto& [c, z] : compose_basis(a.key, i, b.key, j, gluing)) acc[c] += x * y * z;
    r.coeffs = from_map(acc);
    return r;
}

// ---------------------------------------------------------------------------
// Rigid-span reference implementation.

namespace {

void swap_slots(RigidGraph& g, int v, bool inputs, int i) {
    auto& slots = inputs ? g.ins[v] : g.outs[v];
    std::swap(slots[i], slots[i + 1]);
    for (int k : {i, i + 1}) {
        const End& e = slots[k];
        if (e.external()) continue;
        (inputs ? g.outs : g.ins)[e.vertex][e.slot] = End{v, k};
    }
}

}  // namespace

namespace {

// Union-find over coordinates related by x_i = c x_j, with classes forced
// to zero marked dead. Rows with more than two entries are rejected.
class ScalarClasses {
public:
    explicit ScalarClasses(int n) : parent_(n), ratio_(n, Rational(1)), dead_(n, false) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    bool add(const SparseVector& row) {
        if (row.size() > 2) return false;
        if (row.size() == 1) {
            dead_[find(row[0].first)] = true;
            return true;
        }
        // a x_i + b x_j = 0, so x_i = c x_j.
        const auto [i, a] = row[0];
        const auto [j, b] = row[1];
        const Rational c = -b / a;
        const int ri = find(i), rj = find(j);
        if (ri == rj) {
            if (ratio_[i] != c * ratio_[j]) dead_[ri] = true;
            return true;
        }
        // x_ri = x_i / ratio_i = c ratio_j / ratio_i x_rj.
        ratio_[ri] = c * ratio_[j] / ratio_[i];
        parent_[ri] = rj;
        dead_[rj] = dead_[rj] || dead_[ri];
        return true;
    }

    // Number of live classes and the rows rewritten in class coordinates.
    std::pair<int, std::vector<SparseVector>> reduce(const std::vector<SparseVector>& rows) {
        std::vector<int> id(parent_.size(), -1);
        int live = 0;
        for (std::size_t i = 0; i < parent_.size(); ++i)
            if (find(static_cast<int>(i)) == static_cast<int>(i) && !dead_[i]) id[i] = live++;
        std::vector<SparseVector> out;
        for (const auto& row : rows) {
            std::map<int, Rational> acc;
            for (const auto& [c, x] : row) {
                const int r = find(c);
                if (id[r] >= 0) acc[id[r]] += x * ratio_[c];
            }
            SparseVector v = from_map(acc);
            if (!v.empty()) out.push_back(std::move(v));
        }
        return {live, out};
    }

private:
    // Root of i, with ratio_[i] rewritten relative to it.
    int find(int i) {
        if (parent_[i] == i) return i;
        const int p = parent_[i];
        const int r = find(p);
        if (p != r) {
            ratio_[i] = ratio_[i] * ratio_[p];
            parent_[i] = r;
        }
        return r;
    }

    std::vector<int> parent_;
    std::vector<Rational> ratio_;
    std::vector<bool> dead_;
};

}  // namespace

OracleDims oracle_dimensions(const Presentation& p, const BlockKey& key, std::size_t max_rigid) {
    std::vector<Arity> arities;
    for (std::size_t i = 0; i < p.generators.size(); ++i)
        arities.push_back(Arity{static_cast<int>(i), p.generators[i].inputs, p.generators[i].outputs});
    auto dim_of = [&](int t) { return p.generators[t].dim; };
    EnumerateOptions opt;
    opt.min_genus = opt.max_genus = key.genus;
    opt.dedupe = false;
    opt.max_rigid = max_rigid;

    std::vector<RigidGraph> rigid;
    for (const auto& ms : vertex_multisets(key.m, key.n, key.genus, key.weight, key.weight, arities,
                                           std::vector<int>(arities.size(), 1)))
        for (auto& g : enumerate(key.m, key.n, ms, opt)) rigid.push_back(std::move(g));
    std::map<RigidGraph, int> index;
    std::vector<long> offset;
    std::vector<std::vector<int>> dims;
    long total = 0;
    for (std::size_t i = 0; i < rigid.size(); ++i) {
        index.emplace(rigid[i], static_cast<int>(i));
        std::vector<int> d;
        for (int t : rigid[i].types) d.push_back(dim_of(t));
        offset.push_back(total);
        total += product(d);
        dims.push_back(std::move(d));
    }
    auto coord = [&](const RigidGraph& g, const std::vector<int>& digits) {
        auto it = index.find(g);
        if (it == index.end()) throw std::logic_error("rigid graph missing from the rigid span");
        return static_cast<int>(offset[it->second] + tensor_index(digits, dims[it->second]));
    };

    std::vector<SparseVector> sym;
    for (std::size_t gi = 0; gi < rigid.size(); ++gi) {
        const RigidGraph& g = rigid[gi];
        const int nv = g.vertex_count();
        for (long t = 0; t < product(dims[gi]); ++t) {
            const std::vector<int> digits = tensor_digits(t, dims[gi]);
            const int here = static_cast<int>(offset[gi] + t);
            for (int v = 0; v < nv; ++v) {
                const auto& gen = p.generators[g.types[v]];
                for (int side = 0; side < 2; ++side) {
                    const int count = side == 0 ? gen.inputs - 1 : gen.outputs - 1;
                    for (int i = 0; i < count; ++i) {
                        RigidGraph h = g;
                        swap_slots(h, v, side == 0, i);
                        const SparseMatrix& tr = side == 0 ? gen.in_transpositions[i] : gen.out_transpositions[i];
                        std::map<int, Rational> row;
                        row[here] += 1;
                        for (const auto& [b, x] : tr.apply(SparseVector{{digits[v], Rational(1)}})) {
                            std::vector<int> d2 = digits;
                            d2[v] = b;
                            row[coord(h, d2)] -= x;
                        }
                        SparseVector r = from_map(row);
                        if (!r.empty()) sym.push_back(std::move(r));
                    }
                }
            }
            for (int k = 0; k + 1 < nv; ++k) {
                std::vector<int> order = identity_perm(nv);
                std::swap(order[k], order[k + 1]);
                std::vector<Perm> ip, op;
                for (int v = 0; v < nv; ++v) {
                    ip.push_back(identity_perm(static_cast<int>(g.ins[v].size())));
                    op.push_back(identity_perm(static_cast<int>(g.outs[v].size())));
                }
                RigidGraph h = relabel(g, order, ip, op);
                std::vector<int> d2 = digits;
                std::swap(d2[k], d2[k + 1]);
                std::map<int, Rational> row;
                const bool both_odd = p.generators[g.types[k]].degree % 2 && p.generators[g.types[k + 1]].degree % 2;
                row[here] += 1;
                row[coord(h, d2)] -= both_odd ? -1 : 1;
                SparseVector r = from_map(row);
                if (!r.empty()) sym.push_back(std::move(r));
            }
        }
    }

    // Relation insertion: every rigid graph with one placeholder vertex, every
    // relation of the placeholder's arity, every decoration of the others.
    std::vector<SparseVector> ideal;
    std::map<std::pair<int, int>, std::vector<const Relation*>> by_arity;
    for (const auto& r : p.relations) by_arity[term_arity(r.terms.front(), p)].push_back(&r);
    if (key.weight >= 2) {
        for (const auto& [ar, rels] : by_arity) {
            std::vector<Arity> with = arities;
            std::vector<int> weights(arities.size(), 1);
            const int ph = 1000;
            with.push_back(Arity{ph, ar.first, ar.second});
            weights.push_back(2);
            for (const auto& ms :
                 vertex_multisets(key.m, key.n, key.genus, key.weight - 1, key.weight, with, weights)) {
                for (const RigidGraph& g : enumerate(key.m, key.n, ms, opt)) {
                    const int nv = g.vertex_count();
                    int pv = -1;
                    std::vector<int> d;
                    for (int v = 0; v < nv; ++v) {
                        if (g.types[v] == ph) pv = v;
                        d.push_back(g.types[v] == ph ? 1 : dim_of(g.types[v]));
                    }
                    for (long t = 0; t < product(d); ++t) {
                        const std::vector<int> digits = tensor_digits(t, d);
                        for (const Relation* rel : rels) {
                            std::map<int, Rational> row;
                            for (const auto& term : rel->terms) {
                                auto [tg, tidx] = term_graph(term, p);
                                RigidGraph h = substitute(g, pv, tg);
                                std::vector<int> d2 = digits;
                                d2[pv] = term.lower.basis;
                                d2.push_back(term.upper.basis);
                                int sgn = 1;
                                if (p.generators[p.generator_index(term.upper.gen)].degree % 2)
                                    for (int v = pv + 1; v < nv; ++v)
                                        if (p.generators[g.types[v]].degree % 2) sgn = -sgn;
                                row[coord(h, d2)] += sgn * term.coeff;
                            }
                            SparseVector r = from_map(row);
                            if (!r.empty()) ideal.push_back(std::move(r));
                        }
                    }
                }
            }
        }
    }

    OracleDims out;
    out.rigid = static_cast<int>(total);
    const int cols = static_cast<int>(total);
    ScalarClasses classes(cols);
    const bool monomial = std::all_of(sym.begin(), sym.end(), [&](const SparseVector& r) { return classes.add(r); });
    if (monomial) {
        // Symmetry rows identify coordinates up to scalars; the ideal is
        // ranked on the surviving classes.
        const auto [live, ideal_rows] = classes.reduce(ideal);
        const std::size_t rank_ideal = rank(rows_to_matrix(ideal_rows, live));
        out.free = live;
        out.ideal = static_cast<int>(rank_ideal);
        out.quotient = live - static_cast<int>(rank_ideal);
        return out;
    }
    const std::size_t rank_sym = rank(rows_to_matrix(sym, cols));
    std::vector<SparseVector> all = sym;
    all.insert(all.end(), ideal.begin(), ideal.end());
    const std::size_t rank_all = rank(rows_to_matrix(all, cols));
    out.free = cols - static_cast<int>(rank_sym);
    out.ideal = static_cast<int>(rank_all - rank_sym);
    out.quotient = cols - static_cast<int>(rank_all);
    return out;
}

std::map<std::pair<int, int>, int> genus_vanishing_report(SpanEngine& e, int m, int n, int max_weight,
                                                          int max_genus) {
    std::map<std::pair<int, int>, int> out;
    for (int w = 1; w <= max_weight; ++w)
        for (int g = 1; g <= max_genus; ++g) out[{w, g}] = e.dimension(BlockKey{m, n, w, g}, SpanMode::Quotient);
    return out;
}

// ---------------------------------------------------------------------------
// Quadratic duality.

Presentation quadratic_dual(const Presentation& p) {
    SpanEngine e(p);
    Presentation d;
    d.name = p.name + "_dual";
    d.kind = p.kind;
    for (const auto& g : p.generators) {
        GeneratorSpace h = g;
        // Transposition matrices are involutions, so the contragredient
        // action is the transpose. Dual generators are desuspended.
        for (auto& t : h.in_transpositions) t = t.transpose();
        for (auto& t : h.out_transpositions) t = t.transpose();
        h.degree = 1 - g.degree;
        d.generators.push_back(std::move(h));
    }
    for (const auto& [m, n] : e.weight_two_arities()) {
        const BlockKey key{m, n, 2, 0};
        const SpanBasis& b = e.block(key);
        const GraphSpace& space = *b.free;
        const ReducedEchelon& cl = e.relation_closure(m, n);
        SparseMatrix rmat(static_cast<int>(cl.rank()), space.dim());
        for (std::size_t r = 0; r < cl.rank(); ++r) rmat.set_row(static_cast<int>(r), cl.pivot_row(cl.pivot_columns()[r]));
        for (const auto& vec : kernel_basis(rmat)) {
            Relation rel{"annihilator(" + std::to_string(m) + "," + std::to_string(n) + ")", {}};
            for (int c = 0; c < space.dim(); ++c) {
                if (vec[c] == 0) continue;
                const auto [si, idx] = space.representative(c);
                const Shape& s = space.shapes()[si];
                const std::vector<int> digits = tensor_digits(idx, s.dims);
                const RigidGraph& g = s.form;
                TwoVertexTerm t;
                t.coeff = vec[c];
                for (int x = 0; x < 2; ++x) {
                    TermVertex& tv = x == 0 ? t.lower : t.upper;
                    tv.gen = p.generators[g.types[x]].id;
                    tv.basis = digits[x];
                    for (const auto& s2 : g.ins[x]) tv.in.push_back(s2.external() ? s2.slot : 0);
                    for (const auto& s2 : g.outs[x]) tv.out.push_back(s2.external() ? s2.slot : 0);
                }
                rel.terms.push_back(std::move(t));
            }
            d.relations.push_back(std::move(rel));
        }
    }
    validate(d);
    return d;
}

}  // namespace koszulab
