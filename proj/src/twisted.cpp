#include "koszulab/twisted.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <set>

#include "json.hpp"
#include "koszulab/errors.hpp"

namespace koszulab {

DerivedCollection::DerivedCollection(SpanEngine& e, int frozen_inputs, DerivedCollection* owner)
    : e_(e), frozen_(frozen_inputs), owner_(owner) {
    if (owner && &owner->engine() != &e) throw Error("module and algebra must share an engine");
}

const std::vector<TwistedComponent>& DerivedCollection::components(int weight) {
    auto it = components_.find(weight);
    if (it != components_.end()) return it->second;
    std::vector<TwistedComponent> out;
    if (weight >= 1) {
        const auto arities = block_arities(e_.presentation(), weight);
        const auto found = arities.find(weight);
        if (found != arities.end())
            for (const auto& [a, b] : found->second) {
                if (a < frozen_ || b < 1) continue;
                TwistedComponent c;
                c.m = a - frozen_;
                c.n = b - 1;
                c.weight = weight;
                c.source = BlockKey{a, b, weight, 0};
                c.dim = e_.dimension(c.source, SpanMode::Quotient);
                if (c.dim > 0) out.push_back(c);
            }
    }
    components_[weight] = std::move(out);
    normalize(weight);
    return components_[weight];
}

// One-dimensional components of weight w >= 2 are scaled so that the first
// nonzero product of a one-dimensional weight w-1 component with a
// one-dimensional weight-one component of the owner has coefficient 1.
void DerivedCollection::normalize(int weight) {
    if (weight < 2) return;
    auto& comps = components_[weight];
    for (auto& c : comps) {
        if (c.dim != 1) continue;
        const auto lower = components(weight - 1);
        const auto upper = owner().components(1);
        bool done = false;
        for (const auto& l : lower) {
            for (const auto& u : upper) {
                if (l.dim != 1 || u.dim != 1 || l.m + u.m != c.m || l.n + u.n != c.n) continue;
                const SparseVector raw = raw_multiply(l, 0, u, 0);
                if (raw.empty()) continue;
                c.scale = l.scale * u.scale * raw.front().second;
                done = true;
                break;
            }
            if (done) break;
        }
    }
}

int DerivedCollection::find(int m, int n, int weight) {
    const auto& comps = components(weight);
    for (std::size_t i = 0; i < comps.size(); ++i)
        if (comps[i].m == m && comps[i].n == n) return static_cast<int>(i);
    return -1;
}

int DerivedCollection::dim(int m, int n, int max_weight) {
    int total = 0;
    for (int w = 1; w <= max_weight; ++w) {
        const int c = find(m, n, w);
        if (c >= 0) total += components(w)[c].dim;
    }
    return total;
}

SparseVector DerivedCollection::raw_multiply(const TwistedComponent& lower, int i, const TwistedComponent& upper, int j) {
    const ClassVector a{upper.source, SparseVector{{j, Rational(1)}}};
    const ClassVector b{lower.source, SparseVector{{i, Rational(1)}}};
    const ClassVector x = e_.compose(a, b, {{lower.n + 1, upper.m + owner().frozen_inputs()}});
    if (x.coeffs.empty()) return {};
    // Composite inputs: lower's free, lower's frozen, upper's free.
    Perm in_perm(lower.m + frozen_ + upper.m);
    for (int p = 0; p < lower.m; ++p) in_perm[p] = p;
    for (int t = 0; t < frozen_; ++t) in_perm[lower.m + t] = lower.m + upper.m + t;
    for (int q = 0; q < upper.m; ++q) in_perm[lower.m + frozen_ + q] = lower.m + q;
    return e_.relabel_legs(x, in_perm, identity_perm(lower.n + upper.n + 1)).coeffs;
}

const SparseVector& DerivedCollection::multiply(int lw, int lc, int i, int uw, int uc, int j) {
    const auto key = std::make_tuple(lw, lc, i, uw, uc, j);
    auto it = products_.find(key);
    if (it != products_.end()) return it->second;
    const TwistedComponent l = components(lw).at(lc);
    const TwistedComponent u = owner().components(uw).at(uc);
    SparseVector raw = raw_multiply(l, i, u, j);
    SparseVector out;
    const int target = find(l.m + u.m, l.n + u.n, lw + uw);
    if (target < 0) {
        if (!raw.empty()) throw Error("product lands in a missing component");
    } else {
        const Rational s = l.scale * u.scale / components(lw + uw)[target].scale;
        out = scaled(raw, s);
    }
    return products_.emplace(key, std::move(out)).first->second;
}

const SparseVector& DerivedCollection::act(int w, int c, int basis, const Perm& in_perm, const Perm& out_perm) {
    const auto key = std::make_tuple(w, c, basis, in_perm, out_perm);
    auto it = actions_.find(key);
    if (it != actions_.end()) return it->second;
    const TwistedComponent& comp = components(w).at(c);
    Perm in = in_perm, out = out_perm;
    for (int t = 0; t < frozen_; ++t) in.push_back(comp.m + t);
    out.push_back(comp.n);
    const ClassVector x = e_.relabel_legs(ClassVector{comp.source, SparseVector{{basis, Rational(1)}}}, in, out);
    return actions_.emplace(key, x.coeffs).first->second;
}

namespace {

// Ordered set partitions of {1..total} into blocks of the given sizes, each
// block sorted.
void set_partitions(int total, const std::vector<int>& sizes,
                    const std::function<void(const std::vector<std::vector<int>>&)>& visit) {
    std::vector<std::vector<int>> blocks(sizes.size());
    std::function<void(int)> rec = [&](int label) {
        if (label > total) {
            visit(blocks);
            return;
        }
        for (std::size_t b = 0; b < sizes.size(); ++b) {
            if (static_cast<int>(blocks[b].size()) == sizes[b]) continue;
            blocks[b].push_back(label);
            rec(label + 1);
            blocks[b].pop_back();
        }
    };
    rec(1);
}

// Position of each concatenated label in the sorted union.
Perm merge_perm(const std::vector<int>& a, const std::vector<int>& b, std::vector<int>& merged) {
    merged = a;
    merged.insert(merged.end(), b.begin(), b.end());
    std::vector<int> sorted = merged;
    std::sort(sorted.begin(), sorted.end());
    Perm p(merged.size());
    for (std::size_t i = 0; i < merged.size(); ++i)
        p[i] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), merged[i]) - sorted.begin());
    merged = std::move(sorted);
    return p;
}

int cross_inversions(const std::vector<int>& a, const std::vector<int>& b) {
    int count = 0;
    for (int x : a)
        for (int y : b)
            if (x > y) ++count;
    return count;
}

int inversions(const std::vector<std::vector<int>>& blocks) {
    int count = 0;
    for (std::size_t s = 0; s < blocks.size(); ++s)
        for (std::size_t t = 0; t < s; ++t) count += cross_inversions(blocks[t], blocks[s]);
    return count;
}

struct Character {
    int in = 1;
    int out = 1;
};

// Character of a one-dimensional component, read from adjacent transpositions.
Character character(DerivedCollection& c, int w, int idx) {
    const TwistedComponent& comp = c.components(w)[idx];
    Character ch;
    auto sign_of = [](const SparseVector& v) {
        if (v.size() != 1 || (v.front().second != 1 && v.front().second != -1))
            throw Error("component does not act by a character");
        return v.front().second == 1 ? 1 : -1;
    };
    if (comp.m >= 2) {
        Perm p = identity_perm(comp.m);
        std::swap(p[0], p[1]);
        ch.in = sign_of(c.act(w, idx, 0, p, identity_perm(comp.n)));
    }
    if (comp.n >= 2) {
        Perm p = identity_perm(comp.n);
        std::swap(p[0], p[1]);
        ch.out = sign_of(c.act(w, idx, 0, identity_perm(comp.m), p));
    }
    return ch;
}

struct PieceInfo {
    int m = 0;
    int n = 0;
    int dim = 0;
};

// The quadratic model: one one-dimensional piece per weight, spanned by
// products of the weight-one generator, acting on inputs and outputs by
// characters, with all normalized product constants equal to 1. Built from
// weights up to 3 of the derived collections.
struct QuadraticModel {
    PieceInfo gen;
    PieceInfo module_gen;
    Character alg;
    Character mod;
    bool module = false;

    PieceInfo piece(bool is_module, int w) const {
        const PieceInfo& base = is_module ? module_gen : gen;
        return {base.m + (w - 1) * gen.m, base.n + (w - 1) * gen.n, 1};
    }
};

constexpr int kModelCheckWeight = 3;

std::optional<QuadraticModel> quadratic_model(TwistedAlgebra& a, TwistedRightModule* mod) {
    QuadraticModel model;
    model.module = mod != nullptr;
    auto check = [&](DerivedCollection& c, bool is_module, Character& ch) {
        std::optional<int> in, out;
        for (int w = 1; w <= kModelCheckWeight; ++w) {
            const auto& comps = c.components(w);
            if (comps.size() != 1 || comps[0].dim != 1) return false;
            if (w == 1) (is_module ? model.module_gen : model.gen) = {comps[0].m, comps[0].n, 1};
            const PieceInfo expect = model.piece(is_module, w);
            if (comps[0].m != expect.m || comps[0].n != expect.n) return false;
            Character x;
            try {
                x = character(c, w, 0);
            } catch (const Error&) {
                return false;
            }
            if (comps[0].m >= 2) {
                if (in && *in != x.in) return false;
                in = x.in;
            }
            if (comps[0].n >= 2) {
                if (out && *out != x.out) return false;
                out = x.out;
            }
            if (w >= 2) {
                const SparseVector& prod = c.multiply(w - 1, 0, 0, 1, 0, 0);
                if (prod.size() != 1 || prod.front().second != 1) return false;
            }
        }
        ch = Character{in.value_or(1), out.value_or(1)};
        return true;
    };
    if (!check(a, false, model.alg)) return std::nullopt;
    if (mod && !check(*mod, true, model.mod)) return std::nullopt;
    return model;
}

class TwistedBarBuilder {
public:
    TwistedBarBuilder(TwistedAlgebra& a, TwistedRightModule* mod, int N, std::optional<QuadraticModel> model)
        : a_(a), mod_(mod), N_(N), model_(std::move(model)) {}

    TwistedBarComplex build();

private:
    bool is_module(int l) const { return mod_ && l == 0; }
    DerivedCollection& piece_owner(int l) { return is_module(l) ? static_cast<DerivedCollection&>(*mod_) : a_; }
    std::vector<PieceInfo> pieces_at(int l, int w);
    void enumerate();
    SparseMatrix differential(int s);
    SparseVector merged_generic(const TwistedChain& c, int l, TwistedChain& target);
    SparseVector merged_partition(const TwistedChain& c, int l, TwistedChain& target);

    TwistedAlgebra& a_;
    TwistedRightModule* mod_;
    int N_;
    std::optional<QuadraticModel> model_;
    std::vector<std::vector<TwistedChain>> basis_;
    std::vector<std::map<TwistedChain, int>> index_;
};

std::vector<PieceInfo> TwistedBarBuilder::pieces_at(int l, int w) {
    if (model_) return {model_->piece(is_module(l), w)};
    std::vector<PieceInfo> out;
    for (const auto& c : piece_owner(l).components(w)) out.push_back({c.m, c.n, c.dim});
    return out;
}

void TwistedBarBuilder::enumerate() {
    basis_.assign(N_, {});
    index_.assign(N_, {});
    std::vector<std::pair<int, int>> pieces;
    std::vector<PieceInfo> infos;
    std::function<void(int)> rec = [&](int remaining) {
        if (remaining == 0 && !pieces.empty()) {
            std::vector<int> ms, ns;
            int M = 0, Nout = 0;
            for (const auto& c : infos) {
                ms.push_back(c.m);
                ns.push_back(c.n);
                M += c.m;
                Nout += c.n;
            }
            const int s = N_ - static_cast<int>(pieces.size());
            set_partitions(M, ms, [&](const std::vector<std::vector<int>>& ins) {
                set_partitions(Nout, ns, [&](const std::vector<std::vector<int>>& outs) {
                    TwistedChain ch{pieces, ins, outs, std::vector<int>(pieces.size(), 0)};
                    std::function<void(std::size_t)> digits = [&](std::size_t l) {
                        if (l == pieces.size()) {
                            basis_[s].push_back(ch);
                            return;
                        }
                        for (int b = 0; b < infos[l].dim; ++b) {
                            ch.basis[l] = b;
                            digits(l + 1);
                        }
                    };
                    digits(0);
                });
            });
            return;
        }
        const int l = static_cast<int>(pieces.size());
        for (int w = 1; w <= remaining; ++w) {
            const auto avail = pieces_at(l, w);
            for (std::size_t c = 0; c < avail.size(); ++c) {
                pieces.emplace_back(w, static_cast<int>(c));
                infos.push_back(avail[c]);
                rec(remaining - w);
                pieces.pop_back();
                infos.pop_back();
            }
        }
    };
    rec(N_);
    for (int s = 0; s < N_; ++s) {
        std::sort(basis_[s].begin(), basis_[s].end());
        for (std::size_t i = 0; i < basis_[s].size(); ++i) index_[s][basis_[s][i]] = static_cast<int>(i);
    }
}

// Removes pieces l and l+1 from c and inserts the merged labels; the merged
// component and basis vector are filled in by the caller.
TwistedChain collapse(const TwistedChain& c, int l, std::vector<int> ins, std::vector<int> outs) {
    TwistedChain t;
    for (std::size_t k = 0; k < c.pieces.size(); ++k) {
        if (static_cast<int>(k) == l + 1) continue;
        if (static_cast<int>(k) == l) {
            t.pieces.push_back({0, 0});
            t.ins.push_back(ins);
            t.outs.push_back(outs);
            t.basis.push_back(0);
        } else {
            t.pieces.push_back(c.pieces[k]);
            t.ins.push_back(c.ins[k]);
            t.outs.push_back(c.outs[k]);
            t.basis.push_back(c.basis[k]);
        }
    }
    return t;
}

SparseVector TwistedBarBuilder::merged_generic(const TwistedChain& c, int l, TwistedChain& target) {
    DerivedCollection& lower = piece_owner(l);
    const auto [lw, lc] = c.pieces[l];
    const auto [uw, uc] = c.pieces[l + 1];
    const SparseVector& prod = lower.multiply(lw, lc, c.basis[l], uw, uc, c.basis[l + 1]);
    std::vector<int> ins, outs;
    const Perm pin = merge_perm(c.ins[l], c.ins[l + 1], ins);
    const Perm pout = merge_perm(c.outs[l], c.outs[l + 1], outs);
    target = collapse(c, l, ins, outs);
    const auto& lcomp = lower.components(lw)[lc];
    const auto& ucomp = a_.components(uw)[uc];
    const int mc = lower.find(lcomp.m + ucomp.m, lcomp.n + ucomp.n, lw + uw);
    target.pieces[l] = {lw + uw, mc};
    std::map<int, Rational> acc;
    for (const auto& [q, x] : prod)
        for (const auto& [r, y] : lower.act(lw + uw, mc, q, pin, pout)) acc[r] += x * y;
    return from_map(acc);
}

SparseVector TwistedBarBuilder::merged_partition(const TwistedChain& c, int l, TwistedChain& target) {
    std::vector<int> ins, outs;
    merge_perm(c.ins[l], c.ins[l + 1], ins);
    merge_perm(c.outs[l], c.outs[l + 1], outs);
    target = collapse(c, l, ins, outs);
    target.pieces[l] = {c.pieces[l].first + c.pieces[l + 1].first, 0};
    const Character& ch = is_module(l) ? model_->mod : model_->alg;
    Rational x = 1;
    if (ch.in < 0 && cross_inversions(c.ins[l], c.ins[l + 1]) % 2) x = -x;
    if (ch.out < 0 && cross_inversions(c.outs[l], c.outs[l + 1]) % 2) x = -x;
    return {{0, x}};
}

SparseMatrix TwistedBarBuilder::differential(int s) {
    SparseMatrix d(static_cast<int>(basis_[s + 1].size()), static_cast<int>(basis_[s].size()));
    for (std::size_t col = 0; col < basis_[s].size(); ++col) {
        const TwistedChain& c = basis_[s][col];
        std::map<int, Rational> acc;
        for (int l = 0; l + 1 < static_cast<int>(c.pieces.size()); ++l) {
            TwistedChain target;
            const SparseVector v = model_ ? merged_partition(c, l, target) : merged_generic(c, l, target);
            const Rational sign = l % 2 ? -1 : 1;
            for (const auto& [q, x] : v) {
                target.basis[l] = q;
                acc[index_[s + 1].at(target)] += sign * x;
            }
        }
        for (const auto& [r, x] : acc)
            if (x != 0) d.set(r, static_cast<int>(col), x);
    }
    return d;
}

TwistedBarComplex TwistedBarBuilder::build() {
    if (N_ < 1) throw std::invalid_argument("twisted bar complex needs N >= 1");
    enumerate();
    TwistedBarComplex out;
    out.weight = N_;
    out.coefficients = mod_ != nullptr;
    out.complex.key = BlockKey{0, 0, N_, 0};
    for (int s = 0; s < N_; ++s) out.complex.dims.push_back(static_cast<int>(basis_[s].size()));
    for (int s = 0; s + 1 < N_; ++s) out.complex.differentials.push_back(differential(s));
    if (out.complex.differentials.empty())
        out.complex.homology[0] = out.complex.dims[0];
    else
        out.complex.homology = homology(out.complex.differentials);
    out.basis = std::move(basis_);
    return out;
}

}  // namespace

QuadraticCheck weight_two_check(DerivedCollection& a, int m, int n) {
    QuadraticCheck out;
    const int target = a.find(m, n, 2);
    out.algebra = target < 0 ? 0 : a.components(2)[target].dim;
    std::vector<SparseVector> rows;
    const auto& lower = a.components(1);
    const auto& upper = a.owner().components(1);
    for (std::size_t lc = 0; lc < lower.size(); ++lc)
        for (std::size_t uc = 0; uc < upper.size(); ++uc) {
            const auto& l = lower[lc];
            const auto& u = upper[uc];
            if (l.m + u.m != m || l.n + u.n != n) continue;
            set_partitions(m, {l.m, u.m}, [&](const std::vector<std::vector<int>>& ins) {
                set_partitions(n, {l.n, u.n}, [&](const std::vector<std::vector<int>>& outs) {
                    std::vector<int> merged;
                    const Perm pin = merge_perm(ins[0], ins[1], merged);
                    const Perm pout = merge_perm(outs[0], outs[1], merged);
                    for (int i = 0; i < l.dim; ++i)
                        for (int j = 0; j < u.dim; ++j) {
                            ++out.free;
                            std::map<int, Rational> acc;
                            for (const auto& [q, x] : a.multiply(1, static_cast<int>(lc), i, 1, static_cast<int>(uc), j))
                                for (const auto& [r, y] : a.act(2, target, q, pin, pout)) acc[r] += x * y;
                            rows.push_back(from_map(acc));
                        }
                });
            });
        }
    SparseMatrix mat(static_cast<int>(rows.size()), std::max(out.algebra, 1));
    for (std::size_t r = 0; r < rows.size(); ++r) mat.set_row(static_cast<int>(r), rows[r]);
    out.relations = out.free - static_cast<int>(rank(mat));
    return out;
}

void validate(const PartitionPair& pp, int N) {
    if (pp.I.size() != pp.J.size()) throw ArityMismatch("partition pair has unequal block counts");
    std::set<int> in, out;
    for (std::size_t l = 0; l < pp.I.size(); ++l) {
        if (pp.I[l].empty() || pp.J[l].empty()) throw ArityMismatch("partition pair has an empty block");
        if (pp.I[l].size() != pp.J[l].size()) throw ArityMismatch("partition pair blocks differ in size");
        in.insert(pp.I[l].begin(), pp.I[l].end());
        out.insert(pp.J[l].begin(), pp.J[l].end());
    }
    std::set<int> all;
    for (int i = 1; i <= N; ++i) all.insert(i);
    if (in != all || out != all) throw ArityMismatch("partition pair does not cover 1..N exactly once");
}

int inversion_degree(const PartitionPair& pp) { return inversions(pp.I) + inversions(pp.J); }

int inversion_degree(const TwistedChain& c) { return inversions(c.ins) + inversions(c.outs); }

bool partition_path_applies(TwistedAlgebra& a, TwistedRightModule* coefficients) {
    return quadratic_model(a, coefficients).has_value();
}

TwistedBarComplex bar_tw(TwistedAlgebra& a, int N, TwistedRightModule* coefficients, TwistedPath path) {
    if (coefficients && &coefficients->owner() != &a) throw Error("module is over a different algebra");
    std::optional<QuadraticModel> model;
    if (path != TwistedPath::Generic) model = quadratic_model(a, coefficients);
    if (path == TwistedPath::Partition && !model)
        throw Error("partition path needs one-dimensional components acting by characters");
    return TwistedBarBuilder(a, coefficients, N, model).build();
}

PlanarComplex planar_subcomplex(int N) {
    if (N < 1) throw std::invalid_argument("planar complex needs N >= 1");
    PlanarComplex out;
    out.basis.assign(N, {});
    std::vector<int> parts;
    std::function<void(int)> rec = [&](int remaining) {
        if (remaining == 0) {
            out.basis[N - parts.size()].push_back(parts);
            return;
        }
        for (int p = 1; p <= remaining; ++p) {
            parts.push_back(p);
            rec(remaining - p);
            parts.pop_back();
        }
    };
    rec(N);
    std::vector<std::map<std::vector<int>, int>> index(N);
    for (int s = 0; s < N; ++s) {
        std::sort(out.basis[s].begin(), out.basis[s].end());
        for (std::size_t i = 0; i < out.basis[s].size(); ++i) index[s][out.basis[s][i]] = static_cast<int>(i);
        out.complex.dims.push_back(static_cast<int>(out.basis[s].size()));
    }
    for (int s = 0; s + 1 < N; ++s) {
        SparseMatrix d(out.complex.dims[s + 1], out.complex.dims[s]);
        for (std::size_t col = 0; col < out.basis[s].size(); ++col) {
            const auto& c = out.basis[s][col];
            for (std::size_t l = 0; l + 1 < c.size(); ++l) {
                std::vector<int> t(c.begin(), c.begin() + l);
                t.push_back(c[l] + c[l + 1]);
                t.insert(t.end(), c.begin() + l + 2, c.end());
                d.add(index[s + 1].at(t), static_cast<int>(col), l % 2 ? -1 : 1);
            }
        }
        out.complex.differentials.push_back(d);
    }
    out.complex.key = BlockKey{N, N, N, 0};
    if (out.complex.differentials.empty())
        out.complex.homology[0] = out.complex.dims[0];
    else
        out.complex.homology = homology(out.complex.differentials);
    return out;
}

std::string twisted_json(const std::string& presentation, const TwistedBarComplex& b) {
    nlohmann::ordered_json j;
    j["presentation"] = presentation;
    j["block"] = {{"N", b.weight}, {"coefficients", b.coefficients}};
    nlohmann::ordered_json dims = nlohmann::ordered_json::object();
    for (const auto& [s, d] : b.complex.homology) dims[std::to_string(s)] = d;
    j["dims_by_syzygy"] = dims;
    j["verdict"] = b.complex.positive_syzygies().empty() ? "pass" : "fail";
    return j.dump(2);
}

}  // namespace koszulab
