#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "koszulab/graphs.hpp"
#include "koszulab/linalg.hpp"
#include "koszulab/presentation.hpp"

namespace koszulab {

// A vertex decoration space: an S_m x S_n module with explicit transposition
// matrices, a weight, and a parity for Koszul signs when vertices are
// reordered.
struct VertexType {
    std::string name;
    int inputs = 0;
    int outputs = 0;
    int weight = 1;
    int dim = 0;
    bool odd = false;
    std::vector<SparseMatrix> in_transpositions;
    std::vector<SparseMatrix> out_transpositions;
};

// A list of vertex types with a cache of permutation actions.
class Collection {
public:
    explicit Collection(std::vector<VertexType> types) : types_(std::move(types)) {}

    const std::vector<VertexType>& types() const { return types_; }
    const VertexType& type(int t) const { return types_.at(t); }
    int size() const { return static_cast<int>(types_.size()); }

    // rho(in_perm, out_perm) applied to basis vector e_basis of type t; the
    // permutations map old slots to new slots.
    const SparseVector& act(int t, const Perm& in_perm, const Perm& out_perm, int basis) const;

private:
    std::vector<VertexType> types_;
    mutable std::mutex mutex_;
    mutable std::map<std::tuple<int, Perm, Perm>, std::vector<SparseVector>> cache_;
};

// One isomorphism class of graph shapes with its space of decorations
// modulo automorphisms.
struct Shape {
    RigidGraph form;
    long automorphisms = 1;
    std::vector<int> dims;       // per canonical vertex
    long tensor_size = 1;
    bool trivial = true;         // no automorphism acts on decorations
    ReducedEchelon coinvariants; // relations T_phi x - x, when !trivial
    std::vector<long> basis;     // tensor indices of coordinates
    std::map<long, int> local;   // tensor index -> local coordinate
    int offset = 0;
};

// Mixed-radix tensor index helpers; vertex 0 is the most significant digit.
std::vector<int> tensor_digits(long index, const std::vector<int>& dims);
long tensor_index(const std::vector<int>& digits, const std::vector<int>& dims);

// The space spanned by decorated graphs of fixed (m, n, genus) whose vertex
// multisets are given, modulo graph isomorphism with decoration transport
// and Koszul signs.
class GraphSpace {
public:
    GraphSpace(std::shared_ptr<const Collection> c, int m, int n, int genus,
               const std::vector<std::vector<Arity>>& multisets, std::size_t max_rigid);

    int m() const { return m_; }
    int n() const { return n_; }
    int genus() const { return genus_; }
    int dim() const { return dim_; }
    const std::vector<Shape>& shapes() const { return shapes_; }
    const Collection& collection() const { return *collection_; }

    // Coordinates of the decorated rigid graph g with decoration tensor t
    // (indexed by g's own vertex order). Throws BlockMissing if the shape of
    // g is not part of this space.
    SparseVector normalize(const RigidGraph& g, const SparseVector& t) const;
    SparseVector normalize(const RigidGraph& g, long tensor, const Rational& coeff = 1) const;

    // Representative of coordinate c: shape index and tensor index.
    std::pair<int, long> representative(int c) const;

    std::vector<int> vertex_dims(const RigidGraph& g) const;

private:
    std::shared_ptr<const Collection> collection_;
    int m_, n_, genus_;
    int dim_ = 0;
    std::vector<Shape> shapes_;
    std::map<std::vector<int>, int> by_code_;
    std::vector<std::pair<int, long>> coords_;
};

// Transports a decoration tensor of g (in g's vertex order) along a vertex
// order and slot permutations, including the Koszul sign of reordering
// odd vertices.
SparseVector transport(const Collection& c, const RigidGraph& g, const std::vector<int>& order,
                       const std::vector<Perm>& in_perm, const std::vector<Perm>& out_perm, const SparseVector& t);

struct BlockKey {
    int m = 0;
    int n = 0;
    int weight = 0;
    int genus = 0;
    auto operator<=>(const BlockKey&) const = default;
};

std::string to_string(const BlockKey& k);

enum class SpanMode { Free, Ideal, Quotient };

// Free block, its ideal and the quotient. Quotient coordinates are the
// free coordinates that are not pivots of the reduced ideal.
struct SpanBasis {
    BlockKey key;
    std::shared_ptr<const GraphSpace> free;
    ReducedEchelon ideal;
    std::vector<int> pivots;           // free coordinates forming the quotient basis
    std::map<int, int> pivot_index;    // free coordinate -> quotient coordinate

    int free_dim() const { return free ? free->dim() : 0; }
    int ideal_dim() const { return static_cast<int>(ideal.rank()); }
    int quotient_dim() const { return static_cast<int>(pivots.size()); }
    int dim(SpanMode mode) const;
    // Quotient coordinates of a free vector.
    SparseVector project(const SparseVector& free_vector) const;
};

// An element of a quotient block.
struct ClassVector {
    BlockKey key;
    SparseVector coeffs;
};

inline constexpr BlockKey kUnitKey{1, 1, 0, 0};

// Gluing data: pairs (output label of the lower operand, input label of
// the upper operand), 1-based.
using Gluing = std::vector<std::pair<int, int>>;

struct EngineOptions {
    std::size_t max_rigid = 2'000'000;
    int max_genus = 4;
    std::string cache_dir;
};

// Weight-graded components of the free properad on a presentation's
// generators and of its quotient by the properadic ideal of the relations.
// Positive genus blocks are those of the properadic envelope.
class SpanEngine {
public:
    explicit SpanEngine(Presentation p, EngineOptions opt = {});

    const Presentation& presentation() const { return p_; }
    const EngineOptions& options() const { return opt_; }
    std::shared_ptr<const Collection> generators() const { return generators_; }

    const SpanBasis& block(const BlockKey& key);
    int dimension(const BlockKey& key, SpanMode mode) { return block(key).dim(mode); }

    // Weight-two genus-zero relation space closed under relabelling, as
    // reduced rows over the free block of the given arity.
    const ReducedEchelon& relation_closure(int m, int n);
    // Arities (m, n) of weight-two blocks, with or without relations.
    std::vector<std::pair<int, int>> weight_two_arities() const;

    // Relabelling action of s_i on inputs (or outputs) of a block, as a
    // matrix on free coordinates or on quotient coordinates.
    SparseMatrix free_action(const BlockKey& key, bool inputs, int i);
    SparseMatrix quotient_action(const BlockKey& key, bool inputs, int i);

    // Relabels the legs of a class: old input label l becomes in_perm[l-1]+1,
    // and likewise for outputs.
    ClassVector relabel_legs(const ClassVector& x, const Perm& in_perm, const Perm& out_perm);

    // Composition of quotient classes: outputs of b glued into inputs of a.
    // Result inputs are b's inputs then a's unglued inputs; result outputs
    // are b's unglued outputs then a's outputs. The key (1,1,0,0) denotes the
    // formal unit.
    ClassVector compose(const ClassVector& a, const ClassVector& b, const Gluing& gluing);
    // Composition on a single pair of quotient basis elements, cached.
    const SparseVector& compose_basis(const BlockKey& a, int ia, const BlockKey& b, int ib, const Gluing& gluing);

    // Free-block coordinates of a weight-two term list.
    SparseVector relation_vector(const Relation& r);

    // Vertex multisets of generators for a block.
    std::vector<std::vector<Arity>> generator_multisets(const BlockKey& key) const;

private:
    std::shared_ptr<const GraphSpace> free_space(const BlockKey& key);
    ReducedEchelon ideal_rows(const BlockKey& key, const GraphSpace& free);
    bool load_cached(const BlockKey& key, SpanBasis& b);
    void store_cached(const BlockKey& key, const SpanBasis& b);

    Presentation p_;
    EngineOptions opt_;
    std::string hash_;
    std::shared_ptr<const Collection> generators_;
    std::vector<Arity> generator_arities_;
    std::recursive_mutex mutex_;
    std::map<BlockKey, std::shared_ptr<const GraphSpace>> free_spaces_;
    std::map<BlockKey, std::unique_ptr<SpanBasis>> blocks_;
    std::map<std::pair<int, int>, std::unique_ptr<ReducedEchelon>> closures_;
    std::map<std::tuple<BlockKey, int, BlockKey, int, Gluing>, SparseVector> compositions_;
};

// Replaces vertex p of g by the two-vertex graph t (vertex 0 lower). The
// legs of t labelled l stand for slot l-1 of p. The lower vertex takes p's
// number and the upper vertex is appended.
RigidGraph substitute(const RigidGraph& g, int p, const RigidGraph& t);

// Builds a rigid two-vertex graph from a relation term; vertex 0 is the
// lower vertex. Also returns the tensor index of the decoration.
std::pair<RigidGraph, long> term_graph(const TwoVertexTerm& t, const Presentation& p);

// Glues the legs of two rigid graphs; vertices of b come first. Follows the
// leg order convention of SpanEngine::compose.
RigidGraph glue(const RigidGraph& a, const RigidGraph& b, const Gluing& gluing);

// Reference implementation over the rigid span: every rigid graph and
// decoration basis vector is a coordinate, and the quotient is taken by
// slot-symmetry, vertex-renumbering and relation-insertion rows.
struct OracleDims {
    int rigid = 0;
    int free = 0;
    int ideal = 0;
    int quotient = 0;
};
OracleDims oracle_dimensions(const Presentation& p, const BlockKey& key, std::size_t max_rigid = 2'000'000);

// Quotient dimensions of positive-genus blocks up to the given bounds.
std::map<std::pair<int, int>, int> genus_vanishing_report(SpanEngine& e, int m, int n, int max_weight, int max_genus);

}  // namespace koszulab
