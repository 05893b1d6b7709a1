#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "koszulab/perm.hpp"

namespace koszulab {

// One end of a slot attachment. For an internal edge, vertex and slot name
// the opposite end. vertex < 0 marks an external leg whose 1-based label is
// stored in slot.
struct End {
    int vertex = -1;
    int slot = 0;
    bool external() const { return vertex < 0; }
    auto operator<=>(const End&) const = default;
};

// A connected directed acyclic graph with labelled legs, numbered vertices
// and ordered slots. types[v] is an opaque vertex type (a generator or a
// decoration space); ins[v][i] is what feeds in-slot i of v and outs[v][j]
// is what out-slot j of v feeds.
struct RigidGraph {
    int m = 0;
    int n = 0;
    std::vector<int> types;
    std::vector<std::vector<End>> ins;
    std::vector<std::vector<End>> outs;

    int vertex_count() const { return static_cast<int>(types.size()); }
    int edge_count() const;
    int genus() const { return edge_count() - vertex_count() + 1; }
    // Appends a vertex with unattached slots and returns its index.
    int add_vertex(int type, int inputs, int outputs);
    void connect(int src, int src_slot, int dst, int dst_slot);
    void attach_input(int label, int dst, int dst_slot);
    void attach_output(int src, int src_slot, int label);

    auto operator<=>(const RigidGraph&) const = default;
};

// Throws ArityMismatch on inconsistent attachments, unused slots or bad leg
// labels, CreatesCycle on directed cycles, and std::invalid_argument on a
// disconnected graph.
void validate(const RigidGraph& g);
bool is_acyclic(const RigidGraph& g);
bool is_connected(const RigidGraph& g);

// Result of canonicalization. form is the canonical rigid representative;
// order[k] is the original vertex placed at position k; in_perm[v][i] and
// out_perm[v][j] give the new slot of original slot i or j of vertex v.
// Every other vertex order realizing the same code is an automorphism;
// their count times the product of factorials of edge multiplicities is
// the size of the automorphism group of the underlying shape.
struct Canonical {
    RigidGraph form;
    std::vector<int> code;
    std::vector<int> order;
    std::vector<Perm> in_perm;
    std::vector<Perm> out_perm;
    std::vector<std::vector<int>> minimal_orders;
    long automorphisms = 1;
};

Canonical canonicalize(const RigidGraph& g);

// Applies a vertex order and slot permutations (as in Canonical) to g.
RigidGraph relabel(const RigidGraph& g, const std::vector<int>& order, const std::vector<Perm>& in_perm,
                   const std::vector<Perm>& out_perm);

// Slot permutations that put g into the canonical slot layout for the given
// vertex order. Parallel edges keep the relative order of their source slots.
void slot_layout(const RigidGraph& g, const std::vector<int>& order, std::vector<Perm>& in_perm,
                 std::vector<Perm>& out_perm);

// Vertex type with its arity, for enumeration.
struct Arity {
    int type = 0;
    int inputs = 0;
    int outputs = 0;
};

struct EnumerateOptions {
    int min_genus = 0;
    int max_genus = 0;
    bool dedupe = true;
    std::size_t max_rigid = 2'000'000;
};

// All connected DAGs with m inputs, n outputs and exactly the given
// multiset of vertices, genus within bounds. With dedupe, one canonical
// representative per isomorphism class; otherwise every rigid graph (all
// vertex numberings and slot orders). Throws ResourceLimit when the count
// of rigid graphs visited exceeds max_rigid.
std::vector<RigidGraph> enumerate(int m, int n, const std::vector<Arity>& vertices, const EnumerateOptions& opt);

// Candidate vertex multisets: every multiset of the given types whose size
// is vertex_count, whose weights sum to weight, and whose arities admit a
// connected graph of the given genus with m inputs and n outputs.
std::vector<std::vector<Arity>> vertex_multisets(int m, int n, int genus, int vertex_count, int weight,
                                                 const std::vector<Arity>& types, const std::vector<int>& weights);

// Merged-vertex skeleton produced by contracting an edge. The merged vertex
// takes the lower vertex's number; its in-slots are the lower vertex's
// in-slots followed by the upper vertex's remaining in-slots, and its
// out-slots are the lower vertex's remaining out-slots followed by the upper
// vertex's out-slots. remaining_parallel counts the other edges between the
// two endpoints; when nonzero they survive as self-pairings of the merged
// vertex, represented as edges from the merged vertex to itself.
struct Contraction {
    RigidGraph skeleton;
    int merged = 0;
    int remaining_parallel = 0;
    // Vertex renumbering: old vertex -> new vertex.
    std::vector<int> vertex_map;
};

// Contracts the edge feeding in-slot dst_slot of vertex dst. Throws
// CreatesCycle when another directed path joins the endpoints.
Contraction contract(const RigidGraph& g, int dst, int dst_slot);

// Vertices reachable by a directed path from the given input leg.
std::set<int> reachable_set(const RigidGraph& g, int input_label);

// Fixture I/O in the presentation-term dialect extended to V vertices.
std::string graph_to_json(const RigidGraph& g);
RigidGraph graph_from_json(const std::string& text);

}  // namespace koszulab
