#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "koszulab/complexes.hpp"

namespace koszulab {

// A weight-graded piece of a derived collection: the quotient block
// (m + frozen inputs, n + 1, weight, 0) read with the frozen legs last.
struct TwistedComponent {
    int m = 0;
    int n = 0;
    int weight = 0;
    int dim = 0;
    BlockKey source;
    // One-dimensional pieces use scale times the quotient basis vector.
    Rational scale = 1;
};

// The collection Q(m + k, n + 1) with k frozen inputs and one frozen output,
// all frozen legs last. Products glue the frozen output of a lower element
// of this collection into the frozen input of an upper element of the
// owning algebra. Inputs of a product are the lower element's free inputs
// then the upper's; outputs likewise; frozen legs stay last.
class DerivedCollection {
public:
    DerivedCollection(SpanEngine& e, int frozen_inputs, DerivedCollection* owner);
    virtual ~DerivedCollection() = default;

    SpanEngine& engine() const { return e_; }
    int frozen_inputs() const { return frozen_; }
    DerivedCollection& owner() { return owner_ ? *owner_ : *this; }

    // Nonzero components of the given weight, sorted by (m, n).
    const std::vector<TwistedComponent>& components(int weight);
    // Index of the component (m, n) of the given weight, or -1.
    int find(int m, int n, int weight);
    int dim(int m, int n, int max_weight);

    // Product of basis vector i of lower (this collection, given weight and
    // component index) with basis vector j of upper (owner). Returns
    // coordinates in the resulting component of this collection.
    const SparseVector& multiply(int lw, int lc, int i, int uw, int uc, int j);
    // Relabels free legs of a basis vector; old label l becomes perm[l-1]+1.
    const SparseVector& act(int w, int c, int basis, const Perm& in_perm, const Perm& out_perm);

private:
    SparseVector raw_multiply(const TwistedComponent& lower, int i, const TwistedComponent& upper, int j);
    void normalize(int weight);

    SpanEngine& e_;
    int frozen_;
    DerivedCollection* owner_;
    std::map<int, std::vector<TwistedComponent>> components_;
    std::map<std::tuple<int, int, int, int, int, int>, SparseVector> products_;
    std::map<std::tuple<int, int, int, Perm, Perm>, SparseVector> actions_;
};

// The twisted associative algebra with one frozen input and one frozen
// output.
class TwistedAlgebra : public DerivedCollection {
public:
    explicit TwistedAlgebra(SpanEngine& e) : DerivedCollection(e, 1, nullptr) {}
};

// The right module with two frozen inputs over a twisted algebra on the
// same engine.
class TwistedRightModule : public DerivedCollection {
public:
    explicit TwistedRightModule(TwistedAlgebra& a) : DerivedCollection(a.engine(), 2, &a) {}
};

// Weight-two presentation check at bi-arity (m, n): monomials in weight-one
// components, the span of relations among them, and the algebra component.
struct QuadraticCheck {
    int free = 0;
    int relations = 0;
    int algebra = 0;
};
QuadraticCheck weight_two_check(DerivedCollection& a, int m, int n);

// Ordered partitions of the inputs and outputs into blocks of matching
// sizes.
struct PartitionPair {
    std::vector<std::vector<int>> I;
    std::vector<std::vector<int>> J;
};
void validate(const PartitionPair& pp, int N);
// Input inversions plus output inversions.
int inversion_degree(const PartitionPair& pp);

// A basis element of a twisted bar complex: a chain of pieces, the first
// one from the module when coefficients are present. ins[l] and outs[l]
// are the sorted free labels carried by piece l.
struct TwistedChain {
    std::vector<std::pair<int, int>> pieces;  // (weight, component index)
    std::vector<std::vector<int>> ins;
    std::vector<std::vector<int>> outs;
    std::vector<int> basis;
    auto operator<=>(const TwistedChain&) const = default;
};
int inversion_degree(const TwistedChain& c);

struct TwistedBarComplex {
    ChainComplexBlock complex;  // key (inputs, outputs, weight, 0) unused; see weight
    int weight = 0;
    bool coefficients = false;
    std::vector<std::vector<TwistedChain>> basis;  // per syzygy degree
};

enum class TwistedPath { Auto, Generic, Partition };

// Weight-N part of the bar complex of a, with coefficients in the right
// module when given. Syzygy degree is weight minus the number of pieces.
// The differential merges adjacent pieces; merging along the l-th edge of
// the chain carries the sign (-1)^(l-1). The generic path multiplies
// quotient classes. The partition path uses the quadratic model: one
// one-dimensional piece per weight, generated in weight one, acting by
// characters, read off weights up to 3; bases are then partition pairs.
TwistedBarComplex bar_tw(TwistedAlgebra& a, int N, TwistedRightModule* coefficients = nullptr,
                         TwistedPath path = TwistedPath::Auto);
bool partition_path_applies(TwistedAlgebra& a, TwistedRightModule* coefficients);

// Compositions (m_1 | ... | m_k) of N with d merging adjacent parts with
// sign (-1)^(l-1). Graded by syzygy degree N - k.
struct PlanarComplex {
    ChainComplexBlock complex;
    std::vector<std::vector<std::vector<int>>> basis;  // per syzygy degree
};
PlanarComplex planar_subcomplex(int N);

std::string twisted_json(const std::string& presentation, const TwistedBarComplex& b);

}  // namespace koszulab
