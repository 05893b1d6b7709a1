#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "koszulab/linalg.hpp"
#include "koszulab/rational.hpp"

namespace koszulab {

// An S_m x S_n module of corolla decorations given by a basis and the
// matrices of the adjacent transpositions. in_transpositions[i] is the
// action of swapping inputs i+1 and i+2; the action is on column vectors.
struct GeneratorSpace {
    std::string id;
    int inputs = 0;
    int outputs = 0;
    int dim = 0;
    std::vector<SparseMatrix> in_transpositions;
    std::vector<SparseMatrix> out_transpositions;
    int degree = 0;
};

// One vertex of a two-vertex tree. External labels are 1-based; 0 marks
// the slot carrying the internal edge (an output of the lower vertex, an
// input of the upper vertex).
struct TermVertex {
    std::string gen;
    int basis = 0;
    std::vector<int> in;
    std::vector<int> out;
};

struct TwoVertexTerm {
    Rational coeff;
    TermVertex lower;
    TermVertex upper;
};

struct Relation {
    std::string name;
    std::vector<TwoVertexTerm> terms;
};

enum class Kind { Dioperad, ProperadEnvelope };

struct Presentation {
    std::string name;
    Kind kind = Kind::Dioperad;
    std::vector<GeneratorSpace> generators;
    std::vector<Relation> relations;

    // Index of the generator with the given id; throws ArityMismatch if absent.
    int generator_index(const std::string& id) const;
};

// Arity (inputs, outputs) of the composite described by a term.
std::pair<int, int> term_arity(const TwoVertexTerm& t, const Presentation& p);

// Checks every invariant of the data model. Throws ArityMismatch on shape
// and label errors and NonGroupAction when the transposition matrices do
// not satisfy the Coxeter relations of S_m x S_n.
void validate(const Presentation& p);

// Parses the JSON presentation format and validates the result. Lexical
// errors raise SyntaxError with a byte offset, schema errors a SyntaxError
// naming the offending JSON pointer.
Presentation parse_presentation(std::string_view source);
Presentation load_presentation(const std::string& path);

// Serializes in the same JSON format, pretty-printed with sorted keys.
std::string to_json(const Presentation& p);

// The catalog: qpois, qpois_dual, qlp, qlp_dual, lieb, frob.
Presentation builtin(const std::string& name);
std::vector<std::string> builtin_names();

// Stable content hash of the serialized presentation, used as a cache key.
std::string presentation_hash(const Presentation& p);

// Quadratic dual: generator spaces are replaced by their duals with the
// contragredient action, relations by the annihilator of the S-closure of
// the relations under the pairing in which identical rigid two-vertex trees
// pair to 1. Defined in span.cpp since it needs weight-two blocks.
Presentation quadratic_dual(const Presentation& p);

}  // namespace koszulab
