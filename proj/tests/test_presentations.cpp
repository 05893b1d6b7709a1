#include "doctest.h"

#include <fstream>
#include <sstream>

#include "koszulab/errors.hpp"
#include "koszulab/presentation.hpp"
#include "koszulab/span.hpp"

using namespace koszulab;

namespace {

const char* kMinimal = R"({
  "name": "tiny", "kind": "dioperad",
  "generators": [{"id": "g", "inputs": 2, "outputs": 1, "dim": 1,
                  "in_transpositions": [["-1"]], "out_transpositions": [], "degree": 0}],
  "relations": [{"name": "jacobi", "terms": [
    {"coeff": "1", "lower": {"gen": "g", "basis": 0, "in": [1, 2], "out": [0]},
                   "upper": {"gen": "g", "basis": 0, "in": [0, 3], "out": [1]}},
    {"coeff": "1", "lower": {"gen": "g", "basis": 0, "in": [2, 3], "out": [0]},
                   "upper": {"gen": "g", "basis": 0, "in": [0, 1], "out": [1]}},
    {"coeff": "1/1", "lower": {"gen": "g", "basis": 0, "in": [3, 1], "out": [0]},
                   "upper": {"gen": "g", "basis": 0, "in": [0, 2], "out": [1]}}]}]
})";

std::string replace(std::string s, const std::string& from, const std::string& to) {
    const auto pos = s.find(from);
    REQUIRE(pos != std::string::npos);
    return s.replace(pos, from.size(), to);
}

int quotient_total(SpanEngine& e, int m, int n, int max_weight) {
    int total = (m == 1 && n == 1) ? 1 : 0;
    for (int w = 1; w <= max_weight; ++w) total += e.dimension(BlockKey{m, n, w, 0}, SpanMode::Quotient);
    return total;
}

}  // namespace

TEST_CASE("parse accepts the documented JSON format") {
    const Presentation p = parse_presentation(kMinimal);
    CHECK(p.name == "tiny");
    REQUIRE(p.generators.size() == 1);
    CHECK(p.generators[0].inputs == 2);
    CHECK(p.generators[0].in_transpositions[0].get(0, 0) == -1);
    REQUIRE(p.relations.size() == 1);
    CHECK(p.relations[0].terms.size() == 3);
    CHECK(term_arity(p.relations[0].terms[0], p) == std::pair{3, 1});
}

TEST_CASE("parse reports lexical errors with a byte offset") {
    std::string broken = kMinimal;
    broken.insert(40, "{{");
    try {
        parse_presentation(broken);
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.position() != SyntaxError::npos);
        CHECK(e.position() <= broken.size());
    }
}

TEST_CASE("parse reports schema errors") {
    CHECK_THROWS_AS(parse_presentation(replace(kMinimal, "\"inputs\": 2", "\"inputs\": \"two\"")), SyntaxError);
    CHECK_THROWS_AS(parse_presentation(replace(kMinimal, "\"coeff\": \"1\"", "\"coeff\": \"1/0\"")), SyntaxError);
    CHECK_THROWS_AS(parse_presentation("[]"), SyntaxError);
}

TEST_CASE("undeclared generators and bad labels are arity mismatches") {
    CHECK_THROWS_AS(parse_presentation(replace(kMinimal, "\"gen\": \"g\", \"basis\": 0, \"in\": [0, 3]",
                                               "\"gen\": \"h\", \"basis\": 0, \"in\": [0, 3]")),
                    ArityMismatch);
    // Label 3 repeated, label 2 missing.
    CHECK_THROWS_AS(parse_presentation(replace(kMinimal, "\"in\": [1, 2], \"out\": [0]", "\"in\": [1, 3], \"out\": [0]")),
                    ArityMismatch);
    // Internal edge on an input of the lower vertex.
    CHECK_THROWS_AS(parse_presentation(replace(kMinimal, "\"in\": [1, 2], \"out\": [0]", "\"in\": [0, 2], \"out\": [1]")),
                    ArityMismatch);
    CHECK_THROWS_AS(parse_presentation(replace(kMinimal, "\"in_transpositions\": [[\"-1\"]]", "\"in_transpositions\": []")),
                    ArityMismatch);
}

TEST_CASE("Coxeter relations are checked") {
    // Not an involution.
    CHECK_THROWS_AS(parse_presentation(replace(kMinimal, "[[\"-1\"]]", "[[\"2\"]]")), NonGroupAction);

    // Two involutions on a 2-dimensional space that violate the braid relation.
    GeneratorSpace g;
    g.id = "t";
    g.inputs = 3;
    g.outputs = 1;
    g.dim = 2;
    g.in_transpositions = {SparseMatrix::from_dense({{0, 1}, {1, 0}}), SparseMatrix::from_dense({{1, 0}, {0, -1}})};
    Presentation p;
    p.name = "braid";
    p.generators = {g};
    CHECK_THROWS_AS(validate(p), NonGroupAction);

    // The standard representation of S_3 passes.
    g.in_transpositions = {SparseMatrix::from_dense({{-1, 1}, {0, 1}}), SparseMatrix::from_dense({{1, 0}, {1, -1}})};
    p.generators = {g};
    CHECK_NOTHROW(validate(p));
}

TEST_CASE("built-in catalog") {
    for (const auto& name : builtin_names()) {
        CAPTURE(name);
        const Presentation p = builtin(name);
        CHECK_NOTHROW(validate(p));
        const Presentation q = parse_presentation(to_json(p));
        CHECK(to_json(q) == to_json(p));
        CHECK(presentation_hash(q) == presentation_hash(p));
    }
    CHECK_THROWS_AS(builtin("nope"), UnknownBuiltin);

    const Presentation qp = builtin("qpois");
    REQUIRE(qp.generators.size() == 1);
    CHECK(qp.generators[0].inputs == 2);
    CHECK(qp.generators[0].outputs == 2);
    CHECK(qp.generators[0].dim == 1);
    CHECK(qp.generators[0].in_transpositions[0].get(0, 0) == 1);
    CHECK(qp.generators[0].out_transpositions[0].get(0, 0) == -1);
    REQUIRE(qp.relations.size() == 1);
    CHECK(qp.relations[0].terms.size() == 9);

    const Presentation qlp = builtin("qlp");
    REQUIRE(qlp.generators.size() == 2);
    CHECK(qlp.generators[0].in_transpositions[0].get(0, 0) == -1);
    REQUIRE(qlp.relations.size() == 3);
    CHECK(qlp.relations[0].terms.size() == 3);
    CHECK(qlp.relations[1].terms.size() == 9);
    CHECK(qlp.relations[2].terms.size() == 18);

    const Presentation frob = builtin("frob");
    REQUIRE(frob.generators.size() == 2);
    CHECK(frob.generators[0].inputs == 2);
    CHECK(frob.generators[0].in_transpositions[0].get(0, 0) == 1);
    CHECK(frob.generators[1].outputs == 2);
    CHECK(frob.generators[1].out_transpositions[0].get(0, 0) == 1);
}

TEST_CASE("catalog files match the built-ins") {
    for (const auto& name : builtin_names()) {
        CAPTURE(name);
        const Presentation p = load_presentation(std::string(KOSZULAB_DATA_DIR) + "/" + name + ".json");
        CHECK(to_json(p) == to_json(builtin(name)));
    }
}

TEST_CASE("dual of qpois has dimensions delta_mn") {
    SpanEngine e(quadratic_dual(builtin("qpois")));
    for (int m = 1; m <= 4; ++m)
        for (int n = 1; n <= 4; ++n) {
            CAPTURE(m);
            CAPTURE(n);
            CHECK(quotient_total(e, m, n, 4) == (m == n ? 1 : 0));
        }
}

TEST_CASE("dual of qlp is one-dimensional exactly when m >= n") {
    SpanEngine e(quadratic_dual(builtin("qlp")));
    for (int m = 1; m <= 4; ++m)
        for (int n = 1; n <= 4; ++n) {
            CAPTURE(m);
            CAPTURE(n);
            CHECK(quotient_total(e, m, n, 4) == (m >= n ? 1 : 0));
        }
}

TEST_CASE("stored duals agree with computed duals") {
    for (const auto& [pre, stored] : {std::pair{"qpois", "qpois_dual"}, std::pair{"qlp", "qlp_dual"}}) {
        CAPTURE(pre);
        SpanEngine computed(quadratic_dual(builtin(pre)));
        SpanEngine catalog(builtin(stored));
        for (const auto& [m, n] : computed.weight_two_arities()) {
            const ReducedEchelon& a = computed.relation_closure(m, n);
            const ReducedEchelon& b = catalog.relation_closure(m, n);
            REQUIRE(a.rank() == b.rank());
            for (int p : a.pivot_columns()) {
                REQUIRE(b.is_pivot(p));
                CHECK(a.pivot_row(p) == b.pivot_row(p));
            }
        }
        for (int m = 1; m <= 4; ++m)
            for (int n = 1; n <= 4; ++n)
                for (int w = 1; w <= 3; ++w)
                    CHECK(computed.dimension({m, n, w, 0}, SpanMode::Quotient) ==
                          catalog.dimension({m, n, w, 0}, SpanMode::Quotient));
    }
}

TEST_CASE("quadratic duality is an involution on dimensions") {
    SpanEngine once(builtin("qpois"));
    SpanEngine twice(quadratic_dual(quadratic_dual(builtin("qpois"))));
    for (int m = 1; m <= 6; ++m)
        for (int n = 1; m + n <= 7; ++n)
            for (int w = 1; w <= 3; ++w) {
                CAPTURE(m);
                CAPTURE(n);
                CAPTURE(w);
                CHECK(once.dimension({m, n, w, 0}, SpanMode::Quotient) ==
                      twice.dimension({m, n, w, 0}, SpanMode::Quotient));
            }
}

TEST_CASE("dual of lieb has the dimensions of frob") {
    SpanEngine dual(quadratic_dual(builtin("lieb")));
    SpanEngine frob(builtin("frob"));
    for (int m = 1; m <= 4; ++m)
        for (int n = 1; m + n <= 6; ++n)
            for (int w = 1; w <= 3; ++w)
                for (int g = 0; g <= 1; ++g)
                    CHECK(dual.dimension({m, n, w, g}, SpanMode::Quotient) ==
                          frob.dimension({m, n, w, g}, SpanMode::Quotient));
}
