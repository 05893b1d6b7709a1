#include "koszulab/presentation.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>

#include "json.hpp"
#include "koszulab/errors.hpp"
#include "koszulab/perm.hpp"

namespace koszulab {

using nlohmann::json;

int Presentation::generator_index(const std::string& id) const {
    for (std::size_t i = 0; i < generators.size(); ++i)
        if (generators[i].id == id) return static_cast<int>(i);
    throw ArityMismatch("unknown generator '" + id + "'");
}

std::pair<int, int> term_arity(const TwoVertexTerm& t, const Presentation& p) {
    const auto& lo = p.generators[p.generator_index(t.lower.gen)];
    const auto& up = p.generators[p.generator_index(t.upper.gen)];
    return {lo.inputs + up.inputs - 1, lo.outputs + up.outputs - 1};
}

namespace {

SparseMatrix power(const SparseMatrix& a, int k) {
    SparseMatrix r = SparseMatrix::identity(a.rows());
    for (int i = 0; i < k; ++i) r = r * a;
    return r;
}

void check_coxeter(const std::vector<SparseMatrix>& t, const std::string& where) {
    const int n = static_cast<int>(t.size());
    for (int i = 0; i < n; ++i) {
        const SparseMatrix id = SparseMatrix::identity(t[i].rows());
        if (!(t[i] * t[i] == id)) throw NonGroupAction(where + ": s" + std::to_string(i + 1) + " is not an involution");
        if (i + 1 < n && !(power(t[i] * t[i + 1], 3) == id))
            throw NonGroupAction(where + ": braid relation fails at s" + std::to_string(i + 1));
        for (int j = i + 2; j < n; ++j)
            if (!(t[i] * t[j] == t[j] * t[i]))
                throw NonGroupAction(where + ": s" + std::to_string(i + 1) + " and s" + std::to_string(j + 1) +
                                     " do not commute");
    }
}

void check_generator(const GeneratorSpace& g) {
    const std::string where = "generator '" + g.id + "'";
    if (g.inputs < 1 || g.outputs < 1) throw ArityMismatch(where + ": arities must be at least 1");
    if (g.dim < 1) throw ArityMismatch(where + ": dimension must be at least 1");
    if (static_cast<int>(g.in_transpositions.size()) != g.inputs - 1)
        throw ArityMismatch(where + ": expected " + std::to_string(g.inputs - 1) + " input transpositions");
    if (static_cast<int>(g.out_transpositions.size()) != g.outputs - 1)
        throw ArityMismatch(where + ": expected " + std::to_string(g.outputs - 1) + " output transpositions");
    for (const auto* side : {&g.in_transpositions, &g.out_transpositions})
        for (const auto& m : *side)
            if (m.rows() != g.dim || m.cols() != g.dim) throw ArityMismatch(where + ": action matrix has wrong size");
    check_coxeter(g.in_transpositions, where + " inputs");
    check_coxeter(g.out_transpositions, where + " outputs");
    for (const auto& a : g.in_transpositions)
        for (const auto& b : g.out_transpositions)
            if (!(a * b == b * a)) throw NonGroupAction(where + ": input and output actions do not commute");
}

void check_term(const TwoVertexTerm& t, const Presentation& p, int m, int n, const std::string& where) {
    const auto& lo = p.generators[p.generator_index(t.lower.gen)];
    const auto& up = p.generators[p.generator_index(t.upper.gen)];
    for (const auto& [v, g] : {std::pair{&t.lower, &lo}, std::pair{&t.upper, &up}}) {
        if (v->basis < 0 || v->basis >= g->dim) throw ArityMismatch(where + ": basis index out of range");
        if (static_cast<int>(v->in.size()) != g->inputs || static_cast<int>(v->out.size()) != g->outputs)
            throw ArityMismatch(where + ": slot lists do not match the arity of '" + g->id + "'");
    }
    if (std::count(t.lower.in.begin(), t.lower.in.end(), 0) != 0 ||
        std::count(t.lower.out.begin(), t.lower.out.end(), 0) != 1 ||
        std::count(t.upper.in.begin(), t.upper.in.end(), 0) != 1 ||
        std::count(t.upper.out.begin(), t.upper.out.end(), 0) != 0)
        throw ArityMismatch(where + ": exactly one internal slot is required on each vertex");
    auto cover = [&](std::vector<int> labels, int total, const char* side) {
        labels.erase(std::remove(labels.begin(), labels.end(), 0), labels.end());
        std::sort(labels.begin(), labels.end());
        for (int i = 0; i < total; ++i)
            if (static_cast<int>(labels.size()) != total || labels[i] != i + 1)
                throw ArityMismatch(where + ": " + side + " labels must cover 1.." + std::to_string(total));
    };
    std::vector<int> ins = t.lower.in, outs = t.lower.out;
    ins.insert(ins.end(), t.upper.in.begin(), t.upper.in.end());
    outs.insert(outs.end(), t.upper.out.begin(), t.upper.out.end());
    cover(ins, m, "input");
    cover(outs, n, "output");
}

}  // namespace

void validate(const Presentation& p) {
    std::set<std::string> ids;
    for (const auto& g : p.generators) {
        if (!ids.insert(g.id).second) throw ArityMismatch("duplicate generator '" + g.id + "'");
        check_generator(g);
    }
    for (const auto& r : p.relations) {
        if (r.terms.empty()) throw ArityMismatch("relation '" + r.name + "' has no terms");
        const auto [m, n] = term_arity(r.terms.front(), p);
        for (std::size_t i = 0; i < r.terms.size(); ++i) {
            const std::string where = "relation '" + r.name + "' term " + std::to_string(i);
            if (term_arity(r.terms[i], p) != std::pair{m, n}) throw ArityMismatch(where + ": arity differs from term 0");
            check_term(r.terms[i], p, m, n, where);
        }
    }
}

namespace {

const json& field(const json& j, const char* key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) throw SyntaxError("missing field " + path + "/" + key);
    return j.at(key);
}

int int_field(const json& j, const char* key, const std::string& path) {
    const json& v = field(j, key, path);
    if (!v.is_number_integer()) throw SyntaxError("expected integer at " + path + "/" + key);
    return v.get<int>();
}

std::string string_field(const json& j, const char* key, const std::string& path) {
    const json& v = field(j, key, path);
    if (!v.is_string()) throw SyntaxError("expected string at " + path + "/" + key);
    return v.get<std::string>();
}

Rational rational_value(const json& v, const std::string& path) {
    try {
        if (v.is_string()) return parse_rational(v.get<std::string>());
        if (v.is_number_integer()) return Rational(v.get<long>());
    } catch (const std::invalid_argument&) {
    }
    throw SyntaxError("expected rational string at " + path);
}

std::vector<int> int_list(const json& j, const char* key, const std::string& path) {
    const json& v = field(j, key, path);
    if (!v.is_array()) throw SyntaxError("expected array at " + path + "/" + key);
    std::vector<int> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number_integer() || v[i].get<int>() < 0)
            throw SyntaxError("expected nonnegative integer at " + path + "/" + key + "/" + std::to_string(i));
        out.push_back(v[i].get<int>());
    }
    return out;
}

std::vector<SparseMatrix> matrices(const json& j, const char* key, const std::string& path, int dim) {
    const json& v = field(j, key, path);
    if (!v.is_array()) throw SyntaxError("expected array at " + path + "/" + key);
    std::vector<SparseMatrix> out;
    for (std::size_t k = 0; k < v.size(); ++k) {
        const std::string mp = path + "/" + key + "/" + std::to_string(k);
        const json& entries = v[k];
        if (!entries.is_array() || static_cast<int>(entries.size()) != dim * dim)
            throw SyntaxError("expected " + std::to_string(dim * dim) + " row-major entries at " + mp);
        SparseMatrix m(dim, dim);
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c)
                m.set(r, c, rational_value(entries[r * dim + c], mp + "/" + std::to_string(r * dim + c)));
        out.push_back(std::move(m));
    }
    return out;
}

TermVertex term_vertex(const json& j, const std::string& path) {
    TermVertex v;
    v.gen = string_field(j, "gen", path);
    v.basis = int_field(j, "basis", path);
    v.in = int_list(j, "in", path);
    v.out = int_list(j, "out", path);
    return v;
}

json matrix_json(const SparseMatrix& m) {
    json entries = json::array();
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) entries.push_back(to_string(m.get(r, c)));
    return entries;
}

json vertex_json(const TermVertex& v) {
    return json{{"gen", v.gen}, {"basis", v.basis}, {"in", v.in}, {"out", v.out}};
}

}  // namespace

Presentation parse_presentation(std::string_view source) {
    json doc;
    try {
        doc = json::parse(source.begin(), source.end());
    } catch (const json::parse_error& e) {
        throw SyntaxError(e.what(), e.byte);
    }
    Presentation p;
    p.name = string_field(doc, "name", "");
    const std::string kind = string_field(doc, "kind", "");
    if (kind == "dioperad")
        p.kind = Kind::Dioperad;
    else if (kind == "properad-envelope")
        p.kind = Kind::ProperadEnvelope;
    else
        throw SyntaxError("unknown kind '" + kind + "' at /kind");

    const json& gens = field(doc, "generators", "");
    if (!gens.is_array()) throw SyntaxError("expected array at /generators");
    for (std::size_t i = 0; i < gens.size(); ++i) {
        const std::string path = "/generators/" + std::to_string(i);
        GeneratorSpace g;
        g.id = string_field(gens[i], "id", path);
        g.inputs = int_field(gens[i], "inputs", path);
        g.outputs = int_field(gens[i], "outputs", path);
        g.dim = int_field(gens[i], "dim", path);
        if (g.dim < 1) throw ArityMismatch(path + ": dimension must be at least 1");
        g.in_transpositions = matrices(gens[i], "in_transpositions", path, g.dim);
        g.out_transpositions = matrices(gens[i], "out_transpositions", path, g.dim);
        g.degree = gens[i].contains("degree") ? int_field(gens[i], "degree", path) : 0;
        p.generators.push_back(std::move(g));
    }

    const json& rels = field(doc, "relations", "");
    if (!rels.is_array()) throw SyntaxError("expected array at /relations");
    for (std::size_t i = 0; i < rels.size(); ++i) {
        const std::string path = "/relations/" + std::to_string(i);
        Relation r;
        r.name = string_field(rels[i], "name", path);
        const json& terms = field(rels[i], "terms", path);
        if (!terms.is_array()) throw SyntaxError("expected array at " + path + "/terms");
        for (std::size_t k = 0; k < terms.size(); ++k) {
            const std::string tp = path + "/terms/" + std::to_string(k);
            TwoVertexTerm t;
            t.coeff = rational_value(field(terms[k], "coeff", tp), tp + "/coeff");
            t.lower = term_vertex(field(terms[k], "lower", tp), tp + "/lower");
            t.upper = term_vertex(field(terms[k], "upper", tp), tp + "/upper");
            r.terms.push_back(std::move(t));
        }
        p.relations.push_back(std::move(r));
    }
    validate(p);
    return p;
}

Presentation load_presentation(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_presentation(ss.str());
}

std::string to_json(const Presentation& p) {
    json doc;
    doc["name"] = p.name;
    doc["kind"] = p.kind == Kind::Dioperad ? "dioperad" : "properad-envelope";
    doc["generators"] = json::array();
    for (const auto& g : p.generators) {
        json in = json::array(), out = json::array();
        for (const auto& m : g.in_transpositions) in.push_back(matrix_json(m));
        for (const auto& m : g.out_transpositions) out.push_back(matrix_json(m));
        doc["generators"].push_back(json{{"id", g.id},
                                         {"inputs", g.inputs},
                                         {"outputs", g.outputs},
                                         {"dim", g.dim},
                                         {"in_transpositions", in},
                                         {"out_transpositions", out},
                                         {"degree", g.degree}});
    }
    doc["relations"] = json::array();
    for (const auto& r : p.relations) {
        json terms = json::array();
        for (const auto& t : r.terms)
            terms.push_back(
                json{{"coeff", to_string(t.coeff)}, {"lower", vertex_json(t.lower)}, {"upper", vertex_json(t.upper)}});
        doc["relations"].push_back(json{{"name", r.name}, {"terms", terms}});
    }
    return doc.dump(2) + "\n";
}

std::string presentation_hash(const Presentation& p) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << std::hash<std::string>{}(to_json(p));
    return os.str();
}

// ---------------------------------------------------------------------------
// Built-in catalog.

namespace {

GeneratorSpace character_generator(const std::string& id, int m, int n, int in_sign, int out_sign, int degree = 0) {
    GeneratorSpace g;
    g.degree = degree;
    g.id = id;
    g.inputs = m;
    g.outputs = n;
    g.dim = 1;
    for (int i = 0; i + 1 < m; ++i) g.in_transpositions.push_back(SparseMatrix::from_dense({{Rational(in_sign)}}));
    for (int i = 0; i + 1 < n; ++i) g.out_transpositions.push_back(SparseMatrix::from_dense({{Rational(out_sign)}}));
    return g;
}

TwoVertexTerm term(Rational c, const std::string& lo, std::vector<int> lo_in, std::vector<int> lo_out,
                   const std::string& up, std::vector<int> up_in, std::vector<int> up_out) {
    return TwoVertexTerm{std::move(c), TermVertex{lo, 0, std::move(lo_in), std::move(lo_out)},
                         TermVertex{up, 0, std::move(up_in), std::move(up_out)}};
}

// Labels 1..k permuted by p, as 1-based images.
std::vector<Perm> all_perms(int k) {
    std::vector<Perm> out;
    Perm p = identity_perm(k);
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

const std::vector<Perm> kCyclic3 = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};

// The (3,3) tree of two (2,2) vertices with inputs (s1 s2 | s3) and outputs
// (t1 | t2 t3), labels given by permutations of {0,1,2}.
TwoVertexTerm qp_tree(const std::string& gen, Rational c, const Perm& s, const Perm& t) {
    return term(std::move(c), gen, {s[0] + 1, s[1] + 1}, {t[0] + 1, 0}, gen, {0, s[2] + 1}, {t[1] + 1, t[2] + 1});
}

// Mirror image of qp_tree: inputs and outputs exchanged, lower and upper
// exchanged.
TwoVertexTerm qp_tree_mirror(const std::string& gen, Rational c, const Perm& s, const Perm& t) {
    return term(std::move(c), gen, {t[1] + 1, t[2] + 1}, {0, s[2] + 1}, gen, {t[0] + 1, 0}, {s[0] + 1, s[1] + 1});
}

Presentation make_qpois() {
    Presentation p;
    p.name = "qpois";
    p.generators.push_back(character_generator("pi", 2, 2, 1, -1));
    Relation r{"poisson", {}};
    for (const auto& s : kCyclic3)
        for (const auto& t : kCyclic3) r.terms.push_back(qp_tree("pi", 1, s, t));
    p.relations.push_back(std::move(r));
    return p;
}

Presentation make_qpois_dual() {
    Presentation p;
    p.name = "qpois_dual";
    p.generators.push_back(character_generator("pi", 2, 2, 1, -1, 1));
    const Perm id = identity_perm(3);
    for (const auto& s : all_perms(3))
        for (const auto& t : all_perms(3)) {
            if (is_identity(s) && is_identity(t)) continue;
            Relation r{"proportional", {}};
            r.terms.push_back(qp_tree("pi", 1, s, t));
            r.terms.push_back(qp_tree("pi", -sign(t), id, id));
            p.relations.push_back(std::move(r));
        }
    return p;
}

// Jacobi-type tree for a (2,1) generator: inputs (s1 s2 | s3).
TwoVertexTerm bracket_tree(const std::string& gen, Rational c, const Perm& s) {
    return term(std::move(c), gen, {s[0] + 1, s[1] + 1}, {0}, gen, {0, s[2] + 1}, {1});
}

// Co-Jacobi tree for a (1,2) generator: outputs (t1 | t2 t3).
TwoVertexTerm cobracket_tree(const std::string& gen, Rational c, const Perm& t) {
    return term(std::move(c), gen, {1}, {t[0] + 1, 0}, gen, {0}, {t[1] + 1, t[2] + 1});
}

// Mixed (3,2) trees: nu below mu with inputs (s2 s3 | s1), and mu below nu
// with inputs (s2 s3 | s1) and outputs (t2 | t1).
TwoVertexTerm nu_mu_tree(Rational c, const Perm& s) {
    return term(std::move(c), "nu", {s[1] + 1, s[2] + 1}, {0}, "mu", {s[0] + 1, 0}, {1, 2});
}
TwoVertexTerm mu_nu_tree(Rational c, const Perm& s, const Perm& t) {
    return term(std::move(c), "mu", {s[1] + 1, s[2] + 1}, {0, t[1] + 1}, "nu", {s[0] + 1, 0}, {t[0] + 1});
}

}  // namespace

// Coefficient of the mu-below-nu half of the mixed QLP relation.
constexpr int kQlpMixedSign = 1;
// Coefficient of the mixed terms of the Drinfeld compatibility relation.
constexpr int kLiebMixedSign = -1;
// Proportionality constant between the two kinds of mixed trees in qlp_dual.
constexpr int kQlpDualCross = 1;

namespace {

Presentation make_qlp() {
    Presentation p;
    p.name = "qlp";
    p.generators.push_back(character_generator("nu", 2, 1, -1, 1));
    p.generators.push_back(character_generator("mu", 2, 2, -1, 1));
    Relation jacobi{"jacobi", {}};
    for (const auto& s : kCyclic3) jacobi.terms.push_back(bracket_tree("nu", 1, s));
    Relation poisson{"poisson", {}};
    for (const auto& s : kCyclic3)
        for (const auto& t : kCyclic3) poisson.terms.push_back(qp_tree_mirror("mu", 1, s, t));
    Relation mixed{"compatibility", {}};
    for (const auto& s : all_perms(3)) mixed.terms.push_back(nu_mu_tree(sign(s), s));
    for (const auto& s : all_perms(3))
        for (const auto& t : all_perms(2)) mixed.terms.push_back(mu_nu_tree(kQlpMixedSign * sign(s), s, t));
    p.relations = {jacobi, poisson, mixed};
    return p;
}

Presentation make_qlp_dual() {
    Presentation p;
    p.name = "qlp_dual";
    p.generators.push_back(character_generator("nu", 2, 1, -1, 1, 1));
    p.generators.push_back(character_generator("mu", 2, 2, -1, 1, 1));
    const Perm id3 = identity_perm(3), id2 = identity_perm(2);
    for (const auto& s : all_perms(3)) {
        if (!is_identity(s)) p.relations.push_back({"proportional", {bracket_tree("nu", 1, s), bracket_tree("nu", -sign(s), id3)}});
        if (!is_identity(s)) p.relations.push_back({"proportional", {nu_mu_tree(1, s), nu_mu_tree(-sign(s), id3)}});
        for (const auto& t : all_perms(2))
            if (!is_identity(s) || !is_identity(t))
                p.relations.push_back({"proportional", {mu_nu_tree(1, s, t), mu_nu_tree(-sign(s), id3, id2)}});
        for (const auto& t : all_perms(3))
            if (!is_identity(s) || !is_identity(t))
                p.relations.push_back({"proportional", {qp_tree_mirror("mu", 1, s, t), qp_tree_mirror("mu", -sign(t), id3, id3)}});
    }
    p.relations.push_back({"cross", {mu_nu_tree(1, id3, id2), nu_mu_tree(-kQlpDualCross, id3)}});
    return p;
}

Presentation make_lieb() {
    Presentation p;
    p.name = "lieb";
    p.generators.push_back(character_generator("bracket", 2, 1, -1, 1));
    p.generators.push_back(character_generator("cobracket", 1, 2, 1, -1));
    Relation jacobi{"jacobi", {}}, cojacobi{"cojacobi", {}};
    for (const auto& s : kCyclic3) {
        jacobi.terms.push_back(bracket_tree("bracket", 1, s));
        cojacobi.terms.push_back(cobracket_tree("cobracket", 1, s));
    }
    Relation drinfeld{"drinfeld", {}};
    drinfeld.terms.push_back(term(1, "bracket", {1, 2}, {0}, "cobracket", {0}, {1, 2}));
    for (const auto& s : all_perms(2))
        for (const auto& t : all_perms(2))
            drinfeld.terms.push_back(term(kLiebMixedSign * sign(s) * sign(t), "cobracket", {s[0] + 1}, {t[0] + 1, 0},
                                          "bracket", {0, s[1] + 1}, {t[1] + 1}));
    p.relations = {jacobi, cojacobi, drinfeld};
    return p;
}

Presentation make_frob() {
    Presentation p;
    p.name = "frob";
    p.generators.push_back(character_generator("product", 2, 1, 1, 1));
    p.generators.push_back(character_generator("coproduct", 1, 2, 1, 1));
    const Perm id = identity_perm(3);
    p.relations.push_back({"associativity", {bracket_tree("product", 1, id), bracket_tree("product", -1, {1, 2, 0})}});
    p.relations.push_back({"associativity", {bracket_tree("product", 1, id), bracket_tree("product", -1, {2, 0, 1})}});
    p.relations.push_back(
        {"coassociativity", {cobracket_tree("coproduct", 1, id), cobracket_tree("coproduct", -1, {1, 2, 0})}});
    p.relations.push_back(
        {"coassociativity", {cobracket_tree("coproduct", 1, id), cobracket_tree("coproduct", -1, {2, 0, 1})}});
    const TwoVertexTerm through = term(1, "product", {1, 2}, {0}, "coproduct", {0}, {1, 2});
    for (int a = 0; a < 2; ++a)
        for (int x = 0; x < 2; ++x) {
            TwoVertexTerm side = term(-1, "coproduct", {a + 1}, {x + 1, 0}, "product", {0, 2 - a}, {2 - x});
            p.relations.push_back({"frobenius", {through, side}});
        }
    return p;
}

}  // namespace

std::vector<std::string> builtin_names() { return {"qpois", "qpois_dual", "qlp", "qlp_dual", "lieb", "frob"}; }

Presentation builtin(const std::string& name) {
    static const std::map<std::string, std::function<Presentation()>> table = {
        {"qpois", make_qpois}, {"qpois_dual", make_qpois_dual}, {"qlp", make_qlp},
        {"qlp_dual", make_qlp_dual}, {"lieb", make_lieb}, {"frob", make_frob}};
    auto it = table.find(name);
    if (it == table.end()) throw UnknownBuiltin("unknown builtin '" + name + "'");
    Presentation p = it->second();
    validate(p);
    return p;
}

}  // namespace koszulab
