// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "CLI11.hpp"
#include "koszulab/complexes.hpp"
#include "koszulab/errors.hpp"
#include "koszulab/twisted.hpp"

using namespace koszulab;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    std::vector<std::string> problems;

    void require(bool ok, const std::string& what) {
        if (ok) return;
        pass = false;
        if (problems.size() < 5) problems.push_back(what);
    }
};

long binomial(int n, int k) {
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

int weight_bound(int m, int n, int g) { return std::max(1, m + n - 2 + 2 * g); }

// Quotient dimension of (m, n) summed over weights at genus 0; the (1, 1)
// component is the unit.
int total_dim(SpanEngine& e, int m, int n) {
    int total = m == 1 && n == 1 ? 1 : 0;
    for (int w = 1; w <= weight_bound(m, n, 0); ++w)
        if (!e.generator_multisets({m, n, w, 0}).empty()) total += e.dimension({m, n, w, 0}, SpanMode::Quotient);
    return total;
}

bool same(const ClassVector& a, const ClassVector& b) { return a.key == b.key && a.coeffs == b.coeffs; }

ClassVector random_class(SpanEngine& e, const BlockKey& k, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> val(-3, 3);
    std::map<int, Rational> c;
    for (int i = 0; i < e.dimension(k, SpanMode::Quotient); ++i) c[i] = val(rng);
    return ClassVector{k, from_map(c)};
}

void check_square_zero(Outcome& out, const std::vector<SparseMatrix>& d, bool transposed, const std::string& what) {
    for (std::size_t i = 0; i + 1 < d.size(); ++i)
        out.require((transposed ? d[i] * d[i + 1] : d[i + 1] * d[i]).is_zero(), "d o d != 0 in " + what);
}

void koszul_detail(Outcome& out, const KoszulVerdict& v) {
    int nonzero = 0;
    for (const auto& b : v.blocks) nonzero += b.expected > 0;
    out.detail << v.blocks.size() << " blocks, " << nonzero << " nonzero, verdict " << to_string(v.verdict);
    out.require(v.verdict == Verdict::Pass, v.presentation + ": " + to_string(v.failed_block) + " " + v.reason);
}

Outcome dual_dimension_table(std::uint64_t) {
    Outcome out;
    SpanEngine e(builtin("qpois_dual"));
    for (int m = 1; m <= 5; ++m)
        for (int n = 1; n <= 5; ++n)
            out.require(total_dim(e, m, n) == (m == n ? 1 : 0),
                        "dim(" + std::to_string(m) + "," + std::to_string(n) + ") != delta");
    // The surviving component is trivial on inputs and the sign on outputs.
    for (int m = 2; m <= 5; ++m) {
        const BlockKey k{m, m, m - 1, 0};
        for (int i = 0; i + 1 < m; ++i) {
            out.require(e.quotient_action(k, true, i).get(0, 0) == 1, "input character at " + to_string(k));
            out.require(e.quotient_action(k, false, i).get(0, 0) == -1, "output character at " + to_string(k));
        }
    }
    out.detail << "25 arities, characters at m = n = 2..5";
    return out;
}

Outcome genus_vanishing(std::uint64_t) {
    Outcome out;
    SpanEngine e(builtin("qpois_dual"));
    int nonempty = 0;
    for (int g = 1; g <= 2; ++g)
        for (int m = 1; m <= 4; ++m)
            for (int n = 1; n <= 4; ++n)
                for (int w = 1; w <= 4; ++w) {
                    const BlockKey k{m, n, w, g};
                    if (e.generator_multisets(k).empty()) continue;
                    if (e.dimension(k, SpanMode::Free) > 0) ++nonempty;
                    out.require(e.dimension(k, SpanMode::Quotient) == 0, "nonzero quotient at " + to_string(k));
                }
    out.detail << nonempty << " blocks with nonzero free part, all quotients zero";
    out.require(nonempty > 0, "no positive-genus block has graphs");
    return out;
}

Outcome qpois_koszul(std::uint64_t) {
    Outcome out;
    SpanEngine pre(builtin("qpois"));
    SpanEngine dual(builtin("qpois_dual"));
    KoszulRanges r;
    r.m_max = r.n_max = 4;
    r.diagonal = true;
    r.max_genus = 2;
    r.max_weight = 4;
    koszul_detail(out, koszul_report(pre, dual, r));
    return out;
}

Outcome twisted_koszul(std::uint64_t) {
    Outcome out;
    SpanEngine e(builtin("qpois_dual"));
    TwistedAlgebra a(e);
    TwistedRightModule mod(a);
    for (int N = 1; N <= 5; ++N)
        for (TwistedRightModule* m : {static_cast<TwistedRightModule*>(nullptr), &mod}) {
            const TwistedBarComplex b = bar_tw(a, N, m);
            out.require(b.complex.positive_syzygies().empty(),
                        "N=" + std::to_string(N) + (m ? " module" : "") + " not concentrated");
            if (N == 5) out.detail << (m ? ", module " : "algebra ") << "H0(N=5)=" << b.complex.homology.at(0);
        }
    const TwistedBarComplex two = bar_tw(a, 2);
    out.require(two.complex.dims == std::vector<int>{4, 1} && two.complex.homology.at(0) == 3, "N=2 anchor");
    out.detail << ", N=2 H0=" << two.complex.homology.at(0);
    return out;
}

Outcome planar(std::uint64_t) {
    Outcome out;
    for (int N = 1; N <= 6; ++N) {
        const PlanarComplex p = planar_subcomplex(N);
        for (int k = 1; k <= N; ++k)
            out.require(p.complex.dims[N - k] == binomial(N - 1, k - 1), "size at N=" + std::to_string(N));
        for (const auto& [s, h] : p.complex.homology)
            out.require(h == (N == 1 && s == 0 ? 1 : 0), "homology at N=" + std::to_string(N));
    }
    out.detail << "N = 1..6";
    return out;
}

Outcome qlp(std::uint64_t) {
    Outcome out;
    SpanEngine dual(builtin("qlp_dual"));
    for (int m = 1; m <= 4; ++m)
        for (int n = 1; n <= 4; ++n)
            out.require(total_dim(dual, m, n) == (m >= n ? 1 : 0),
                        "dim(" + std::to_string(m) + "," + std::to_string(n) + ")");
    SpanEngine pre(builtin("qlp"));
    KoszulRanges r;
    r.m_max = r.n_max = 3;
    r.max_genus = 1;
    r.max_weight = 3;
    out.detail << "dual table ok; ";
    koszul_detail(out, koszul_report(pre, dual, r));
    return out;
}

Outcome lieb_frob(std::uint64_t) {
    Outcome out;
    const Presentation dual_p = quadratic_dual(builtin("lieb"));
    SpanEngine dual(dual_p);
    SpanEngine frob(builtin("frob"));
    for (int m = 1; m <= 5; ++m)
        for (int n = 1; m + n <= 6; ++n)
            for (int g = 0; g <= 1; ++g)
                for (int w = 1; w <= 3; ++w) {
                    const BlockKey k{m, n, w, g};
                    out.require(dual.dimension(k, SpanMode::Quotient) == frob.dimension(k, SpanMode::Quotient),
                                "dual of lieb differs from frob at " + to_string(k));
                }
    SpanEngine pre(builtin("lieb"));
    KoszulRanges r;
    r.m_max = r.n_max = 5;
    r.max_legs = 6;
    r.max_genus = 1;
    r.max_weight = 3;
    koszul_detail(out, koszul_report(pre, dual, r));
    const int g1 = frob.dimension({1, 1, 2, 1}, SpanMode::Quotient);
    out.require(g1 > 0, "frob has no genus-1 block at (1,1,2,1)");
    out.detail << "; frob (1,1,w=2,g=1) dim " << g1;
    return out;
}

Outcome structural(std::uint64_t seed) {
    Outcome out;
    int blocks = 0, oracle_blocks = 0, triples = 0;
    for (const auto& name : builtin_names()) {
        const Presentation p = builtin(name);
        SpanEngine e(p);
        for (int m = 1; m <= 4; ++m)
            for (int n = 1; n <= 4; ++n)
                for (int g = 0; g <= 1; ++g)
                    for (int w = 1; w <= 3; ++w) {
                        const BlockKey k{m, n, w, g};
                        if (e.generator_multisets(k).empty()) continue;
                        const SpanBasis& b = e.block(k);
                        ++blocks;
                        out.require(b.quotient_dim() == b.free_dim() - b.ideal_dim(), "dimension count " + name);
                        if (m <= 3 && n <= 3) {
                            const ChainComplexBlock c = bar_block(e, k);
                            check_square_zero(out, c.differentials, false, name + " " + to_string(k));
                        }
                        // The oracle runs on every block of at most three vertices.
                        if (m + n <= 7) {
                            const OracleDims o = oracle_dimensions(p, k);
                            ++oracle_blocks;
                            out.require(o.free == b.free_dim() && o.ideal == b.ideal_dim() &&
                                            o.quotient == b.quotient_dim(),
                                        "oracle mismatch " + name + " " + to_string(k));
                        }
                    }
    }
    SpanEngine dual(builtin("qpois_dual"));
    TwistedAlgebra a(dual);
    TwistedRightModule mod(a);
    for (int N = 1; N <= 4; ++N) {
        check_square_zero(out, bar_tw(a, N).complex.differentials, false, "twisted bar");
        check_square_zero(out, bar_tw(a, N, &mod).complex.differentials, false, "twisted bar with module");
    }
    for (int N = 1; N <= 6; ++N) check_square_zero(out, planar_subcomplex(N).complex.differentials, false, "planar");

    for (const auto& name : {"qpois", "qlp"}) {
        SpanEngine once(builtin(name));
        SpanEngine twice(quadratic_dual(quadratic_dual(builtin(name))));
        for (int m = 1; m <= 6; ++m)
            for (int n = 1; m + n <= 7; ++n)
                for (int w = 1; w <= 3; ++w)
                    out.require(once.dimension({m, n, w, 0}, SpanMode::Quotient) ==
                                    twice.dimension({m, n, w, 0}, SpanMode::Quotient),
                                std::string("duality involution ") + name);
    }

    std::mt19937_64 rng(seed);
    for (const auto& name : builtin_names()) {
        SpanEngine e(builtin(name));
        std::vector<BlockKey> keys;
        for (const auto& gen : e.presentation().generators) keys.push_back({gen.inputs, gen.outputs, 1, 0});
        for (const BlockKey& ka : keys)
            for (const BlockKey& kb : keys)
                for (const BlockKey& kc : keys) {
                    if (ka.m + kb.m + kc.m - 2 + ka.n + kb.n + kc.n - 2 > 7) continue;
                    const ClassVector x = random_class(e, ka, rng), y = random_class(e, kb, rng),
                                      z = random_class(e, kc, rng);
                    for (int ob = 1; ob <= kb.n; ++ob)
                        for (int ia = 1; ia <= ka.m; ++ia)
                            for (int oc = 1; oc <= kc.n; ++oc)
                                for (int ib = 1; ib <= kb.m; ++ib) {
                                    ++triples;
                                    const ClassVector left = e.compose(e.compose(x, y, {{ob, ia}}), z, {{oc, ib}});
                                    const ClassVector right =
                                        e.compose(x, e.compose(y, z, {{oc, ib}}), {{kc.n - 1 + ob, ia}});
                                    out.require(same(left, right), "associativity " + name);
                                }
                }
    }
    out.detail << blocks << " blocks, " << oracle_blocks << " oracle comparisons, " << triples
               << " composition triples";
    return out;
}

Outcome mutation(std::uint64_t, const std::string& cli, const std::string& fixture) {
    Outcome out;
    const Presentation p = load_presentation(fixture);
    const Presentation q = builtin("qpois");
    int flipped = 0;
    for (std::size_t r = 0; r < p.relations.size(); ++r)
        for (std::size_t t = 0; t < p.relations[r].terms.size(); ++t)
            flipped += p.relations[r].terms[t].coeff != q.relations[r].terms[t].coeff;
    out.require(flipped == 1, "fixture differs from qpois in " + std::to_string(flipped) + " coefficients");

    SpanEngine pre(p);
    SpanEngine dual(quadratic_dual(p));
    KoszulRanges r;
    r.m_max = r.n_max = 3;
    r.max_genus = 1;
    r.max_weight = 3;
    const KoszulVerdict v = koszul_report(pre, dual, r);
    out.require(v.verdict == Verdict::Fail && v.failed_degree > 0, "report does not fail in positive degree");
    out.detail << "report: " << to_string(v.failed_block) << " " << v.reason;

    const std::string command = "\"" + cli + "\" verify-koszul \"" + fixture + "\" > /dev/null 2>&1";
    const int status = std::system(command.c_str());
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    out.require(code == 1, "verify-koszul exited " + std::to_string(code));
    out.detail << "; verify-koszul exit " << code;
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::uint64_t seed = 20240611;
    if (const char* env = std::getenv("KOSZULAB_SEED")) seed = std::stoull(env);
    std::string cli = KOSZULAB_CLI;
    std::string fixture = std::string(KOSZULAB_FIXTURE_DIR) + "/qpois_mutated.json";
    app.add_option("--seed", seed, "Seed for the randomized composition checks");
    app.add_option("--cli", cli, "Path of the koszulab binary");
    CLI11_PARSE(app, argc, argv);
    std::cout << "seed: " << seed << " (override with --seed N)" << std::endl;

    const std::vector<std::pair<std::string, std::function<Outcome(std::uint64_t)>>> criteria = {
        {"dual dimension table", dual_dimension_table},
        {"genus vanishing", genus_vanishing},
        {"qpois Koszulness", qpois_koszul},
        {"twisted Koszulness", twisted_koszul},
        {"planar subcomplex", planar},
        {"qlp", qlp},
        {"lieb/frob cross-check", lieb_frob},
        {"structural suite", structural},
        {"mutation sensitivity", [&](std::uint64_t s) { return mutation(s, cli, fixture); }},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second(seed);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !o.pass;
        std::cout << "criterion " << i + 1 << " " << (o.pass ? "PASS" : "FAIL") << " " << criteria[i].first << ": "
                  << o.detail.str() << " [" << std::fixed << std::setprecision(1) << secs << "s]" << std::endl;
        for (const auto& p : o.problems) std::cout << "    " << p << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
