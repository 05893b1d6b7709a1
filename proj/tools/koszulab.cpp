#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "koszulab/complexes.hpp"
#include "koszulab/errors.hpp"
#include "koszulab/presentation.hpp"
#include "koszulab/twisted.hpp"

using namespace koszulab;
using ordered_json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kFail = 1, kUsage = 2, kResource = 3 };

struct Range {
    int lo = 0;
    int hi = -1;
};

// Accepts "a..b" (inclusive) or a single integer.
Range parse_range(const std::string& text, const char* flag, int min) {
    Range r;
    std::size_t pos = text.find("..");
    try {
        std::size_t used = 0;
        if (pos == std::string::npos) {
            r.lo = r.hi = std::stoi(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
        } else {
            r.lo = std::stoi(text.substr(0, pos), &used);
            if (used != pos) throw std::invalid_argument(text);
            const std::string tail = text.substr(pos + 2);
            r.hi = std::stoi(tail, &used);
            if (used != tail.size()) throw std::invalid_argument(text);
        }
    } catch (const std::logic_error&) {
        throw Error(std::string("--") + flag + ": expected an integer or a range a..b, got '" + text + "'");
    }
    if (r.lo < min || r.hi < r.lo)
        throw Error(std::string("--") + flag + ": range '" + text + "' must satisfy " + std::to_string(min) +
                    " <= a <= b");
    return r;
}

struct RunConfig {
    std::string builtin;
    std::string file;
    std::string m;
    std::string n;
    std::optional<int> weight;
    std::optional<int> max_weight;
    std::optional<int> max_genus;
    std::optional<int> max_arity;
    std::string N;
    bool module = false;
    std::string format = "json";
    std::string cache;
    std::size_t max_rigid = EngineOptions{}.max_rigid;
    std::uint64_t seed = 0;
    std::string output;
};

Presentation load(const RunConfig& cfg) {
    if (!cfg.builtin.empty() && !cfg.file.empty()) throw Error("give either --builtin or a presentation file");
    if (!cfg.builtin.empty()) return builtin(cfg.builtin);
    if (!cfg.file.empty()) return load_presentation(cfg.file);
    throw Error("no presentation: use --builtin NAME or --file PATH");
}

EngineOptions engine_options(const RunConfig& cfg) {
    EngineOptions opt;
    opt.max_rigid = cfg.max_rigid;
    opt.cache_dir = cfg.cache;
    if (const char* env = std::getenv("KOSZULAB_CACHE"); env && *env) opt.cache_dir = env;
    if (cfg.max_genus) opt.max_genus = std::max(opt.max_genus, *cfg.max_genus);
    return opt;
}

// The stored dual of a builtin when there is one, else the computed dual.
Presentation dual_of(const RunConfig& cfg, const Presentation& p) {
    if (!cfg.builtin.empty()) {
        const auto names = builtin_names();
        const std::string stored = cfg.builtin + "_dual";
        if (std::find(names.begin(), names.end(), stored) != names.end()) return builtin(stored);
    }
    return quadratic_dual(p);
}

Range arity_range(const std::string& text, const std::optional<int>& max_arity, const char* flag, int fallback) {
    if (!text.empty()) return parse_range(text, flag, 1);
    return Range{1, max_arity ? *max_arity : fallback};
}

int nonnegative(const std::optional<int>& v, const char* flag, int fallback) {
    if (!v) return fallback;
    if (*v < 0) throw Error(std::string("--") + flag + " must be >= 0");
    return *v;
}

int positive(const std::optional<int>& v, const char* flag, int fallback) {
    if (!v) return fallback;
    if (*v < 1) throw Error(std::string("--") + flag + " must be >= 1");
    return *v;
}

// Largest weight of a genus-g block (m, n) when every generator has at
// least three legs.
int weight_bound(int m, int n, int g) { return std::max(1, m + n - 2 + 2 * g); }

void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) throw Error("cannot write " + cfg.output);
    out << text;
}

ordered_json complex_object(const std::string& presentation, const ChainComplexBlock& b) {
    ordered_json j = ordered_json::parse(block_json(presentation, b));
    ordered_json chains = ordered_json::object();
    for (std::size_t s = 0; s < b.dims.size(); ++s) chains[std::to_string(s)] = b.dims[s];
    j["chain_dims_by_syzygy"] = chains;
    return j;
}

void complex_rows(std::ostringstream& out, const ChainComplexBlock& b) {
    for (std::size_t s = 0; s < b.dims.size(); ++s) {
        const auto it = b.homology.find(static_cast<int>(s));
        out << b.key.m << '\t' << b.key.n << '\t' << b.key.weight << '\t' << b.key.genus << '\t' << s << '\t'
            << b.dims[s] << '\t' << (it == b.homology.end() ? 0 : it->second) << '\n';
    }
}

int cmd_dims(const RunConfig& cfg) {
    const Presentation p = load(cfg);
    SpanEngine e(p, engine_options(cfg));
    const Range M = arity_range(cfg.m, cfg.max_arity, "m", 4);
    const Range Nr = arity_range(cfg.n, cfg.max_arity, "n", 4);
    const int max_genus = nonnegative(cfg.max_genus, "max-genus", 0);
    if (cfg.weight) positive(cfg.weight, "weight", 1);
    std::ostringstream tsv;
    tsv << "m\tn\tweight\tgenus\tdim\n";
    ordered_json rows = ordered_json::array();
    for (int m = M.lo; m <= M.hi; ++m)
        for (int n = Nr.lo; n <= Nr.hi; ++n)
            for (int g = 0; g <= max_genus; ++g) {
                int lo = 1, hi = positive(cfg.max_weight, "max-weight", weight_bound(m, n, g));
                if (cfg.weight) lo = hi = *cfg.weight;
                for (int w = lo; w <= hi; ++w) {
                    const BlockKey key{m, n, w, g};
                    // Without an explicit weight, only blocks that admit a graph are listed.
                    if (!cfg.weight && e.generator_multisets(key).empty()) continue;
                    const int d = e.dimension(key, SpanMode::Quotient);
                    tsv << m << '\t' << n << '\t' << w << '\t' << g << '\t' << d << '\n';
                    rows.push_back({{"m", m}, {"n", n}, {"weight", w}, {"genus", g}, {"dim", d}});
                }
            }
    emit(cfg, cfg.format == "tsv" ? tsv.str() : rows.dump(2) + "\n");
    return kOk;
}

int cmd_dual(const RunConfig& cfg) {
    const Presentation d = dual_of(cfg, load(cfg));
    emit(cfg, to_json(d) + "\n");
    return kOk;
}

int cmd_complex(const RunConfig& cfg, bool cobar) {
    const Presentation p = load(cfg);
    SpanEngine e(p, engine_options(cfg));
    const Range M = arity_range(cfg.m, cfg.max_arity, "m", 3);
    const Range Nr = arity_range(cfg.n, cfg.max_arity, "n", 3);
    const int max_genus = nonnegative(cfg.max_genus, "max-genus", 0);
    std::ostringstream tsv;
    tsv << "m\tn\tweight\tgenus\tsyzygy\tchains\thomology\n";
    ordered_json list = ordered_json::array();
    for (int m = M.lo; m <= M.hi; ++m)
        for (int n = Nr.lo; n <= Nr.hi; ++n)
            for (int g = 0; g <= max_genus; ++g) {
                int lo = 1, hi = positive(cfg.max_weight, "max-weight", weight_bound(m, n, g));
                if (cfg.weight) lo = hi = positive(cfg.weight, "weight", 1);
                for (int w = lo; w <= hi; ++w) {
                    const BlockKey key{m, n, w, g};
                    const ChainComplexBlock b = cobar ? cobar_block(e, key) : bar_block(e, key);
                    if (b.total_dim() == 0) continue;
                    complex_rows(tsv, b);
                    list.push_back(complex_object(p.name, b));
                }
            }
    emit(cfg, cfg.format == "tsv" ? tsv.str() : list.dump(2) + "\n");
    return kOk;
}

struct TwistedRun {
    std::vector<TwistedBarComplex> complexes;
    const TwistedBarComplex* failed = nullptr;
};

TwistedRun run_twisted(SpanEngine& e, const Range& N, bool algebra, bool module) {
    TwistedRun run;
    TwistedAlgebra a(e);
    TwistedRightModule mod(a);
    for (int k = N.lo; k <= N.hi; ++k) {
        if (algebra) run.complexes.push_back(bar_tw(a, k));
        if (module) run.complexes.push_back(bar_tw(a, k, &mod));
    }
    for (const auto& c : run.complexes)
        if (!run.failed && !c.complex.positive_syzygies().empty()) run.failed = &c;
    return run;
}

ordered_json twisted_object(const std::string& presentation, const TwistedBarComplex& b) {
    ordered_json j = ordered_json::parse(twisted_json(presentation, b));
    ordered_json chains = ordered_json::object();
    for (std::size_t s = 0; s < b.complex.dims.size(); ++s) chains[std::to_string(s)] = b.complex.dims[s];
    j["chain_dims_by_syzygy"] = chains;
    return j;
}

std::string describe_twisted_failure(const TwistedBarComplex& b) {
    const int s = b.complex.positive_syzygies().front();
    return "twisted bar N=" + std::to_string(b.weight) + (b.coefficients ? " with module coefficients" : "") +
           " has homology " + std::to_string(b.complex.homology.at(s)) + " in syzygy degree " + std::to_string(s);
}

int cmd_tw_bar(const RunConfig& cfg) {
    const Presentation p = load(cfg);
    SpanEngine e(p, engine_options(cfg));
    const Range N = cfg.N.empty() ? Range{1, 3} : parse_range(cfg.N, "N", 1);
    const TwistedRun run = run_twisted(e, N, true, cfg.module);
    std::ostringstream tsv;
    tsv << "N\tcoefficients\tsyzygy\tchains\thomology\n";
    ordered_json list = ordered_json::array();
    for (const auto& c : run.complexes) {
        for (std::size_t s = 0; s < c.complex.dims.size(); ++s)
            tsv << c.weight << '\t' << (c.coefficients ? "module" : "none") << '\t' << s << '\t' << c.complex.dims[s]
                << '\t' << c.complex.homology.at(static_cast<int>(s)) << '\n';
        list.push_back(twisted_object(p.name, c));
    }
    emit(cfg, cfg.format == "tsv" ? tsv.str() : list.dump(2) + "\n");
    std::cerr << (run.failed ? "not concentrated: " + describe_twisted_failure(*run.failed)
                             : std::string("concentrated in syzygy degree 0"))
              << '\n';
    return kOk;
}

int cmd_verify_koszul(const RunConfig& cfg) {
    const Presentation p = load(cfg);
    const Presentation d = dual_of(cfg, p);
    const EngineOptions opt = engine_options(cfg);
    SpanEngine pre(p, opt);
    SpanEngine dual(d, opt);

    KoszulRanges r;
    const Range M = arity_range(cfg.m, cfg.max_arity, "m", 3);
    const Range Nr = arity_range(cfg.n, cfg.max_arity, "n", 3);
    r.m_min = M.lo;
    r.m_max = M.hi;
    r.n_min = Nr.lo;
    r.n_max = Nr.hi;
    r.max_genus = nonnegative(cfg.max_genus, "max-genus", 1);
    r.max_weight = positive(cfg.max_weight, "max-weight", 3);
    const KoszulVerdict v = koszul_report(pre, dual, r);

    const Range N = cfg.N.empty() ? Range{1, 3} : parse_range(cfg.N, "N", 1);
    TwistedRun tw;
    std::string twisted_error;
    try {
        tw = run_twisted(dual, N, true, true);
    } catch (const ResourceLimit& e) {
        twisted_error = e.what();
    }

    Verdict verdict = v.verdict;
    std::string summary;
    if (v.verdict == Verdict::Fail) {
        summary = "fail: block " + to_string(v.failed_block) + ": " + v.reason;
    } else if (tw.failed) {
        verdict = Verdict::Fail;
        summary = "fail: " + describe_twisted_failure(*tw.failed);
    } else if (v.verdict == Verdict::Inconclusive || !twisted_error.empty()) {
        verdict = Verdict::Inconclusive;
        summary = "inconclusive: " + (v.reason.empty() ? twisted_error : v.reason);
    } else {
        summary = "pass";
    }

    std::ostringstream tsv;
    tsv << "m\tn\tweight\tgenus\tdim\texpected\tverdict\n";
    for (const auto& b : v.blocks) {
        long total = 0;
        for (const auto& [s, h] : b.homology) total += h;
        if (total == 0 && b.expected == 0) continue;
        const auto h0 = b.homology.find(0);
        const bool failed = v.verdict == Verdict::Fail && b.key == v.failed_block;
        tsv << b.key.m << '\t' << b.key.n << '\t' << b.key.weight << '\t' << b.key.genus << '\t'
            << (h0 == b.homology.end() ? 0 : h0->second) << '\t' << b.expected << '\t'
            << (b.expected < 0 ? "inconclusive" : failed ? "fail" : "pass") << '\n';
    }

    ordered_json j;
    j["presentation"] = p.name;
    j["dual"] = d.name;
    j["verdict"] = to_string(verdict);
    j["summary"] = summary;
    j["blocks"] = ordered_json::parse(report_json(v));
    ordered_json twisted = ordered_json::array();
    for (const auto& c : tw.complexes) twisted.push_back(twisted_object(d.name, c));
    j["twisted"] = twisted;
    emit(cfg, cfg.format == "tsv" ? tsv.str() : j.dump(2) + "\n");

    std::cerr << summary << '\n';
    switch (verdict) {
        case Verdict::Pass: return kOk;
        case Verdict::Fail: return kFail;
        case Verdict::Inconclusive: return kResource;
    }
    return kResource;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Koszul duality checks for quadratic dioperads and properads"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto common = [&cfg](CLI::App* sub) {
        sub->add_option("file,--file", cfg.file, "Presentation JSON file");
        sub->add_option("--builtin", cfg.builtin, "Built-in presentation")
            ->check(CLI::IsMember(builtin_names()));
        sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "tsv"}));
        sub->add_option("--cache", cfg.cache, "Block cache directory (KOSZULAB_CACHE overrides)");
        sub->add_option("--max-rigid", cfg.max_rigid, "Largest rigid graph count per block")
            ->check(CLI::PositiveNumber);
        sub->add_option("--seed", cfg.seed, "Seed for randomized steps");
        sub->add_option("-o,--output", cfg.output, "Output path (default stdout)");
    };
    auto blocks = [&cfg](CLI::App* sub) {
        sub->add_option("--m", cfg.m, "Input arities, a..b or a single integer");
        sub->add_option("--n", cfg.n, "Output arities, a..b or a single integer");
        sub->add_option("--max-arity", cfg.max_arity, "Default upper bound for --m and --n");
        sub->add_option("--weight", cfg.weight, "Single weight");
        sub->add_option("--max-weight", cfg.max_weight, "Largest weight");
        sub->add_option("--max-genus", cfg.max_genus, "Largest genus");
    };
    auto twisted = [&cfg](CLI::App* sub) {
        sub->add_option("--N", cfg.N, "Twisted weights, a..b or a single integer");
    };

    CLI::App* dims = app.add_subcommand("dims", "Quotient dimensions per block");
    common(dims);
    blocks(dims);
    CLI::App* dual = app.add_subcommand("dual", "Quadratic dual presentation");
    common(dual);
    CLI::App* bar = app.add_subcommand("bar", "Diamond bar complex blocks");
    common(bar);
    blocks(bar);
    CLI::App* cobar = app.add_subcommand("cobar", "Diamond cobar complex blocks of a dual presentation");
    common(cobar);
    blocks(cobar);
    CLI::App* tw = app.add_subcommand("tw-bar", "Bar complex of the derived twisted algebra");
    common(tw);
    twisted(tw);
    tw->add_flag("--module", cfg.module, "Also use the derived right module as coefficients");
    CLI::App* verify = app.add_subcommand("verify-koszul", "Cobar concentration and twisted checks");
    common(verify);
    blocks(verify);
    twisted(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*dims) return cmd_dims(cfg);
        if (*dual) return cmd_dual(cfg);
        if (*bar) return cmd_complex(cfg, false);
        if (*cobar) return cmd_complex(cfg, true);
        if (*tw) return cmd_tw_bar(cfg);
        if (*verify) return cmd_verify_koszul(cfg);
    } catch (const ResourceLimit& e) {
        std::cerr << "resource limit: " << e.what() << '\n';
        return kResource;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
