#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include "cqforge/generation/generation.hpp"

#ifndef CQFORGE_SOURCE_DIR
#error "CQFORGE_SOURCE_DIR must be defined"
#endif
#ifndef CQFORGE_CLI_PATH
#error "CQFORGE_CLI_PATH must be defined"
#endif

namespace cqforge::testing {

std::filesystem::path source_dir() { return CQFORGE_SOURCE_DIR; }
std::filesystem::path fixture(const std::string& name) { return source_dir() / "data" / "fixtures" / name; }
std::filesystem::path golden(const std::string& name) { return source_dir() / "tests" / "golden" / name; }

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

PrefixMap gen_prefixes() {
    PrefixMap p = standard_prefixes();
    p[""] = kGenNs;
    return p;
}

Iri gen_iri(const std::string& local) { return Iri(std::string(kGenNs) + local); }

namespace {

const std::vector<std::string> kClasses = {"a", "b", "c", "plant", "animal", "leaf"};
const std::vector<std::string> kProps = {"p", "q", "eats", "is-part-of"};
const std::vector<std::string> kIndividuals = {"i1", "i2", "savanna"};

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
    return v[rng.below(v.size())];
}

ClassExpression leaf(Rng& rng, bool allow_opaque) {
    const std::size_t r = rng.below(allow_opaque ? 10 : 9);
    if (r < 7) return ClassExpression::named(gen_iri(pick(rng, kClasses)));
    if (r < 9) return ClassExpression::has_value(gen_iri(pick(rng, kProps)), gen_iri(pick(rng, kIndividuals)));
    return ClassExpression::opaque("ObjectMinCardinality(" + std::to_string(rng.below(4)) + " :" +
                                   pick(rng, kProps) + " :" + pick(rng, kClasses) + ")");
}

}  // namespace

ClassExpression random_expression(Rng& rng, std::size_t max_depth, bool allow_opaque) {
    if (max_depth <= 1 || rng.below(3) == 0) return leaf(rng, allow_opaque);
    switch (rng.below(5)) {
        case 0: return ClassExpression::some(gen_iri(pick(rng, kProps)), random_expression(rng, max_depth - 1, allow_opaque));
        case 1: return ClassExpression::only(gen_iri(pick(rng, kProps)), random_expression(rng, max_depth - 1, allow_opaque));
        case 2:
        case 3: {
            std::vector<ClassExpression> ops;
            const std::size_t n = 2 + rng.below(2);
            for (std::size_t i = 0; i < n; ++i) ops.push_back(random_expression(rng, max_depth - 1, allow_opaque));
            return rng.below(2) ? ClassExpression::intersection(std::move(ops))
                                : ClassExpression::union_of(std::move(ops));
        }
        default: return ClassExpression::complement(random_expression(rng, max_depth - 1, allow_opaque));
    }
}

ClassExpression random_swappable_expression(Rng& rng, std::size_t max_depth) {
    for (;;) {
        ClassExpression e = random_expression(rng, max_depth);
        if (!swappable_paths(e).empty()) return e;
    }
}

Axiom random_axiom(Rng& rng, const Iri& subject, TermKind kind) {
    Axiom ax;
    ax.subject = subject;
    ax.subject_kind = kind;
    if (kind == TermKind::Class) {
        static const Relation rels[] = {Relation::SubClassOf, Relation::EquivalentTo, Relation::DisjointWith};
        ax.relation = rels[rng.below(3)];
        ax.object = random_expression(rng, 4);
        return ax;
    }
    if (kind == TermKind::DataProperty) {
        switch (rng.below(4)) {
            case 0: ax.relation = Relation::Domain; ax.object = random_expression(rng, 3, false); break;
            case 1: ax.relation = Relation::Range; ax.object = ClassExpression::named(Iri("http://www.w3.org/2001/XMLSchema#float")); break;
            case 2: ax.relation = Relation::SubPropertyOf; ax.object = gen_iri("dp" + std::to_string(rng.below(3))); break;
            default: ax.relation = Relation::Characteristic; ax.characteristic = "Functional"; break;
        }
        return ax;
    }
    static const std::vector<std::string> chars = {"Functional", "InverseFunctional", "Reflexive", "Irreflexive",
                                                   "Symmetric",  "Asymmetric",        "Transitive"};
    switch (rng.below(5)) {
        case 0: ax.relation = Relation::Domain; ax.object = random_expression(rng, 3); break;
        case 1: ax.relation = Relation::Range; ax.object = random_expression(rng, 3); break;
        case 2: ax.relation = Relation::SubPropertyOf; ax.object = gen_iri(pick(rng, kProps)); break;
        case 3: ax.relation = Relation::InverseOf; ax.object = gen_iri(pick(rng, kProps)); break;
        default: ax.relation = Relation::Characteristic; ax.characteristic = pick(rng, chars); break;
    }
    return ax;
}

TermRecord random_term(Rng& rng, std::size_t axiom_count, TermKind kind) {
    TermRecord t;
    t.term = gen_iri("t" + std::to_string(rng.below(1000)));
    t.kind = kind;
    t.ontology_id = "gen";
    t.label = local_name(t.term);
    for (std::size_t i = 0; i < axiom_count; ++i) t.axioms.push_back(random_axiom(rng, t.term, kind));
    return t;
}

std::string single_axiom_document(const Axiom& axiom) {
    const PrefixMap prefixes = gen_prefixes();
    const char* decl = axiom.subject_kind == TermKind::Class            ? "Class"
                       : axiom.subject_kind == TermKind::ObjectProperty ? "ObjectProperty"
                                                                        : "DataProperty";
    return "Prefix(:=<" + std::string(kGenNs) + ">)\nOntology(\nDeclaration(" + decl + "(" +
           abbreviate(axiom.subject, prefixes) + "))\n" + serialize_axiom(axiom, prefixes) + "\n)\n";
}

std::size_t tree_diff(const ClassExpression& a, const ClassExpression& b) {
    if (a.operands.size() != b.operands.size()) return std::max(node_count(a), node_count(b));
    std::size_t d = (a.kind != b.kind || a.iri != b.iri || a.individual != b.individual ||
                     a.opaque_text != b.opaque_text)
                        ? 1
                        : 0;
    for (std::size_t i = 0; i < a.operands.size(); ++i) d += tree_diff(a.operands[i], b.operands[i]);
    return d;
}

OracleResult oracle_metrics(const std::vector<std::string>& gen, const std::vector<std::string>& gt, double tau,
                            double (*sim)(const std::string&, const std::string&)) {
    OracleResult r;
    std::vector<std::vector<double>> s(gen.size(), std::vector<double>(gt.size()));
    for (std::size_t i = 0; i < gen.size(); ++i)
        for (std::size_t j = 0; j < gt.size(); ++j) s[i][j] = sim(gen[i], gt[j]);

    for (std::size_t i = 0; i < gen.size(); ++i) {
        double best = -2.0;
        bool hit = false;
        for (std::size_t j = 0; j < gt.size(); ++j) {
            best = std::max(best, s[i][j]);
            if (s[i][j] >= tau) hit = true;
        }
        if (!gt.empty()) r.max_sim.push_back(best);
        if (hit) r.valid.push_back(i);
    }
    for (std::size_t j = 0; j < gt.size(); ++j) {
        for (std::size_t i = 0; i < gen.size(); ++i) {
            if (s[i][j] >= tau) {
                r.matched.push_back(j);
                break;
            }
        }
    }
    r.precision = gen.empty() ? 0.0 : double(r.valid.size()) / double(gen.size());
    r.recall = gt.empty() ? 0.0 : double(r.matched.size()) / double(gt.size());
    r.f1 = (r.precision + r.recall) > 0 ? 2 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
    return r;
}

double oracle_jaccard(const std::string& a, const std::string& b) {
    auto tokens = [](const std::string& s) {
        std::set<std::string> out;
        std::istringstream in(s);
        for (std::string w; in >> w;) out.insert(w);
        return out;
    };
    const auto ta = tokens(a), tb = tokens(b);
    if (ta.empty() && tb.empty()) return 1.0;
    std::size_t common = 0;
    for (const auto& w : ta) common += tb.count(w);
    return double(common) / double(ta.size() + tb.size() - common);
}

double oracle_exact(const std::string& a, const std::string& b) { return a == b ? 1.0 : 0.0; }

std::vector<std::string> random_questions(Rng& rng, std::size_t count) {
    static const std::vector<std::string> words = {"what", "does", "a", "lion", "eat", "plant", "is", "part", "of"};
    std::vector<std::string> out;
    for (std::size_t k = 0; k < count; ++k) {
        std::string q;
        const std::size_t len = 1 + rng.below(4);
        for (std::size_t w = 0; w < len; ++w) q += (w ? " " : "") + pick(rng, words);
        out.push_back(q + "?");
    }
    return out;
}

DatasetTriple synthetic_triple(std::size_t index, const std::string& ontology_id, MisalignmentType type,
                               TermKind kind) {
    DatasetTriple t;
    t.term_iri = "http://example.org/" + ontology_id + "#t" + std::to_string(index);
    t.term_kind = kind;
    t.ontology_id = ontology_id;
    t.assigned_type = type;
    t.input_axioms_text = {"SubClassOf(:t" + std::to_string(index) + " :x)"};
    t.definition = "definition " + std::to_string(index);
    t.target_cqs = {"q1?", "q2?", "q3?"};
    t.cq_normal_all = {{0, {"q1?", "q2?", "q3?"}}};
    if (type != MisalignmentType::Type4Alignment) t.pitfall_axiom_index = 0;
    t.seed = index;
    return t;
}

std::string FlakyBackend::complete(const std::string& prompt, std::optional<double> temperature,
                                   std::uint64_t seed) const {
    ++calls_;
    if (remaining_ > 0 && prompt.find("Generated CQs:") != std::string::npos) {
        --remaining_;
        return "only one question?";
    }
    return inner_.complete(prompt, temperature, seed);
}

BuildConfig golden_build_config(const std::filesystem::path& out_dir) {
    BuildConfig c;
    c.ontologies = {{"toy_wildlife", fixture("toy_wildlife.ofn")}};
    c.master_seed = 42;
    c.generation.n = 3;
    c.generation.backend_id = "mock";
    c.generation.master_seed = 42;
    c.split.seed = 42;
    c.templates_path = source_dir() / "data" / "cq_templates.json";
    c.definition_examples_path = source_dir() / "data" / "definition_examples.json";
    c.out_dir = out_dir;
    return c;
}

const std::vector<std::string>& golden_run_files() {
    static const std::vector<std::string> files = {"cases.jsonl", "dataset.jsonl", "train.jsonl",
                                                   "test.jsonl",  "manifest.json", "stats.txt"};
    return files;
}

std::vector<std::string> differing_files(const std::filesystem::path& a, const std::filesystem::path& b) {
    std::vector<std::string> out;
    for (const auto& f : golden_run_files()) {
        if (!std::filesystem::exists(a / f) || !std::filesystem::exists(b / f) || slurp(a / f) != slurp(b / f)) {
            out.push_back(f);
        }
    }
    return out;
}

std::string golden_prompt(const std::string& name) {
    std::string text = slurp(golden("prompts/" + name));
    if (!text.empty() && text.back() == '\n') text.pop_back();
    return text;
}

std::vector<std::string> prompt_fidelity_failures() {
    const auto templates = TemplateRegistry::load(source_dir() / "data" / "cq_templates.json");
    const auto examples = DefinitionExamples::load(source_dir() / "data" / "definition_examples.json");
    const Ontology toy = parse_ontology(slurp(fixture("toy_wildlife.ofn")), "toy_wildlife");
    const Ontology herb = parse_ontology(slurp(fixture("herbivore.ofn")), "herbivore");
    std::vector<std::string> failed;

    const TermRecord* eats = toy.find(Iri("http://example.org/toy#eats"));
    if (!eats || eats->axioms.size() < 2 ||
        build_cq_prompt(eats->axioms[1], templates, 3, toy) != golden_prompt("cq_inverse_eats.txt")) {
        failed.push_back("cq_inverse_eats.txt");
    }

    const TermRecord* h = herb.find(Iri("http://example.org/wildlife#herbivore"));
    if (!h || build_definition_prompt(inject(*h, MisalignmentType::Type4Alignment, 1), examples, herb) !=
                  golden_prompt("definition_herbivore.txt")) {
        failed.push_back("definition_herbivore.txt");
    }

    const TermRecord* lives_in = toy.find(Iri("http://example.org/toy#lives-in"));
    bool ok = lives_in && lives_in->axioms.size() == 2;
    if (ok) {
        MisalignmentCase c;
        c.term = *lives_in;
        c.assigned_type = MisalignmentType::Type2UndefinedAxiom;
        c.input_axioms = lives_in->axioms;
        c.definition_source_axioms = {lives_in->axioms[1]};
        c.pitfall_axiom_index = 0;
        ok = build_definition_prompt(c, examples, toy) == golden_prompt("definition_lives_in_type2.txt");
    }
    if (!ok) failed.push_back("definition_lives_in_type2.txt");
    return failed;
}

int unused_port() {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    ::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr);
    socklen_t len = sizeof addr;
    ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
    ::close(fd);
    return ntohs(addr.sin_port);
}

std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("cqforge_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

CliResult run_cli(const std::string& args, const std::string& env) {
    static int calls = 0;
    const auto log = std::filesystem::temp_directory_path() /
                     ("cqforge_cli_" + std::to_string(::getpid()) + "_" + std::to_string(calls++) + ".txt");
    const std::string cmd = env + (env.empty() ? "" : " ") + "'" + std::string(CQFORGE_CLI_PATH) + "' " + args +
                            " > '" + log.string() + "' 2>&1";
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.output = std::filesystem::exists(log) ? slurp(log) : "";
    std::filesystem::remove(log);
    return r;
}

}  // namespace cqforge::testing
