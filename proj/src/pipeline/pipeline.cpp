#include "cqforge/pipeline/pipeline.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "cqforge/util/rng.hpp"

namespace cqforge {

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

OntologySource parse_ontology_source(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq != std::string::npos && eq > 0) return {spec.substr(0, eq), spec.substr(eq + 1)};
    return {std::filesystem::path(spec).stem().string(), spec};
}

IngestError::IngestError(const std::filesystem::path& file, const ParseError& cause)
    : std::runtime_error(file.string() + ":" + std::to_string(cause.line()) + ":" + std::to_string(cause.column()) +
                         ": " + cause.detail()) {}

IngestError::IngestError(const std::filesystem::path& file, const std::string& message)
    : std::runtime_error(file.string() + ": " + message) {}

Ontology ingest_file(const OntologySource& source) {
    std::string text;
    try {
        text = read_text_file(source.path);
    } catch (const std::runtime_error& e) {
        throw IngestError(source.path, e.what());
    }
    try {
        return parse_ontology(text, source.id);
    } catch (const ParseError& e) {
        throw IngestError(source.path, e);
    }
}

nlohmann::ordered_json terms_manifest(const Ontology& ontology, ExtractionFilter filter) {
    nlohmann::ordered_json j;
    j["ontology_id"] = ontology.id;
    const auto terms = extract_terms(ontology, filter);
    std::size_t classes = 0, properties = 0, axioms = 0;
    auto list = nlohmann::ordered_json::array();
    for (const auto& t : terms) {
        (is_property(t.kind) ? properties : classes) += 1;
        axioms += t.axioms.size();
        auto ax = nlohmann::ordered_json::array();
        for (const auto& a : t.axioms) ax.push_back(serialize_axiom(a, ontology.prefixes));
        list.push_back({{"term_iri", t.term.value}, {"kind", to_string(t.kind)}, {"label", t.label}, {"axioms", ax}});
    }
    j["counts"] = {{"classes", classes}, {"properties", properties}, {"axioms", axioms}};
    j["warnings"] = ontology.warnings.size();
    j["terms"] = std::move(list);
    return j;
}

std::string warnings_sidecar(const std::filesystem::path& file, const Ontology& ontology) {
    std::string out;
    for (const auto& w : ontology.warnings) {
        out += file.string() + "\t" + std::to_string(w.line) + "\t" + w.reason + "\n";
    }
    return out;
}

std::uint64_t term_seed(std::uint64_t master_seed, const std::string& ontology_id, const Iri& term) {
    return derive_seed(master_seed, ontology_id + "|" + term.value);
}

std::vector<MisalignmentCase> classify_terms(const std::vector<TermRecord>& terms, std::uint64_t master_seed,
                                             const TypeWeights& weights) {
    std::vector<MisalignmentCase> out;
    for (const auto& t : terms) {
        if (t.axioms.empty()) continue;
        const std::uint64_t seed = term_seed(master_seed, t.ontology_id, t.term);
        out.push_back(inject(t, assign_type(t, seed, weights), seed));
    }
    return out;
}

nlohmann::ordered_json case_manifest_entry(const MisalignmentCase& c, const PrefixMap& prefixes) {
    nlohmann::ordered_json j;
    j["term_iri"] = c.term.term.value;
    j["ontology_id"] = c.term.ontology_id;
    j["kind"] = to_string(c.term.kind);
    j["assigned_type"] = to_string(c.assigned_type);
    j["axiom_count"] = c.term.axioms.size();
    if (c.pitfall_axiom_index) {
        const std::size_t i = *c.pitfall_axiom_index;
        j["pitfall_axiom_index"] = i;
        j["pitfall_before"] = serialize_axiom(c.term.axioms[i], prefixes);
        switch (c.assigned_type) {
            case MisalignmentType::Type1MissingAxiom: j["pitfall_after"] = "(removed from input axioms)"; break;
            case MisalignmentType::Type2UndefinedAxiom: j["pitfall_after"] = "(removed from definition source)"; break;
            default: j["pitfall_after"] = serialize_axiom(c.input_axioms[i], prefixes); break;
        }
    } else {
        j["pitfall_axiom_index"] = nullptr;
        j["pitfall_before"] = nullptr;
        j["pitfall_after"] = nullptr;
    }
    if (c.swap_detail) {
        j["swap"] = {{"path", c.swap_detail->path},
                     {"before", to_string(c.swap_detail->before)},
                     {"after", to_string(c.swap_detail->after)}};
    }
    j["seed"] = c.rng_seed;
    return j;
}

void BuildConfig::validate() const {
    if (ontologies.empty()) throw std::invalid_argument("build: no ontology files given");
    for (const auto& o : ontologies) {
        if (!std::filesystem::exists(o.path)) throw std::invalid_argument("build: no such file " + o.path.string());
    }
    for (std::size_t i = 0; i < ontologies.size(); ++i) {
        for (std::size_t k = i + 1; k < ontologies.size(); ++k) {
            if (ontologies[i].id == ontologies[k].id) {
                throw std::invalid_argument("build: duplicate ontology id '" + ontologies[i].id + "'");
            }
        }
    }
    if (!std::filesystem::exists(templates_path)) {
        throw std::invalid_argument("build: templates file not found: " + templates_path.string());
    }
    if (!std::filesystem::exists(definition_examples_path)) {
        throw std::invalid_argument("build: definition examples not found: " + definition_examples_path.string());
    }
    if (out_dir.empty()) throw std::invalid_argument("build: output directory required");
    if (jobs == 0) throw std::invalid_argument("build: jobs must be at least 1");
    generation.validate();
    split.validate();
}

nlohmann::ordered_json BuildConfig::to_json() const {
    nlohmann::ordered_json j;
    auto onts = nlohmann::ordered_json::array();
    for (const auto& o : ontologies) onts.push_back({{"id", o.id}, {"file", o.path.filename().string()}});
    j["ontologies"] = std::move(onts);
    j["master_seed"] = master_seed;
    j["n"] = generation.n;
    j["temperature"] = generation.temperature ? nlohmann::ordered_json(*generation.temperature) : nlohmann::ordered_json(nullptr);
    j["backend"] = generation.backend_id;
    j["max_retries"] = generation.max_retries;
    j["split"] = {{"mode", split.mode == SplitSpec::Mode::Random ? "random" : "leave-one-ontology-out"},
                  {"train_fraction", split.train_fraction},
                  {"holdout", split.holdout},
                  {"stratify", split.stratify}};
    j["extraction"] = extraction == ExtractionFilter::SubjectOnly ? "subject-only" : "exclude-hierarchy-duplicates";
    j["cap"] = cap;
    j["type_weights"] = weights;
    j["templates"] = templates_path.filename().string();
    j["definition_examples"] = definition_examples_path.filename().string();
    return j;
}

std::string config_hash(const nlohmann::ordered_json& config) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(config.dump())));
    return buf;
}

namespace {

// Runs fn(i) for i in [0, count) on up to `jobs` threads. The first exception
// is rethrown after all workers stop.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn fn) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> workers;
    for (std::size_t w = 0; w < std::min(jobs, count); ++w) {
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < count && !stop; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    stop = true;
                }
            }
        });
    }
    for (auto& t : workers) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace

BuildSummary run_build(const BuildConfig& config, const TextBackend& backend) {
    config.validate();
    std::filesystem::create_directories(config.out_dir);
    const auto templates = TemplateRegistry::load(config.templates_path);
    const auto def_examples = DefinitionExamples::load(config.definition_examples_path);
    const GenerationResources resources{templates, def_examples};
    const nlohmann::ordered_json config_json = config.to_json();
    const std::string hash = config_hash(config_json);

    std::vector<Ontology> ontologies;
    std::string warnings;
    for (const auto& src : config.ontologies) {
        ontologies.push_back(ingest_file(src));
        warnings += warnings_sidecar(src.path, ontologies.back());
    }

    struct Pending {
        MisalignmentCase misalignment;
        const Ontology* context;
    };
    std::vector<Pending> pending;
    BuildSummary summary;
    nlohmann::ordered_json per_ontology = nlohmann::ordered_json::object();
    for (const auto& onto : ontologies) {
        auto terms = extract_terms(onto, config.extraction);
        const std::size_t extracted = terms.size();
        if (config.cap > 0) terms = sample_terms(terms, config.cap, derive_seed(config.master_seed, "sample|" + onto.id));
        summary.terms += terms.size();
        const auto cases = classify_terms(terms, config.master_seed, config.weights);
        per_ontology[onto.id] = {{"extracted_terms", extracted},
                                 {"sampled_terms", terms.size()},
                                 {"cases", cases.size()},
                                 {"zero_axiom_terms", terms.size() - cases.size()}};
        for (auto& c : cases) pending.push_back({c, &onto});
    }
    summary.cases = pending.size();

    std::string cases_jsonl;
    for (const auto& p : pending) {
        auto entry = case_manifest_entry(p.misalignment, p.context->prefixes);
        entry["tool_version"] = kToolVersion;
        entry["config_hash"] = hash;
        cases_jsonl += entry.dump() + "\n";
    }

    std::vector<GeneratedCase> generated(pending.size());
    parallel_for(pending.size(), config.jobs, [&](std::size_t i) {
        const auto& p = pending[i];
        generated[i] = {p.misalignment,
                        generate_case_artifacts(p.misalignment, config.generation, backend, resources, *p.context),
                        p.context->prefixes};
    });

    AssembleResult assembled = assemble(generated, config.generation.n, config.master_seed);
    summary.triples = assembled.triples.size();
    summary.failed = assembled.excluded.size();
    SplitSpec split_spec = config.split;
    split_spec.seed = config.master_seed;
    const SplitResult parts = split(assembled.triples, split_spec);
    summary.train = parts.train.size();
    summary.test = parts.test.size();
    summary.stats = stats(assembled.triples);

    const auto& dir = config.out_dir;
    write_text_file(dir / "cases.jsonl", cases_jsonl);
    export_jsonl(assembled.triples, dir / "dataset.jsonl");
    export_jsonl(parts.train, dir / "train.jsonl");
    export_jsonl(parts.test, dir / "test.jsonl");
    write_text_file(dir / "warnings.tsv", warnings);
    write_text_file(dir / "stats.txt", "# " + std::string(kToolName) + " " + std::string(kToolVersion) + " config " +
                                           hash + "\n" + render_stats(summary.stats));

    nlohmann::ordered_json manifest;
    manifest["tool"] = kToolName;
    manifest["tool_version"] = kToolVersion;
    manifest["config_hash"] = hash;
    manifest["config"] = config_json;
    manifest["seeds"] = {{"master_seed", config.master_seed}, {"split_seed", split_spec.seed}};
    nlohmann::ordered_json per_type = nlohmann::ordered_json::object();
    for (auto t : kAllMisalignmentTypes) {
        const auto& k = summary.stats.per_type[static_cast<std::size_t>(t)];
        per_type[std::string(to_string(t))] = {{"classes", k.classes}, {"properties", k.properties}};
    }
    manifest["counts"] = {{"terms", summary.terms},  {"cases", summary.cases}, {"triples", summary.triples},
                          {"excluded", summary.failed}, {"train", summary.train}, {"test", summary.test},
                          {"per_ontology", per_ontology}, {"per_type", per_type}};
    auto excluded = nlohmann::ordered_json::array();
    for (const auto& e : assembled.excluded) excluded.push_back({{"term_iri", e.term_iri}, {"reason", e.reason}});
    manifest["excluded"] = std::move(excluded);
    manifest["files"] = {"cases.jsonl", "dataset.jsonl", "train.jsonl", "test.jsonl", "stats.txt", "warnings.tsv"};
    manifest["finetune"] = finetune_metadata();
    write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
    return summary;
}

MetricsReport run_eval(const EvalRun& run, const SimilarityBackend& backend, bool suffix_tau) {
    const auto test = import_jsonl(run.dataset);
    const auto gens = parse_generations(read_text_file(run.generations));
    MetricsReport report = evaluate_suite(test, gens, run.config, backend, run.gt_mode);

    std::filesystem::create_directories(run.out_dir);
    std::string stem = "report";
    if (suffix_tau) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "report_tau_%.2f", run.config.tau);
        stem = buf;
    }
    auto json = report_to_json(report);
    json["tool"] = kToolName;
    json["tool_version"] = kToolVersion;
    write_text_file(run.out_dir / (stem + ".txt"), render_report(report));
    write_text_file(run.out_dir / (stem + ".json"), json.dump(2) + "\n");
    return report;
}

}  // namespace cqforge
