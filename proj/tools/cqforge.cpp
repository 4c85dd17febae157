// cqforge command-line front end.
//
// Exit codes: 0 success, 1 usage/config/input error, 2 some cases failed
// generation, 3 backend unreachable.

#include <cstdlib>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "cqforge/pipeline/pipeline.hpp"
#include "cqforge/util/rng.hpp"

#ifndef CQFORGE_DATA_DIR
#define CQFORGE_DATA_DIR "data"
#endif

namespace {

using namespace cqforge;

std::string env_or(const char* name, const std::string& fallback = {}) {
    const char* v = std::getenv(name);
    return v ? std::string(v) : fallback;
}

std::vector<double> parse_weights(const std::string& text) {
    std::vector<double> out;
    std::stringstream in(text);
    for (std::string item; std::getline(in, item, ',');) out.push_back(std::stod(item));
    if (out.size() != 4) throw std::invalid_argument("--type-weights needs four comma-separated values");
    return out;
}

double parse_fraction(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return std::stod(text);
    return std::stod(text.substr(0, slash)) / std::stod(text.substr(slash + 1));
}

std::unique_ptr<SimilarityBackend> make_similarity(const std::string& name) {
    if (name == "exact") return std::make_unique<ExactMatchBackend>();
    if (name == "jaccard") return std::make_unique<TokenJaccardBackend>();
    if (name == "hashed") return std::make_unique<HashedBagOfWordsBackend>();
    if (name == "http") {
        const std::string url = env_or("CQFORGE_EMBED_URL");
        if (url.empty()) throw std::invalid_argument("--similarity http requires CQFORGE_EMBED_URL");
        return std::make_unique<HttpEmbeddingBackend>(url);
    }
    throw std::invalid_argument("unknown similarity backend '" + name + "'");
}

struct EvalOptions {
    std::string dataset, generations, out = "eval";
    double tau = 0.7;
    std::string similarity = "exact";
    std::string reference = "sp";
    std::string aggregation = "micro";
    std::string cs = "per-cq";
    std::string missing = "skip";

    void add_to(CLI::App* cmd) {
        cmd->add_option("--dataset", dataset, "Test split JSONL")->required()->check(CLI::ExistingFile);
        cmd->add_option("--generations", generations, "JSONL of {term_iri, questions}")
            ->required()
            ->check(CLI::ExistingFile);
        cmd->add_option("--out", out, "Output directory")->capture_default_str();
        cmd->add_option("--similarity", similarity, "exact | jaccard | hashed | http (CQFORGE_EMBED_URL)")
            ->capture_default_str();
        cmd->add_option("--reference", reference, "sp | sp+normal")->capture_default_str();
        cmd->add_option("--aggregation", aggregation, "micro | macro")->capture_default_str();
        cmd->add_option("--cs", cs, "C.S. averaging: per-cq | per-term")->capture_default_str();
        cmd->add_option("--missing", missing, "Terms without generations: skip | zero")->capture_default_str();
    }

    EvalRun to_run() const {
        EvalRun run;
        run.dataset = dataset;
        run.generations = generations;
        run.out_dir = out;
        run.config.tau = tau;
        run.config.backend_id = similarity;
        if (aggregation != "micro" && aggregation != "macro") throw std::invalid_argument("bad --aggregation");
        run.config.aggregation = aggregation == "micro" ? Aggregation::Micro : Aggregation::Macro;
        if (cs != "per-cq" && cs != "per-term") throw std::invalid_argument("bad --cs");
        run.config.cos_sim_mode = cs == "per-cq" ? CosSimMode::PerGeneratedCq : CosSimMode::PerTerm;
        if (missing != "skip" && missing != "zero") throw std::invalid_argument("bad --missing");
        run.config.missing = missing == "skip" ? MissingPolicy::Skip : MissingPolicy::CountAsZero;
        if (reference != "sp" && reference != "sp+normal") throw std::invalid_argument("bad --reference");
        run.gt_mode = reference == "sp" ? GtMode::SpOnly : GtMode::SpPlusNormal;
        return run;
    }
};

ExtractionFilter parse_extraction(const std::string& s) {
    if (s == "subject-only") return ExtractionFilter::SubjectOnly;
    if (s == "exclude-hierarchy-duplicates") return ExtractionFilter::ExcludeHierarchyDuplicates;
    throw std::invalid_argument("unknown --extraction mode '" + s + "'");
}

int cmd_ingest(const std::vector<std::string>& files, const std::string& out_dir, const std::string& extraction) {
    const auto filter = parse_extraction(extraction);
    std::filesystem::create_directories(out_dir);
    nlohmann::ordered_json manifest;
    manifest["tool"] = kToolName;
    manifest["tool_version"] = kToolVersion;
    manifest["ontologies"] = nlohmann::ordered_json::array();
    std::string warnings;
    int rc = exit_code::kSuccess;
    for (const auto& spec : files) {
        const auto src = parse_ontology_source(spec);
        try {
            const Ontology onto = ingest_file(src);
            manifest["ontologies"].push_back(terms_manifest(onto, filter));
            warnings += warnings_sidecar(src.path, onto);
            std::cout << src.id << ": " << onto.terms.size() << " terms, " << onto.warnings.size() << " warnings\n";
        } catch (const IngestError& e) {
            std::cerr << "error: " << e.what() << "\n";
            rc = exit_code::kUsage;
        }
    }
    write_text_file(std::filesystem::path(out_dir) / "terms.json", manifest.dump(2) + "\n");
    write_text_file(std::filesystem::path(out_dir) / "warnings.tsv", warnings);
    if (!warnings.empty()) std::cerr << warnings;
    return rc;
}

int cmd_classify(const std::vector<std::string>& files, const std::string& out_dir, std::uint64_t seed,
                 std::size_t cap, const std::string& extraction, const std::string& weights_text) {
    const auto filter = parse_extraction(extraction);
    TypeWeights weights = kUniformWeights;
    if (!weights_text.empty()) {
        const auto w = parse_weights(weights_text);
        std::copy(w.begin(), w.end(), weights.begin());
    }
    std::filesystem::create_directories(out_dir);
    std::string lines;
    for (const auto& spec : files) {
        const Ontology onto = ingest_file(parse_ontology_source(spec));
        auto terms = extract_terms(onto, filter);
        if (cap > 0) terms = sample_terms(terms, cap, derive_seed(seed, "sample|" + onto.id));
        for (const auto& c : classify_terms(terms, seed, weights)) {
            lines += case_manifest_entry(c, onto.prefixes).dump() + "\n";
        }
    }
    write_text_file(std::filesystem::path(out_dir) / "cases.jsonl", lines);
    return exit_code::kSuccess;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Build semantic-pitfall CQ datasets from OWL ontologies and score generated CQs"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    const std::string data_dir = env_or("CQFORGE_DATA_DIR", CQFORGE_DATA_DIR);

    // ingest
    std::vector<std::string> files;
    std::string out_dir = "out";
    std::string extraction = "subject-only";
    auto* ingest = app.add_subcommand("ingest", "Parse ontologies and write normalized term records");
    ingest->add_option("files", files, "Ontology files (.ofn), optionally id=path")->required();
    ingest->add_option("--out", out_dir, "Output directory")->capture_default_str();
    ingest->add_option("--extraction", extraction, "subject-only | exclude-hierarchy-duplicates")
        ->capture_default_str();

    // classify
    std::uint64_t seed = 42;
    std::size_t cap = 0;
    std::string weights;
    auto* classify = app.add_subcommand("classify", "Assign misalignment types and write the cases manifest");
    classify->add_option("files", files, "Ontology files (.ofn), optionally id=path")->required();
    classify->add_option("--out", out_dir, "Output directory")->capture_default_str();
    classify->add_option("--seed", seed, "Master seed")->capture_default_str();
    classify->add_option("--cap", cap, "Max terms sampled per ontology (0 = all)")->capture_default_str();
    classify->add_option("--extraction", extraction)->capture_default_str();
    classify->add_option("--type-weights", weights, "Weights for Type1..Type4, e.g. 1,1,1,1");

    // build
    BuildConfig build_cfg;
    std::string backend = "mock";
    std::string split_mode = "random";
    std::string fraction = "1368/1563";
    std::string templates = data_dir + "/cq_templates.json";
    std::string def_examples = data_dir + "/definition_examples.json";
    double temperature = -1.0;
    auto* build = app.add_subcommand("build", "Run the full dataset construction pipeline");
    build->add_option("files", files, "Ontology files (.ofn), optionally id=path")->required();
    build->add_option("--out", out_dir, "Output directory")->capture_default_str();
    build->add_option("--seed", seed, "Master seed")->capture_default_str();
    build->add_option("--n", build_cfg.generation.n, "CQs per axiom")->capture_default_str();
    build->add_option("--backend", backend, "mock | http (CQFORGE_TEXT_URL, CQFORGE_TEXT_API_KEY)")
        ->capture_default_str();
    build->add_option("--temperature", temperature, "Sampling temperature (default: backend default)");
    build->add_option("--retries", build_cfg.generation.max_retries, "Retries per malformed response")
        ->capture_default_str();
    build->add_option("--cap", cap, "Max terms sampled per ontology (0 = all)")->capture_default_str();
    build->add_option("--split", split_mode, "random | leave-one-out")->capture_default_str();
    build->add_option("--train-fraction", fraction, "Train share for random split (a/b or decimal)")
        ->capture_default_str();
    build->add_option("--holdout", build_cfg.split.holdout, "Ontology id held out in leave-one-out mode");
    build->add_flag("--stratify", build_cfg.split.stratify, "Stratify the random split by misalignment type");
    build->add_option("--jobs", build_cfg.jobs, "Cases generated concurrently")->capture_default_str();
    build->add_option("--templates", templates, "CQ template registry")->capture_default_str();
    build->add_option("--definition-examples", def_examples, "Few-shot definition examples")->capture_default_str();
    build->add_option("--extraction", extraction)->capture_default_str();
    build->add_option("--type-weights", weights, "Weights for Type1..Type4, e.g. 1,1,1,1");

    // eval / sweep
    EvalOptions eval_opts;
    auto* eval = app.add_subcommand("eval", "Score generated CQs against a test split");
    eval_opts.add_to(eval);
    eval->add_option("--tau", eval_opts.tau, "Similarity threshold")->capture_default_str();

    EvalOptions sweep_opts;
    sweep_opts.out = "sweep";
    std::vector<double> taus = {0.5, 0.6, 0.7, 0.8, 0.9};
    auto* sweep = app.add_subcommand("sweep", "Evaluate at several thresholds");
    sweep_opts.add_to(sweep);
    sweep->add_option("--taus", taus, "Thresholds to evaluate")->delimiter(',')->capture_default_str();

    // report
    std::string report_dataset;
    bool reference_diff = false;
    auto* report = app.add_subcommand("report", "Print corpus statistics for a dataset JSONL");
    report->add_option("dataset", report_dataset, "Dataset JSONL")->required()->check(CLI::ExistingFile);
    report->add_flag("--reference-diff", reference_diff, "Compare per-type totals with the published counts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_code::kSuccess : exit_code::kUsage;
    }

    try {
        if (*ingest) return cmd_ingest(files, out_dir, extraction);
        if (*classify) return cmd_classify(files, out_dir, seed, cap, extraction, weights);

        if (*build) {
            for (const auto& f : files) build_cfg.ontologies.push_back(parse_ontology_source(f));
            build_cfg.master_seed = seed;
            build_cfg.generation.master_seed = seed;
            build_cfg.generation.backend_id = backend;
            if (temperature >= 0.0) build_cfg.generation.temperature = temperature;
            build_cfg.cap = cap;
            build_cfg.extraction = parse_extraction(extraction);
            build_cfg.templates_path = templates;
            build_cfg.definition_examples_path = def_examples;
            build_cfg.out_dir = out_dir;
            if (!weights.empty()) {
                const auto w = parse_weights(weights);
                std::copy(w.begin(), w.end(), build_cfg.weights.begin());
            }
            if (split_mode == "random") {
                build_cfg.split.mode = SplitSpec::Mode::Random;
                build_cfg.split.train_fraction = parse_fraction(fraction);
            } else if (split_mode == "leave-one-out") {
                build_cfg.split.mode = SplitSpec::Mode::LeaveOneOntologyOut;
                if (build_cfg.split.holdout.empty()) throw std::invalid_argument("--split leave-one-out needs --holdout");
            } else {
                throw std::invalid_argument("unknown --split mode '" + split_mode + "'");
            }

            std::unique_ptr<TextBackend> text_backend;
            if (backend == "mock") {
                text_backend = std::make_unique<MockTextBackend>();
            } else if (backend == "http") {
                const std::string url = env_or("CQFORGE_TEXT_URL");
                if (url.empty()) throw std::invalid_argument("--backend http requires CQFORGE_TEXT_URL");
                text_backend = std::make_unique<HttpTextBackend>(url, env_or("CQFORGE_TEXT_API_KEY"));
            } else {
                throw std::invalid_argument("unknown --backend '" + backend + "'");
            }

            const BuildSummary s = run_build(build_cfg, *text_backend);
            std::cout << render_stats(s.stats) << "\n"
                      << s.triples << " triples (" << s.train << " train, " << s.test << " test), " << s.failed
                      << " case(s) failed\n";
            return s.failed > 0 ? exit_code::kPartialFailure : exit_code::kSuccess;
        }

        if (*eval) {
            const auto run = eval_opts.to_run();
            auto sim = make_similarity(eval_opts.similarity);
            std::cout << render_report(run_eval(run, *sim));
            return exit_code::kSuccess;
        }

        if (*sweep) {
            auto sim = make_similarity(sweep_opts.similarity);
            std::string summary = "tau      P      R     F1\n";
            for (double tau : taus) {
                auto run = sweep_opts.to_run();
                run.config.tau = tau;
                const MetricsReport r = run_eval(run, *sim, true);
                char buf[96];
                std::snprintf(buf, sizeof buf, "%.2f %6.1f %6.1f %6.1f\n", tau,
                              100.0 * r.overall.precision(run.config.aggregation),
                              100.0 * r.overall.recall(run.config.aggregation),
                              100.0 * r.overall.f1(run.config.aggregation));
                summary += buf;
            }
            write_text_file(std::filesystem::path(sweep_opts.out) / "sweep.txt", summary);
            std::cout << summary;
            return exit_code::kSuccess;
        }

        if (*report) {
            const CorpusStats s = stats(import_jsonl(report_dataset));
            std::cout << render_stats(s);
            if (reference_diff) std::cout << "\n" << render_reference_diff(s);
            return exit_code::kSuccess;
        }
    } catch (const BackendUnreachable& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code::kBackendUnreachable;
    } catch (const SimilarityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code::kBackendUnreachable;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code::kUsage;
    }
    return exit_code::kUsage;
}
