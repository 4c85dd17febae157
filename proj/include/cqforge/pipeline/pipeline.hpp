#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cqforge/dataset/dataset.hpp"
#include "cqforge/eval/metrics.hpp"
#include "cqforge/generation/generation.hpp"

namespace cqforge {

inline constexpr std::string_view kToolName = "cqforge";
inline constexpr std::string_view kToolVersion = "0.1.0";

namespace exit_code {
inline constexpr int kSuccess = 0;
inline constexpr int kUsage = 1;
inline constexpr int kPartialFailure = 2;
inline constexpr int kBackendUnreachable = 3;
}  // namespace exit_code

struct OntologySource {
    std::string id;
    std::filesystem::path path;
};

/// "id=path" or a bare path (id = file stem).
OntologySource parse_ontology_source(const std::string& spec);

/// Parse failure tagged with the file it came from.
class IngestError : public std::runtime_error {
  public:
    IngestError(const std::filesystem::path& file, const ParseError& cause);
    IngestError(const std::filesystem::path& file, const std::string& message);
};

Ontology ingest_file(const OntologySource& source);

/// Normalized term records (axioms printed in canonical form).
nlohmann::ordered_json terms_manifest(const Ontology& ontology, ExtractionFilter filter);

/// One "file<TAB>line<TAB>reason" line per skipped construct.
std::string warnings_sidecar(const std::filesystem::path& file, const Ontology& ontology);

/// Seed for one term, independent of processing order.
std::uint64_t term_seed(std::uint64_t master_seed, const std::string& ontology_id, const Iri& term);

/// Assigns and injects every term with at least one axiom.
std::vector<MisalignmentCase> classify_terms(const std::vector<TermRecord>& terms, std::uint64_t master_seed,
                                             const TypeWeights& weights = kUniformWeights);

/// Audit record: term, kind, type, pitfall axiom before/after, seed.
nlohmann::ordered_json case_manifest_entry(const MisalignmentCase& c, const PrefixMap& prefixes);

struct BuildConfig {
    std::vector<OntologySource> ontologies;
    std::uint64_t master_seed = 42;
    GenerationConfig generation;
    SplitSpec split;
    ExtractionFilter extraction = ExtractionFilter::SubjectOnly;
    std::size_t cap = 0;  // per ontology; 0 = keep every term
    TypeWeights weights = kUniformWeights;
    std::size_t jobs = 1;  // concurrent cases in flight
    std::filesystem::path templates_path;
    std::filesystem::path definition_examples_path;
    std::filesystem::path out_dir;

    void validate() const;
    nlohmann::ordered_json to_json() const;
};

/// Hex FNV-1a of the canonical JSON form.
std::string config_hash(const nlohmann::ordered_json& config);

struct BuildSummary {
    std::size_t terms = 0;
    std::size_t cases = 0;
    std::size_t triples = 0;
    std::size_t failed = 0;
    std::size_t train = 0;
    std::size_t test = 0;
    CorpusStats stats;
};

/// Runs ingest -> sample -> classify/inject -> generate -> assemble -> split and
/// writes cases.jsonl, dataset.jsonl, train.jsonl, test.jsonl, manifest.json,
/// stats.txt and warnings.tsv into out_dir. BackendUnreachable propagates.
BuildSummary run_build(const BuildConfig& config, const TextBackend& backend);

struct EvalRun {
    std::filesystem::path dataset;
    std::filesystem::path generations;
    std::filesystem::path out_dir;
    EvalConfig config;
    GtMode gt_mode = GtMode::SpOnly;
};

/// Writes report.txt and report.json (suffixed with the tau when `suffix_tau`).
MetricsReport run_eval(const EvalRun& run, const SimilarityBackend& backend, bool suffix_tau = false);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace cqforge
