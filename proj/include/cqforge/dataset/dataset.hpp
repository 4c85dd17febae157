#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cqforge/generation/generation.hpp"
#include "cqforge/misalignment/misalignment.hpp"

namespace cqforge {

struct NormalCqs {
    std::size_t axiom_index = 0;
    std::vector<std::string> questions;

    bool operator==(const NormalCqs&) const = default;
};

/// One training / evaluation record: (A_T, D_T, target CQs) plus provenance.
struct DatasetTriple {
    std::string term_iri;
    TermKind term_kind = TermKind::Class;
    std::string ontology_id;
    MisalignmentType assigned_type = MisalignmentType::Type4Alignment;
    std::vector<std::string> input_axioms_text;
    std::string definition;
    std::vector<std::string> target_cqs;
    std::vector<NormalCqs> cq_normal_all;  // every original axiom, pitfall axiom included
    std::optional<std::size_t> pitfall_axiom_index;
    std::uint64_t seed = 0;

    bool operator==(const DatasetTriple&) const = default;
};

nlohmann::ordered_json to_json(const DatasetTriple& t);
/// Throws std::invalid_argument on schema mismatch.
DatasetTriple triple_from_json(const nlohmann::json& j);

/// A case after generation, with the prefixes used to print its axioms.
struct GeneratedCase {
    MisalignmentCase misalignment;
    CaseArtifacts artifacts;
    PrefixMap prefixes;
};

struct Exclusion {
    std::string term_iri;
    std::string reason;
};

struct AssembleResult {
    std::vector<DatasetTriple> triples;
    std::vector<Exclusion> excluded;
};

/// One triple per successful case, in input order. For Type4 the target is n
/// questions drawn without replacement from the pooled normal CQs.
AssembleResult assemble(const std::vector<GeneratedCase>& cases, std::size_t n, std::uint64_t seed);

struct SplitSpec {
    enum class Mode { Random, LeaveOneOntologyOut };

    Mode mode = Mode::Random;
    double train_fraction = 1368.0 / 1563.0;
    std::uint64_t seed = 0;
    std::string holdout;    // LeaveOneOntologyOut
    bool stratify = false;  // Random: split each misalignment type separately

    /// Throws std::invalid_argument when train_fraction is outside (0, 1).
    void validate() const;
};

struct SplitResult {
    std::vector<DatasetTriple> train;
    std::vector<DatasetTriple> test;
};

/// Partition of `triples`; both halves keep input order. Random mode sends
/// round(fraction * size) triples to train. Throws std::invalid_argument when
/// the holdout ontology has no triples.
SplitResult split(const std::vector<DatasetTriple>& triples, const SplitSpec& spec);

/// One JSON object per line, UTF-8, '\n' terminated.
std::string to_jsonl(const std::vector<DatasetTriple>& triples);
std::vector<DatasetTriple> from_jsonl(const std::string& text);

/// Throws std::runtime_error on I/O failure.
void export_jsonl(const std::vector<DatasetTriple>& triples, const std::filesystem::path& path);
std::vector<DatasetTriple> import_jsonl(const std::filesystem::path& path);

/// Fine-tuning settings recorded alongside exported data. Nothing here is run.
nlohmann::ordered_json finetune_metadata();

struct KindCounts {
    std::size_t classes = 0;
    std::size_t properties = 0;

    std::size_t total() const { return classes + properties; }
    bool operator==(const KindCounts&) const = default;
};

struct CorpusStats {
    std::map<std::string, KindCounts> per_ontology;
    std::array<KindCounts, 4> per_type{};  // indexed by MisalignmentType
    KindCounts totals;

    bool operator==(const CorpusStats&) const = default;
};

CorpusStats stats(const std::vector<DatasetTriple>& triples);

/// Two text tables: terms per ontology, and terms per misalignment type.
std::string render_stats(const CorpusStats& s);

/// Per-type totals next to the published reference (266, 265, 220, 812).
/// Informational only; differing ontology versions and seeds change the counts.
std::string render_reference_diff(const CorpusStats& s);

inline constexpr std::array<std::size_t, 4> kReferenceTypeTotals = {266, 265, 220, 812};

}  // namespace cqforge
