#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cqforge/dataset/dataset.hpp"
#include "cqforge/eval/similarity.hpp"

namespace cqforge {

enum class Aggregation { Micro, Macro };
enum class CosSimMode { PerGeneratedCq, PerTerm };
enum class GtMode { SpOnly, SpPlusNormal };
enum class MissingPolicy { Skip, CountAsZero };

struct EvalConfig {
    double tau = 0.7;
    std::string backend_id = "exact";
    Aggregation aggregation = Aggregation::Micro;
    CosSimMode cos_sim_mode = CosSimMode::PerGeneratedCq;
    MissingPolicy missing = MissingPolicy::Skip;
};

/// Indices of generated CQs whose best similarity to any reference is >= tau.
std::vector<std::size_t> valid_set(const std::vector<std::string>& generated, const std::vector<std::string>& reference,
                                   double tau, const SimilarityBackend& backend);

/// Indices of reference CQs matched (>= tau) by at least one generated CQ.
std::vector<std::size_t> matched_set(const std::vector<std::string>& generated,
                                     const std::vector<std::string>& reference, double tau,
                                     const SimilarityBackend& backend);

struct TermEvalResult {
    std::string term_iri;
    MisalignmentType type = MisalignmentType::Type4Alignment;
    std::vector<std::size_t> valid_gen;
    std::vector<std::size_t> matched_gt;
    std::size_t gen_count = 0;
    std::size_t gt_count = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::vector<double> per_gen_max_sim;
    bool empty_generation = false;  // precision reported as 0 by convention
};

/// Throws std::invalid_argument when `reference` is empty.
TermEvalResult evaluate_term(const std::vector<std::string>& generated, const std::vector<std::string>& reference,
                             const EvalConfig& config, const SimilarityBackend& backend);

struct Aggregate {
    std::size_t terms = 0;
    std::size_t gen_total = 0;
    std::size_t valid_total = 0;
    std::size_t gt_total = 0;
    std::size_t matched_total = 0;
    double micro_precision = 0.0;
    double micro_recall = 0.0;
    double micro_f1 = 0.0;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    double cos_sim_per_cq = 0.0;    // mean over every generated CQ
    double cos_sim_per_term = 0.0;  // mean of per-term means

    double precision(Aggregation a) const { return a == Aggregation::Micro ? micro_precision : macro_precision; }
    double recall(Aggregation a) const { return a == Aggregation::Micro ? micro_recall : macro_recall; }
    double f1(Aggregation a) const { return a == Aggregation::Micro ? micro_f1 : macro_f1; }
    double cos_sim(CosSimMode m) const { return m == CosSimMode::PerGeneratedCq ? cos_sim_per_cq : cos_sim_per_term; }
};

Aggregate aggregate(const std::vector<const TermEvalResult*>& results);

struct SkippedTerm {
    std::string term_iri;
    std::string reason;
};

struct MetricsReport {
    EvalConfig config;
    GtMode gt_mode = GtMode::SpOnly;
    std::vector<TermEvalResult> terms;
    std::vector<SkippedTerm> skipped;
    std::map<MisalignmentType, Aggregate> per_type;
    Aggregate overall;
};

/// Generated CQs per term IRI.
using Generations = std::map<std::string, std::vector<std::string>>;

/// SpOnly compares against the pitfall CQs (Types 1-3; Type 4 terms are skipped).
/// SpPlusNormal compares against every CQ generated for the term's original axioms.
MetricsReport evaluate_suite(const std::vector<DatasetTriple>& test, const Generations& generations,
                             const EvalConfig& config, const SimilarityBackend& backend, GtMode gt_mode);

/// Reference CQs of a triple under the given mode; empty when none apply.
std::vector<std::string> reference_cqs(const DatasetTriple& t, GtMode mode);

/// Text table: P, R, F1 in percent with one decimal, C.S. with four decimals.
std::string render_report(const MetricsReport& report);
nlohmann::ordered_json report_to_json(const MetricsReport& report);

/// JSONL lines of {"term_iri", "questions"}.
Generations parse_generations(const std::string& jsonl);

std::string_view to_string(Aggregation a);
std::string_view to_string(GtMode m);

}  // namespace cqforge
