#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cqforge/core/ontology.hpp"
#include "cqforge/dataset/dataset.hpp"
#include "cqforge/eval/metrics.hpp"
#include "cqforge/generation/backend.hpp"
#include "cqforge/misalignment/misalignment.hpp"
#include "cqforge/pipeline/pipeline.hpp"
#include "cqforge/util/rng.hpp"

namespace cqforge::testing {

std::filesystem::path source_dir();
std::filesystem::path fixture(const std::string& name);
std::filesystem::path golden(const std::string& name);
std::string slurp(const std::filesystem::path& path);

inline constexpr const char* kGenNs = "http://example.org/gen#";
PrefixMap gen_prefixes();
Iri gen_iri(const std::string& local);

/// Random expression over the modelled constructs (plus Opaque leaves when
/// `allow_opaque`). Every node is reachable within `max_depth` levels.
ClassExpression random_expression(Rng& rng, std::size_t max_depth, bool allow_opaque = true);

/// Random expression guaranteed to contain at least one swappable node.
ClassExpression random_swappable_expression(Rng& rng, std::size_t max_depth);

/// Random axiom with subject `subject` of kind `kind`.
Axiom random_axiom(Rng& rng, const Iri& subject, TermKind kind);

/// Random term with `axiom_count` axioms.
TermRecord random_term(Rng& rng, std::size_t axiom_count, TermKind kind = TermKind::Class);

/// Minimal document declaring the subject of `axiom` and stating it.
std::string single_axiom_document(const Axiom& axiom);

/// Number of nodes that differ between two trees. Nodes are compared by their
/// own label (constructor, IRIs, opaque text, arity); a subtree whose shape
/// differs counts as fully changed.
std::size_t tree_diff(const ClassExpression& a, const ClassExpression& b);

/// Brute-force metric oracle: enumerates every pair once and recomputes the
/// valid/matched sets, P, R, F1 and per-generated max similarity.
struct OracleResult {
    std::vector<std::size_t> valid;
    std::vector<std::size_t> matched;
    double precision = 0, recall = 0, f1 = 0;
    std::vector<double> max_sim;
};
OracleResult oracle_metrics(const std::vector<std::string>& gen, const std::vector<std::string>& gt, double tau,
                            double (*sim)(const std::string&, const std::string&));

/// Jaccard over whitespace token sets, written independently of the library.
double oracle_jaccard(const std::string& a, const std::string& b);
double oracle_exact(const std::string& a, const std::string& b);

/// Short questions over a tiny vocabulary so token overlaps are frequent.
std::vector<std::string> random_questions(Rng& rng, std::size_t count);

/// Synthetic triple for split/stat tests.
DatasetTriple synthetic_triple(std::size_t index, const std::string& ontology_id, MisalignmentType type,
                               TermKind kind = TermKind::Class);

/// Wraps a backend and returns a malformed answer for the first `failures` calls
/// whose prompt asks for CQs.
class FlakyBackend final : public TextBackend {
  public:
    FlakyBackend(const TextBackend& inner, std::size_t failures) : inner_(inner), remaining_(failures) {}
    std::string id() const override { return "flaky"; }
    std::string complete(const std::string& prompt, std::optional<double> temperature,
                         std::uint64_t seed) const override;
    std::size_t calls() const { return calls_; }

  private:
    const TextBackend& inner_;
    mutable std::size_t remaining_;
    mutable std::size_t calls_ = 0;
};

/// Toy fixture, mock backend, seed 42, n = 3: the configuration of the checked-in golden run.
BuildConfig golden_build_config(const std::filesystem::path& out_dir);

/// Output files compared byte for byte against tests/golden/run.
const std::vector<std::string>& golden_run_files();

/// Names of files in `golden_run_files()` that differ (or are missing) between two directories.
std::vector<std::string> differing_files(const std::filesystem::path& a, const std::filesystem::path& b);

/// Golden prompt text without its final newline.
std::string golden_prompt(const std::string& name);

/// Renders the three golden prompts and returns the names of those that differ.
std::vector<std::string> prompt_fidelity_failures();

/// A loopback port nobody listens on.
int unused_port();

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout and stderr combined
};

/// Runs the cqforge binary through the shell with the given argument string.
CliResult run_cli(const std::string& args, const std::string& env = {});

}  // namespace cqforge::testing
