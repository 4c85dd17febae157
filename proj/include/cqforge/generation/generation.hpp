#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cqforge/generation/backend.hpp"
#include "cqforge/generation/prompts.hpp"
#include "cqforge/generation/templates.hpp"
#include "cqforge/misalignment/misalignment.hpp"

namespace cqforge {

struct GenerationConfig {
    std::size_t n = 3;                   // CQs per axiom
    std::optional<double> temperature;  // unset: backend default
    std::string backend_id = "mock";
    std::uint64_t master_seed = 0;
    std::size_t max_retries = 3;  // extra attempts after a malformed response

    /// Throws std::invalid_argument when n == 0 or temperature < 0.
    void validate() const;
};

enum class CqRole { SemanticPitfall, Normal };

std::string_view to_string(CqRole role);

struct CqSet {
    std::size_t axiom_index = 0;
    std::vector<std::string> questions;
    CqRole role = CqRole::Normal;

    bool operator==(const CqSet&) const = default;
};

class CqParseError : public std::runtime_error {
  public:
    enum class Kind { EmptyResponse, ItemCountMismatch };

    CqParseError(Kind kind, std::size_t found, std::size_t expected);

    Kind kind() const { return kind_; }
    std::size_t found() const { return found_; }
    std::size_t expected() const { return expected_; }

  private:
    Kind kind_;
    std::size_t found_;
    std::size_t expected_;
};

/// Splits a '|'-separated response into exactly `n` trimmed, non-empty questions.
std::vector<std::string> parse_cq_response(const std::string& raw, std::size_t n);

struct CaseArtifacts {
    bool ok = false;
    std::string failure;  // set when !ok
    std::string definition;
    std::vector<CqSet> cq_sets;  // one per original axiom, in axiom order

    bool operator==(const CaseArtifacts&) const = default;
};

/// Everything a case needs besides the backend.
struct GenerationResources {
    const TemplateRegistry& templates;
    const DefinitionExamples& definition_examples;
};

/// Writes the definition from definition_source_axioms and n CQs for every
/// ORIGINAL axiom; the pitfall axiom's set gets the SemanticPitfall role.
/// Malformed responses are retried; a case that still fails comes back with
/// ok == false. BackendUnreachable propagates.
CaseArtifacts generate_case_artifacts(const MisalignmentCase& c, const GenerationConfig& config,
                                      const TextBackend& backend, const GenerationResources& resources,
                                      const Ontology& context);

}  // namespace cqforge
