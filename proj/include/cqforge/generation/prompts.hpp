#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "cqforge/core/ontology.hpp"
#include "cqforge/generation/templates.hpp"
#include "cqforge/misalignment/misalignment.hpp"

namespace cqforge {

// Prompt bodies. Slots are {n}, {template}, {example}, {axiom} and
// {type}, {name}, {axiom set}, {examples}. Text is kept byte-for-byte,
// including the original typos, because generated datasets must match it.
extern const std::string_view kCqPromptTemplate;
extern const std::string_view kDefinitionPromptTemplate;

/// Prompt asking for `n` CQs about one axiom.
/// Throws std::out_of_range when the registry has no templates for the axiom.
std::string build_cq_prompt(const Axiom& axiom, const TemplateRegistry& registry, std::size_t n,
                            const Ontology& context);

/// Prompt asking for a natural-language definition written from the case's
/// definition_source_axioms. Throws std::invalid_argument when that list is empty.
std::string build_definition_prompt(const MisalignmentCase& c, const DefinitionExamples& examples,
                                    const Ontology& context);

/// The serialized axioms embedded in a definition prompt, one per entry.
std::vector<std::string> extract_definition_axioms(std::string_view prompt);

}  // namespace cqforge
