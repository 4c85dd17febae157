#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cqforge/core/axiom.hpp"
#include "cqforge/core/iri.hpp"

namespace cqforge {

/// An ontology term together with the axioms it is the subject of.
struct TermRecord {
    Iri term;
    TermKind kind = TermKind::Class;
    std::vector<Axiom> axioms;  // source order
    std::string ontology_id;
    std::string label;  // rdfs:label, else the IRI local name

    bool operator==(const TermRecord&) const = default;
};

struct HierarchyNode {
    std::set<Iri> parents;
    std::set<Iri> children;
};

/// A construct the parser skipped.
struct ParseWarning {
    std::size_t line = 0;
    std::size_t column = 0;
    std::string reason;
};

struct Ontology {
    std::string id;
    PrefixMap prefixes;
    std::vector<TermRecord> terms;  // first-declaration order
    std::map<Iri, HierarchyNode> hierarchy;
    std::map<Iri, std::string> labels;
    std::vector<ParseWarning> warnings;

    const TermRecord* find(const Iri& iri) const;
    /// rdfs:label when present, otherwise the local name.
    std::string label_of(const Iri& iri) const;
};

class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t line, std::size_t column, const std::string& message);

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    const std::string& detail() const { return detail_; }

  private:
    std::size_t line_;
    std::size_t column_;
    std::string detail_;
};

/// Parses OWL 2 functional-style syntax restricted to the modelled subset.
/// Unsupported axiom kinds are skipped and recorded in `warnings`.
Ontology parse_ontology(std::string_view text, const std::string& ontology_id);

/// Parses a single class expression, resolving names against `prefixes`.
ClassExpression parse_class_expression(std::string_view text, const PrefixMap& prefixes);

/// Canonical one-line functional-syntax form of an axiom.
std::string serialize_axiom(const Axiom& axiom, const PrefixMap& prefixes);
std::string serialize_expression(const ClassExpression& expr, const PrefixMap& prefixes);

/// Canonical document (prefixes, declarations, axioms) that parses back to `ontology`.
std::string serialize_ontology(const Ontology& ontology);

enum class ExtractionFilter {
    // Every axiom whose subject is the term.
    SubjectOnly,
    // Additionally drop axioms that repeat (same relation and object) an axiom
    // asserted on a direct parent or child of the term.
    ExcludeHierarchyDuplicates,
};

std::vector<TermRecord> extract_terms(const Ontology& ontology,
                                      ExtractionFilter filter = ExtractionFilter::SubjectOnly);

/// Uniform sample of at most `cap` terms without replacement, in original order.
std::vector<TermRecord> sample_terms(const std::vector<TermRecord>& terms, std::size_t cap,
                                     std::uint64_t seed);

}  // namespace cqforge
