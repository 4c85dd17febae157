#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>

#include "cqforge/core/class_expression.hpp"
#include "cqforge/core/iri.hpp"

namespace cqforge {

enum class TermKind { Class, ObjectProperty, DataProperty };

std::string_view to_string(TermKind kind);
TermKind term_kind_from_string(std::string_view text);
inline bool is_property(TermKind kind) { return kind != TermKind::Class; }

enum class Relation {
    SubClassOf,
    EquivalentTo,
    DisjointWith,
    Domain,
    Range,
    SubPropertyOf,
    InverseOf,
    Characteristic,
};

std::string_view to_string(Relation relation);

struct SourceSpan {
    std::size_t line = 0;
    std::size_t column = 0;
};

/// An axiom with a single named subject.
///
/// SubClassOf/EquivalentTo/DisjointWith/Domain/Range carry a ClassExpression,
/// SubPropertyOf/InverseOf carry an Iri, Characteristic carries only its name.
/// `subject_kind` selects the Object/Data flavour of property axioms.
struct Axiom {
    Iri subject;
    TermKind subject_kind = TermKind::Class;
    Relation relation = Relation::SubClassOf;
    std::variant<std::monostate, ClassExpression, Iri> object;
    std::string characteristic;  // "Transitive", "Functional", ...
    std::optional<SourceSpan> source_span;

    const ClassExpression* expression() const { return std::get_if<ClassExpression>(&object); }
    ClassExpression* expression() { return std::get_if<ClassExpression>(&object); }
    const Iri* object_iri() const { return std::get_if<Iri>(&object); }

    /// Structural equality; the source span is ignored.
    bool operator==(const Axiom& other) const;
};

/// Throws std::invalid_argument when the object does not fit the relation.
void validate(const Axiom& axiom);

}  // namespace cqforge
