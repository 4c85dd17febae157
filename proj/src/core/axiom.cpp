#include "cqforge/core/axiom.hpp"

#include <stdexcept>
#include <string>

namespace cqforge {

std::string_view to_string(TermKind kind) {
    switch (kind) {
        case TermKind::Class: return "Class";
        case TermKind::ObjectProperty: return "ObjectProperty";
        case TermKind::DataProperty: return "DataProperty";
    }
    return "?";
}

TermKind term_kind_from_string(std::string_view text) {
    if (text == "Class") return TermKind::Class;
    if (text == "ObjectProperty") return TermKind::ObjectProperty;
    if (text == "DataProperty") return TermKind::DataProperty;
    throw std::invalid_argument("unknown term kind: " + std::string(text));
}

std::string_view to_string(Relation relation) {
    switch (relation) {
        case Relation::SubClassOf: return "SubClassOf";
        case Relation::EquivalentTo: return "EquivalentTo";
        case Relation::DisjointWith: return "DisjointWith";
        case Relation::Domain: return "Domain";
        case Relation::Range: return "Range";
        case Relation::SubPropertyOf: return "SubPropertyOf";
        case Relation::InverseOf: return "InverseOf";
        case Relation::Characteristic: return "Characteristic";
    }
    return "?";
}

bool Axiom::operator==(const Axiom& other) const {
    return subject == other.subject && subject_kind == other.subject_kind && relation == other.relation &&
           object == other.object && characteristic == other.characteristic;
}

void validate(const Axiom& axiom) {
    auto fail = [&](const char* why) {
        throw std::invalid_argument(std::string(to_string(axiom.relation)) + " axiom on " + axiom.subject.value +
                                    ": " + why);
    };
    if (axiom.subject.empty()) fail("empty subject");
    switch (axiom.relation) {
        case Relation::SubClassOf:
        case Relation::EquivalentTo:
        case Relation::DisjointWith:
            if (axiom.subject_kind != TermKind::Class) fail("subject must be a class");
            if (!axiom.expression()) fail("object must be a class expression");
            break;
        case Relation::Domain:
        case Relation::Range:
            if (!is_property(axiom.subject_kind)) fail("subject must be a property");
            if (!axiom.expression()) fail("object must be a class expression");
            break;
        case Relation::SubPropertyOf:
            if (!is_property(axiom.subject_kind)) fail("subject must be a property");
            if (!axiom.object_iri()) fail("object must be an IRI");
            break;
        case Relation::InverseOf:
            if (axiom.subject_kind != TermKind::ObjectProperty) fail("subject must be an object property");
            if (!axiom.object_iri()) fail("object must be an IRI");
            break;
        case Relation::Characteristic:
            if (!is_property(axiom.subject_kind)) fail("subject must be a property");
            if (!std::holds_alternative<std::monostate>(axiom.object)) fail("characteristic carries no object");
            if (axiom.characteristic.empty()) fail("missing characteristic name");
            break;
    }
}

}  // namespace cqforge
