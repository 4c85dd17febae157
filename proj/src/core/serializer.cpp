#include <stdexcept>
#include <string>

#include "cqforge/core/ontology.hpp"

namespace cqforge {

std::string serialize_expression(const ClassExpression& expr, const PrefixMap& prefixes) {
    auto join = [&](const char* head) {
        std::string out = head;
        out += "(";
        for (std::size_t i = 0; i < expr.operands.size(); ++i) {
            if (i) out += " ";
            out += serialize_expression(expr.operands[i], prefixes);
        }
        return out + ")";
    };
    switch (expr.kind) {
        case ExpressionKind::Named: return abbreviate(expr.iri, prefixes);
        case ExpressionKind::SomeValuesFrom:
            return "ObjectSomeValuesFrom(" + abbreviate(expr.iri, prefixes) + " " +
                   serialize_expression(expr.operands.at(0), prefixes) + ")";
        case ExpressionKind::AllValuesFrom:
            return "ObjectAllValuesFrom(" + abbreviate(expr.iri, prefixes) + " " +
                   serialize_expression(expr.operands.at(0), prefixes) + ")";
        case ExpressionKind::IntersectionOf: return join("ObjectIntersectionOf");
        case ExpressionKind::UnionOf: return join("ObjectUnionOf");
        case ExpressionKind::ComplementOf: return join("ObjectComplementOf");
        case ExpressionKind::HasValue:
            return "ObjectHasValue(" + abbreviate(expr.iri, prefixes) + " " + abbreviate(expr.individual, prefixes) +
                   ")";
        case ExpressionKind::Opaque: return expr.opaque_text;
    }
    return {};
}

std::string serialize_axiom(const Axiom& axiom, const PrefixMap& prefixes) {
    const std::string subject = abbreviate(axiom.subject, prefixes);
    const bool data = axiom.subject_kind == TermKind::DataProperty;
    auto with_expr = [&](const std::string& head) {
        return head + "(" + subject + " " + serialize_expression(*axiom.expression(), prefixes) + ")";
    };
    auto with_iri = [&](const std::string& head) {
        return head + "(" + subject + " " + abbreviate(*axiom.object_iri(), prefixes) + ")";
    };
    switch (axiom.relation) {
        case Relation::SubClassOf: return with_expr("SubClassOf");
        case Relation::EquivalentTo: return with_expr("EquivalentClasses");
        case Relation::DisjointWith: return with_expr("DisjointClasses");
        case Relation::Domain: return with_expr(data ? "DataPropertyDomain" : "ObjectPropertyDomain");
        case Relation::Range: return with_expr(data ? "DataPropertyRange" : "ObjectPropertyRange");
        case Relation::SubPropertyOf: return with_iri(data ? "SubDataPropertyOf" : "SubObjectPropertyOf");
        case Relation::InverseOf: return with_iri("InverseObjectProperties");
        case Relation::Characteristic:
            return axiom.characteristic + (data ? "DataProperty(" : "ObjectProperty(") + subject + ")";
    }
    throw std::logic_error("serialize_axiom: unknown relation");
}

namespace {

std::string escape_literal(const std::string& text) {
    std::string out = "\"";
    for (char c : text) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out + "\"";
}

}  // namespace

std::string serialize_ontology(const Ontology& ontology) {
    const PrefixMap standard = standard_prefixes();
    std::string out;
    for (const auto& [name, ns] : ontology.prefixes) {
        if (auto it = standard.find(name); it != standard.end() && it->second == ns) continue;
        out += "Prefix(" + name + ":=<" + ns + ">)\n";
    }
    out += "Ontology(\n";
    for (const auto& term : ontology.terms) {
        out += "Declaration(" + std::string(to_string(term.kind)) + "(" + abbreviate(term.term, ontology.prefixes) +
               "))\n";
    }
    for (const auto& [iri, label] : ontology.labels) {
        out += "AnnotationAssertion(rdfs:label " + abbreviate(iri, ontology.prefixes) + " " + escape_literal(label) +
               ")\n";
    }
    for (const auto& term : ontology.terms) {
        for (const auto& ax : term.axioms) out += serialize_axiom(ax, ontology.prefixes) + "\n";
    }
    out += ")\n";
    return out;
}

}  // namespace cqforge
