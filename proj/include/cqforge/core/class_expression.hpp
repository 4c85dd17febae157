#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cqforge/core/iri.hpp"

namespace cqforge {

enum class ExpressionKind {
    Named,
    SomeValuesFrom,
    AllValuesFrom,
    IntersectionOf,
    UnionOf,
    ComplementOf,
    HasValue,
    // Construct outside the modelled subset (cardinalities, data restrictions, ...).
    // Kept as canonical token text and never swapped.
    Opaque,
};

std::string_view to_string(ExpressionKind kind);

/// OWL class expression tree.
///
/// Field use per kind:
///   Named                 iri
///   Some/AllValuesFrom    iri = property, operands[0] = filler
///   Intersection/UnionOf  operands (two or more)
///   ComplementOf          operands[0]
///   HasValue              iri = property, individual
///   Opaque                opaque_text
struct ClassExpression {
    ExpressionKind kind = ExpressionKind::Named;
    Iri iri;
    Iri individual;
    std::vector<ClassExpression> operands;
    std::string opaque_text;

    static ClassExpression named(Iri iri);
    static ClassExpression some(Iri property, ClassExpression filler);
    static ClassExpression only(Iri property, ClassExpression filler);
    static ClassExpression intersection(std::vector<ClassExpression> operands);
    static ClassExpression union_of(std::vector<ClassExpression> operands);
    static ClassExpression complement(ClassExpression operand);
    static ClassExpression has_value(Iri property, Iri individual);
    static ClassExpression opaque(std::string text);

    bool operator==(const ClassExpression&) const = default;
};

/// Child indices from the root down to a node. Empty path = root.
using TreePath = std::vector<std::size_t>;

/// Node at `path`, or nullptr when the path leaves the tree.
const ClassExpression* node_at(const ClassExpression& root, const TreePath& path);
ClassExpression* node_at(ClassExpression& root, const TreePath& path);

std::size_t node_count(const ClassExpression& expr);
std::size_t depth(const ClassExpression& expr);

/// True for the constructors that have a dual: some/all, and/or.
bool is_swappable(ExpressionKind kind);

/// Preorder list of every swappable node.
std::vector<TreePath> swappable_paths(const ClassExpression& expr);

}  // namespace cqforge
