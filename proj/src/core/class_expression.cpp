#include "cqforge/core/class_expression.hpp"

#include <algorithm>
#include <stdexcept>

namespace cqforge {

std::string_view to_string(ExpressionKind kind) {
    switch (kind) {
        case ExpressionKind::Named: return "Named";
        case ExpressionKind::SomeValuesFrom: return "SomeValuesFrom";
        case ExpressionKind::AllValuesFrom: return "AllValuesFrom";
        case ExpressionKind::IntersectionOf: return "IntersectionOf";
        case ExpressionKind::UnionOf: return "UnionOf";
        case ExpressionKind::ComplementOf: return "ComplementOf";
        case ExpressionKind::HasValue: return "HasValue";
        case ExpressionKind::Opaque: return "Opaque";
    }
    return "?";
}

ClassExpression ClassExpression::named(Iri iri) {
    ClassExpression e;
    e.kind = ExpressionKind::Named;
    e.iri = std::move(iri);
    return e;
}

ClassExpression ClassExpression::some(Iri property, ClassExpression filler) {
    ClassExpression e;
    e.kind = ExpressionKind::SomeValuesFrom;
    e.iri = std::move(property);
    e.operands.push_back(std::move(filler));
    return e;
}

ClassExpression ClassExpression::only(Iri property, ClassExpression filler) {
    ClassExpression e;
    e.kind = ExpressionKind::AllValuesFrom;
    e.iri = std::move(property);
    e.operands.push_back(std::move(filler));
    return e;
}

ClassExpression ClassExpression::intersection(std::vector<ClassExpression> operands) {
    if (operands.size() < 2) throw std::invalid_argument("IntersectionOf needs at least two operands");
    ClassExpression e;
    e.kind = ExpressionKind::IntersectionOf;
    e.operands = std::move(operands);
    return e;
}

ClassExpression ClassExpression::union_of(std::vector<ClassExpression> operands) {
    if (operands.size() < 2) throw std::invalid_argument("UnionOf needs at least two operands");
    ClassExpression e;
    e.kind = ExpressionKind::UnionOf;
    e.operands = std::move(operands);
    return e;
}

ClassExpression ClassExpression::complement(ClassExpression operand) {
    ClassExpression e;
    e.kind = ExpressionKind::ComplementOf;
    e.operands.push_back(std::move(operand));
    return e;
}

ClassExpression ClassExpression::has_value(Iri property, Iri individual) {
    ClassExpression e;
    e.kind = ExpressionKind::HasValue;
    e.iri = std::move(property);
    e.individual = std::move(individual);
    return e;
}

ClassExpression ClassExpression::opaque(std::string text) {
    ClassExpression e;
    e.kind = ExpressionKind::Opaque;
    e.opaque_text = std::move(text);
    return e;
}

const ClassExpression* node_at(const ClassExpression& root, const TreePath& path) {
    const ClassExpression* node = &root;
    for (std::size_t step : path) {
        if (step >= node->operands.size()) return nullptr;
        node = &node->operands[step];
    }
    return node;
}

ClassExpression* node_at(ClassExpression& root, const TreePath& path) {
    return const_cast<ClassExpression*>(node_at(static_cast<const ClassExpression&>(root), path));
}

std::size_t node_count(const ClassExpression& expr) {
    std::size_t n = 1;
    for (const auto& op : expr.operands) n += node_count(op);
    return n;
}

std::size_t depth(const ClassExpression& expr) {
    std::size_t d = 0;
    for (const auto& op : expr.operands) d = std::max(d, depth(op));
    return d + 1;
}

bool is_swappable(ExpressionKind kind) {
    return kind == ExpressionKind::SomeValuesFrom || kind == ExpressionKind::AllValuesFrom ||
           kind == ExpressionKind::IntersectionOf || kind == ExpressionKind::UnionOf;
}

namespace {

void collect_swappable(const ClassExpression& expr, TreePath& path, std::vector<TreePath>& out) {
    if (is_swappable(expr.kind)) out.push_back(path);
    for (std::size_t i = 0; i < expr.operands.size(); ++i) {
        path.push_back(i);
        collect_swappable(expr.operands[i], path, out);
        path.pop_back();
    }
}

}  // namespace

std::vector<TreePath> swappable_paths(const ClassExpression& expr) {
    std::vector<TreePath> out;
    TreePath path;
    collect_swappable(expr, path, out);
    return out;
}

}  // namespace cqforge
