#include "cqforge/misalignment/misalignment.hpp"

#include <algorithm>
#include <numeric>

#include "cqforge/util/rng.hpp"

namespace cqforge {

std::string_view to_string(MisalignmentType type) {
    switch (type) {
        case MisalignmentType::Type1MissingAxiom: return "Type1MissingAxiom";
        case MisalignmentType::Type2UndefinedAxiom: return "Type2UndefinedAxiom";
        case MisalignmentType::Type3MisusingAxiom: return "Type3MisusingAxiom";
        case MisalignmentType::Type4Alignment: return "Type4Alignment";
    }
    return "?";
}

MisalignmentType misalignment_type_from_string(std::string_view text) {
    for (auto t : kAllMisalignmentTypes) {
        if (to_string(t) == text) return t;
    }
    throw std::invalid_argument("unknown misalignment type: " + std::string(text));
}

int ordinal(MisalignmentType type) { return static_cast<int>(type) + 1; }

namespace {

bool axiom_has_swappable(const Axiom& ax) {
    const ClassExpression* e = ax.expression();
    return e != nullptr && !swappable_paths(*e).empty();
}

std::vector<std::size_t> swappable_axioms(const TermRecord& term) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < term.axioms.size(); ++i) {
        if (axiom_has_swappable(term.axioms[i])) out.push_back(i);
    }
    return out;
}

}  // namespace

bool has_swappable_construct(const TermRecord& term) {
    return std::any_of(term.axioms.begin(), term.axioms.end(), axiom_has_swappable);
}

std::vector<MisalignmentType> eligible_types(const TermRecord& term) {
    std::vector<MisalignmentType> out;
    if (term.axioms.size() >= 2) {
        out.push_back(MisalignmentType::Type1MissingAxiom);
        out.push_back(MisalignmentType::Type2UndefinedAxiom);
    }
    if (has_swappable_construct(term)) out.push_back(MisalignmentType::Type3MisusingAxiom);
    out.push_back(MisalignmentType::Type4Alignment);
    return out;
}

MisalignmentType assign_type(const TermRecord& term, std::uint64_t seed, const TypeWeights& weights) {
    const auto eligible = eligible_types(term);
    if (eligible.size() == 1) return eligible.front();
    Rng rng(derive_seed(seed, "assign_type"));

    const bool uniform = std::all_of(eligible.begin(), eligible.end(), [&](MisalignmentType t) {
        return weights[static_cast<std::size_t>(t)] == weights[static_cast<std::size_t>(eligible.front())];
    });
    if (uniform) return eligible[rng.below(eligible.size())];

    double total = 0.0;
    for (auto t : eligible) total += std::max(0.0, weights[static_cast<std::size_t>(t)]);
    if (total <= 0.0) throw std::invalid_argument("assign_type: all eligible weights are zero");
    double x = rng.unit() * total;
    for (auto t : eligible) {
        x -= std::max(0.0, weights[static_cast<std::size_t>(t)]);
        if (x < 0.0) return t;
    }
    return eligible.back();
}

ExpressionKind dual(ExpressionKind kind) {
    switch (kind) {
        case ExpressionKind::SomeValuesFrom: return ExpressionKind::AllValuesFrom;
        case ExpressionKind::AllValuesFrom: return ExpressionKind::SomeValuesFrom;
        case ExpressionKind::IntersectionOf: return ExpressionKind::UnionOf;
        case ExpressionKind::UnionOf: return ExpressionKind::IntersectionOf;
        default: throw InjectionError("construct " + std::string(to_string(kind)) + " has no dual");
    }
}

ClassExpression swap_construct(const ClassExpression& expr, const TreePath& path) {
    ClassExpression out = expr;
    ClassExpression* node = node_at(out, path);
    if (node == nullptr) throw InjectionError("swap path out of range");
    if (!is_swappable(node->kind)) {
        throw InjectionError("node " + std::string(to_string(node->kind)) + " is not swap-eligible");
    }
    node->kind = dual(node->kind);
    return out;
}

MisalignmentCase inject(const TermRecord& term, MisalignmentType assigned, std::uint64_t seed) {
    const auto eligible = eligible_types(term);
    if (std::find(eligible.begin(), eligible.end(), assigned) == eligible.end()) {
        throw InjectionError(std::string(to_string(assigned)) + " is not eligible for " + term.term.value);
    }

    MisalignmentCase c;
    c.term = term;
    c.assigned_type = assigned;
    c.input_axioms = term.axioms;
    c.definition_source_axioms = term.axioms;
    c.rng_seed = seed;
    Rng rng(derive_seed(seed, "inject"));

    switch (assigned) {
        case MisalignmentType::Type1MissingAxiom: {
            const std::size_t i = rng.below(term.axioms.size());
            c.input_axioms.erase(c.input_axioms.begin() + static_cast<std::ptrdiff_t>(i));
            c.pitfall_axiom_index = i;
            break;
        }
        case MisalignmentType::Type2UndefinedAxiom: {
            const std::size_t i = rng.below(term.axioms.size());
            c.definition_source_axioms.erase(c.definition_source_axioms.begin() + static_cast<std::ptrdiff_t>(i));
            c.pitfall_axiom_index = i;
            break;
        }
        case MisalignmentType::Type3MisusingAxiom: {
            // Axiom first, then node within it, each uniform.
            const auto candidates = swappable_axioms(term);
            const std::size_t ai = candidates[rng.below(candidates.size())];
            ClassExpression& expr = *c.input_axioms[ai].expression();
            const auto paths = swappable_paths(expr);
            const TreePath& path = paths[rng.below(paths.size())];
            const ExpressionKind before = node_at(expr, path)->kind;
            expr = swap_construct(expr, path);
            c.pitfall_axiom_index = ai;
            c.swap_detail = SwapDetail{ai, path, before, dual(before)};
            break;
        }
        case MisalignmentType::Type4Alignment: break;
    }
    check_invariants(c);
    return c;
}

void check_invariants(const MisalignmentCase& c) {
    const auto& original = c.term.axioms;
    auto fail = [](const char* what) { throw std::logic_error(std::string("misalignment case: ") + what); };

    if (c.pitfall_axiom_index.has_value() != (c.assigned_type != MisalignmentType::Type4Alignment)) {
        fail("pitfall index must be present exactly for Types 1-3");
    }
    if (c.pitfall_axiom_index && *c.pitfall_axiom_index >= original.size()) fail("pitfall index out of range");

    auto without = [&](std::size_t i) {
        auto v = original;
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
        return v;
    };

    switch (c.assigned_type) {
        case MisalignmentType::Type1MissingAxiom:
            if (c.definition_source_axioms != original) fail("Type1 definition source must be the original set");
            if (c.input_axioms != without(*c.pitfall_axiom_index)) fail("Type1 input must drop exactly the pitfall axiom");
            break;
        case MisalignmentType::Type2UndefinedAxiom:
            if (c.input_axioms != original) fail("Type2 input must be the original set");
            if (c.definition_source_axioms != without(*c.pitfall_axiom_index)) {
                fail("Type2 definition source must drop exactly the pitfall axiom");
            }
            break;
        case MisalignmentType::Type3MisusingAxiom: {
            if (c.definition_source_axioms != original) fail("Type3 definition source must be the original set");
            if (c.input_axioms.size() != original.size()) fail("Type3 input size changed");
            if (!c.swap_detail || c.swap_detail->axiom_index != *c.pitfall_axiom_index) fail("Type3 swap detail missing");
            for (std::size_t i = 0; i < original.size(); ++i) {
                const bool differs = !(c.input_axioms[i] == original[i]);
                if (differs != (i == *c.pitfall_axiom_index)) fail("Type3 must alter exactly the pitfall axiom");
            }
            const Axiom& changed = c.input_axioms[*c.pitfall_axiom_index];
            const Axiom& orig = original[*c.pitfall_axiom_index];
            if (!changed.expression() || !orig.expression()) fail("Type3 axiom lost its expression");
            if (swap_construct(*orig.expression(), c.swap_detail->path) != *changed.expression()) {
                fail("Type3 axiom differs by more than the recorded swap");
            }
            break;
        }
        case MisalignmentType::Type4Alignment:
            if (c.input_axioms != original || c.definition_source_axioms != original) fail("Type4 must be unchanged");
            if (c.swap_detail) fail("Type4 carries no swap");
            break;
    }
}

}  // namespace cqforge
