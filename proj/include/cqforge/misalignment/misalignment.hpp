#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cqforge/core/ontology.hpp"

namespace cqforge {

enum class MisalignmentType {
    Type1MissingAxiom,    // axiom dropped from the model input, kept for the definition
    Type2UndefinedAxiom,  // axiom kept in the input, dropped when writing the definition
    Type3MisusingAxiom,   // one construct swapped in the input axiom
    Type4Alignment,       // unchanged
};

inline constexpr std::array<MisalignmentType, 4> kAllMisalignmentTypes = {
    MisalignmentType::Type1MissingAxiom, MisalignmentType::Type2UndefinedAxiom,
    MisalignmentType::Type3MisusingAxiom, MisalignmentType::Type4Alignment};

std::string_view to_string(MisalignmentType type);
MisalignmentType misalignment_type_from_string(std::string_view text);
/// 1-based ordinal used in reports.
int ordinal(MisalignmentType type);

class InjectionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

struct SwapDetail {
    std::size_t axiom_index = 0;
    TreePath path;
    ExpressionKind before = ExpressionKind::Named;
    ExpressionKind after = ExpressionKind::Named;

    bool operator==(const SwapDetail&) const = default;
};

struct MisalignmentCase {
    TermRecord term;  // original, complete axioms
    MisalignmentType assigned_type = MisalignmentType::Type4Alignment;
    std::vector<Axiom> input_axioms;              // A_T shown to the model
    std::vector<Axiom> definition_source_axioms;  // axioms the definition is written from
    std::optional<std::size_t> pitfall_axiom_index;
    std::optional<SwapDetail> swap_detail;
    std::uint64_t rng_seed = 0;

    bool operator==(const MisalignmentCase&) const = default;
};

/// True when some axiom object contains a some/all/and/or node.
bool has_swappable_construct(const TermRecord& term);

/// Sorted set of types the term may be assigned. Type4 is always present.
std::vector<MisalignmentType> eligible_types(const TermRecord& term);

/// Relative weights for Type1..Type4. Only the eligible entries matter.
using TypeWeights = std::array<double, 4>;
inline constexpr TypeWeights kUniformWeights = {1.0, 1.0, 1.0, 1.0};

MisalignmentType assign_type(const TermRecord& term, std::uint64_t seed,
                             const TypeWeights& weights = kUniformWeights);

/// The dual of a swappable constructor: Some<->All, Intersection<->Union.
ExpressionKind dual(ExpressionKind kind);

/// Replaces the constructor at `path` by its dual. Throws InjectionError when the
/// path leaves the tree or names a node without a dual.
ClassExpression swap_construct(const ClassExpression& expr, const TreePath& path);

MisalignmentCase inject(const TermRecord& term, MisalignmentType assigned, std::uint64_t seed);

/// Throws std::logic_error naming the first violated case invariant.
void check_invariants(const MisalignmentCase& c);

}  // namespace cqforge
