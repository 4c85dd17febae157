#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cqforge/core/ontology.hpp"

namespace cqforge {

/// Templates and the one-shot example for one axiom shape.
struct RelationTemplates {
    std::vector<std::string> templates;  // text with {A}..{D} placeholders
    std::string example;
};

/// Placeholder values for one axiom.
using TemplateBindings = std::map<char, std::string>;

/// Immutable after construction.
class TemplateRegistry {
  public:
    static constexpr std::size_t kMinTemplates = 3;
    static constexpr std::size_t kMaxTemplates = 7;

    TemplateRegistry() = default;

    /// Throws std::invalid_argument on schema violations: unknown key, template
    /// count outside [3, 7], or a placeholder the key cannot bind.
    static TemplateRegistry from_json(const nlohmann::json& doc);
    static TemplateRegistry load(const std::filesystem::path& path);

    /// Throws std::out_of_range when no templates exist for `key`.
    const RelationTemplates& at(const std::string& key) const;
    bool contains(const std::string& key) const { return entries_.count(key) != 0; }
    const std::map<std::string, RelationTemplates>& entries() const { return entries_; }

  private:
    std::map<std::string, RelationTemplates> entries_;
};

/// Registry key for an axiom: the relation name, refined with ".some"/".only"
/// for SubClassOf/EquivalentTo whose object is a top-level restriction.
std::string template_key(const Axiom& axiom);

/// All keys the registry understands and the placeholders each can bind.
const std::map<std::string, std::set<char>>& template_key_schema();

/// Human-readable Manchester-style rendering ("eats only (is-part-of some plant)").
std::string render_expression(const ClassExpression& expr, const Ontology& context);

TemplateBindings bind_axiom(const Axiom& axiom, const Ontology& context);

/// Substitutes {A}..{D}. Throws std::invalid_argument on an unbound placeholder.
std::string instantiate(const std::string& text, const TemplateBindings& bindings);

/// Bundled few-shot examples for definition prompts.
struct DefinitionExamples {
    std::string for_class;
    std::string for_property;

    static DefinitionExamples from_json(const nlohmann::json& doc);
    static DefinitionExamples load(const std::filesystem::path& path);
};

}  // namespace cqforge
