#include "cqforge/generation/prompts.hpp"

#include <stdexcept>

namespace cqforge {

const std::string_view kCqPromptTemplate =
    "As an ontology engineer, generate a list of competency questions based on the following axiom and "
    "one-shot example. Definition of competency questions (CQs): the questions that outline the scope of "
    "ontology and provide an idea about the knowledgethat needs to be entailed in the ontology. Avoid using "
    "narrative questions + axioms. Don’t generate unnecessary text.\n"
    "Just return {n} distinct CQs separatedby ‘|’. Use the one-shot and known templates only as "
    "inspiration — do not copy them directly.  Rephrase and vary the structure of each CQ while "
    "maintaining its logical intent.\n"
    "Generate competency questions including axioms and current template.\n"
    "Template: {template}\n"
    "{example}\n"
    "Axiom: {axiom}\n"
    "Generated CQs:";

const std::string_view kDefinitionPromptTemplate =
    "You are an ontology engineer.\n"
    "Generate a {type} description including information of axiom set.\n"
    "The description should be concise and informative, providing a clear understanding of the {type}’s "
    "purpose and characteristics.\n"
    "Don’t generate unnecessary text. Just generate {type} description only.\n"
    "{type} name: {name}\n"
    "Axiom set: {axiom set}\n"
    "For example, {examples}\n"
    "Now, generate the description.";

namespace {

std::string substitute(std::string text, const std::string& slot, const std::string& value) {
    const std::string needle = "{" + slot + "}";
    for (std::size_t pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + value.size())) {
        text.replace(pos, needle.size(), value);
    }
    return text;
}

constexpr std::string_view kAxiomSetLead = "\nAxiom set: ";
constexpr std::string_view kAxiomSetTail = "\nFor example, ";

}  // namespace

std::string build_cq_prompt(const Axiom& axiom, const TemplateRegistry& registry, std::size_t n,
                            const Ontology& context) {
    const RelationTemplates& rt = registry.at(template_key(axiom));
    const TemplateBindings bindings = bind_axiom(axiom, context);
    std::string templates;
    for (std::size_t i = 0; i < rt.templates.size(); ++i) {
        if (i) templates += "\n";
        templates += "- " + instantiate(rt.templates[i], bindings);
    }
    // Slot values may themselves contain brace text, so fill the fixed slots first
    // and the free-text ones last.
    std::string out(kCqPromptTemplate);
    out = substitute(std::move(out), "n", std::to_string(n));
    out = substitute(std::move(out), "axiom", serialize_axiom(axiom, context.prefixes));
    out = substitute(std::move(out), "example", rt.example);
    out = substitute(std::move(out), "template", templates);
    return out;
}

std::string build_definition_prompt(const MisalignmentCase& c, const DefinitionExamples& examples,
                                    const Ontology& context) {
    if (c.definition_source_axioms.empty()) {
        throw std::invalid_argument("definition prompt for " + c.term.term.value + ": empty definition source");
    }
    const bool property = is_property(c.term.kind);
    std::string axioms;
    for (std::size_t i = 0; i < c.definition_source_axioms.size(); ++i) {
        if (i) axioms += "\n";
        axioms += serialize_axiom(c.definition_source_axioms[i], context.prefixes);
    }
    const std::string name = c.term.label.empty() ? context.label_of(c.term.term) : c.term.label;
    std::string out(kDefinitionPromptTemplate);
    out = substitute(std::move(out), "type", property ? "property" : "class");
    out = substitute(std::move(out), "name", name);
    out = substitute(std::move(out), "examples", property ? examples.for_property : examples.for_class);
    out = substitute(std::move(out), "axiom set", axioms);
    return out;
}

std::vector<std::string> extract_definition_axioms(std::string_view prompt) {
    const auto lead = prompt.find(kAxiomSetLead);
    if (lead == std::string_view::npos) return {};
    const auto begin = lead + kAxiomSetLead.size();
    const auto end = prompt.find(kAxiomSetTail, begin);
    if (end == std::string_view::npos) return {};
    std::vector<std::string> out;
    std::string_view body = prompt.substr(begin, end - begin);
    while (true) {
        const auto nl = body.find('\n');
        out.emplace_back(body.substr(0, nl));
        if (nl == std::string_view::npos) break;
        body.remove_prefix(nl + 1);
    }
    return out;
}

}  // namespace cqforge
