#include "cqforge/generation/templates.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>

namespace cqforge {

const std::map<std::string, std::set<char>>& template_key_schema() {
    static const std::map<std::string, std::set<char>> schema = {
        {"SubClassOf", {'A', 'B'}},
        {"SubClassOf.some", {'A', 'B', 'C'}},
        {"SubClassOf.only", {'A', 'B', 'C'}},
        {"EquivalentTo", {'A', 'B'}},
        {"EquivalentTo.some", {'A', 'B', 'C'}},
        {"EquivalentTo.only", {'A', 'B', 'C'}},
        {"DisjointWith", {'A', 'B'}},
        {"Domain", {'A', 'B'}},
        {"Range", {'A', 'B'}},
        {"SubPropertyOf", {'A', 'B'}},
        {"InverseOf", {'A', 'B'}},
        {"Characteristic", {'A', 'B'}},
    };
    return schema;
}

namespace {

std::set<char> placeholders_in(const std::string& text) {
    std::set<char> out;
    for (std::size_t i = 0; i + 2 < text.size(); ++i) {
        if (text[i] == '{' && text[i + 2] == '}' && text[i + 1] >= 'A' && text[i + 1] <= 'D') out.insert(text[i + 1]);
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// "InverseFunctional" -> "inverse functional"
std::string characteristic_words(const std::string& name) {
    std::string out;
    for (char c : name) {
        if (std::isupper(static_cast<unsigned char>(c)) && !out.empty()) out.push_back(' ');
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

bool compound(const ClassExpression& e) {
    return e.kind != ExpressionKind::Named && e.kind != ExpressionKind::Opaque;
}

}  // namespace

TemplateRegistry TemplateRegistry::from_json(const nlohmann::json& doc) {
    const auto& schema = template_key_schema();
    TemplateRegistry reg;
    if (!doc.contains("relations") || !doc["relations"].is_object()) {
        throw std::invalid_argument("template file: missing 'relations' object");
    }
    for (const auto& [key, entry] : doc["relations"].items()) {
        auto allowed = schema.find(key);
        if (allowed == schema.end()) throw std::invalid_argument("template file: unknown relation key '" + key + "'");
        RelationTemplates rt;
        rt.templates = entry.at("templates").get<std::vector<std::string>>();
        rt.example = entry.value("example", std::string{});
        if (rt.templates.size() < kMinTemplates || rt.templates.size() > kMaxTemplates) {
            throw std::invalid_argument("template file: '" + key + "' needs 3 to 7 templates, has " +
                                        std::to_string(rt.templates.size()));
        }
        for (const auto& t : rt.templates) {
            for (char p : placeholders_in(t)) {
                if (!allowed->second.count(p)) {
                    throw std::invalid_argument("template file: '" + key + "' cannot bind {" + std::string(1, p) +
                                                "} in \"" + t + "\"");
                }
            }
        }
        reg.entries_.emplace(key, std::move(rt));
    }
    return reg;
}

TemplateRegistry TemplateRegistry::load(const std::filesystem::path& path) {
    return from_json(nlohmann::json::parse(read_file(path)));
}

const RelationTemplates& TemplateRegistry::at(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw std::out_of_range("no CQ templates for relation '" + key + "'");
    return it->second;
}

std::string template_key(const Axiom& axiom) {
    std::string key(to_string(axiom.relation));
    if (axiom.relation == Relation::SubClassOf || axiom.relation == Relation::EquivalentTo) {
        const ClassExpression* e = axiom.expression();
        if (e && e->kind == ExpressionKind::SomeValuesFrom) key += ".some";
        if (e && e->kind == ExpressionKind::AllValuesFrom) key += ".only";
    }
    return key;
}

std::string render_expression(const ClassExpression& expr, const Ontology& context) {
    auto operand = [&](const ClassExpression& e) {
        const std::string s = render_expression(e, context);
        return compound(e) ? "(" + s + ")" : s;
    };
    auto joined = [&](const char* word) {
        std::string out;
        for (std::size_t i = 0; i < expr.operands.size(); ++i) {
            if (i) out += std::string(" ") + word + " ";
            out += operand(expr.operands[i]);
        }
        return out;
    };
    switch (expr.kind) {
        case ExpressionKind::Named: return context.label_of(expr.iri);
        case ExpressionKind::SomeValuesFrom:
            return context.label_of(expr.iri) + " some " + operand(expr.operands.at(0));
        case ExpressionKind::AllValuesFrom:
            return context.label_of(expr.iri) + " only " + operand(expr.operands.at(0));
        case ExpressionKind::IntersectionOf: return joined("and");
        case ExpressionKind::UnionOf: return joined("or");
        case ExpressionKind::ComplementOf: return "not " + operand(expr.operands.at(0));
        case ExpressionKind::HasValue:
            return context.label_of(expr.iri) + " value " + context.label_of(expr.individual);
        case ExpressionKind::Opaque: return expr.opaque_text;
    }
    return {};
}

TemplateBindings bind_axiom(const Axiom& axiom, const Ontology& context) {
    TemplateBindings b;
    b['A'] = context.label_of(axiom.subject);
    const std::string key = template_key(axiom);
    if (key.ends_with(".some") || key.ends_with(".only")) {
        const ClassExpression& e = *axiom.expression();
        b['B'] = context.label_of(e.iri);
        b['C'] = render_expression(e.operands.at(0), context);
    } else if (const ClassExpression* e = axiom.expression()) {
        b['B'] = render_expression(*e, context);
    } else if (const Iri* iri = axiom.object_iri()) {
        b['B'] = context.label_of(*iri);
    } else {
        b['B'] = characteristic_words(axiom.characteristic);
    }
    return b;
}

std::string instantiate(const std::string& text, const TemplateBindings& bindings) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (i + 2 < text.size() && text[i] == '{' && text[i + 2] == '}' && text[i + 1] >= 'A' && text[i + 1] <= 'D') {
            auto it = bindings.find(text[i + 1]);
            if (it == bindings.end()) {
                throw std::invalid_argument("unbound placeholder {" + std::string(1, text[i + 1]) + "}");
            }
            out += it->second;
            i += 2;
        } else {
            out.push_back(text[i]);
        }
    }
    return out;
}

DefinitionExamples DefinitionExamples::from_json(const nlohmann::json& doc) {
    DefinitionExamples ex;
    ex.for_class = doc.at("class").get<std::string>();
    ex.for_property = doc.at("property").get<std::string>();
    return ex;
}

DefinitionExamples DefinitionExamples::load(const std::filesystem::path& path) {
    return from_json(nlohmann::json::parse(read_file(path)));
}

}  // namespace cqforge
