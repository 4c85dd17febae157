#include "cqforge/core/iri.hpp"

#include <algorithm>

namespace cqforge {

PrefixMap standard_prefixes() {
    return {
        {"owl", "http://www.w3.org/2002/07/owl#"},
        {"rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#"},
        {"rdfs", "http://www.w3.org/2000/01/rdf-schema#"},
        {"xsd", "http://www.w3.org/2001/XMLSchema#"},
    };
}

std::string local_name(const Iri& iri) {
    const auto pos = iri.value.find_last_of("#/");
    if (pos == std::string::npos || pos + 1 == iri.value.size()) return iri.value;
    return iri.value.substr(pos + 1);
}

namespace {

bool valid_local_part(std::string_view local) {
    if (local.empty() || local.back() == '.') return false;
    return std::none_of(local.begin(), local.end(), [](unsigned char c) {
        return c <= ' ' || c == '(' || c == ')' || c == '<' || c == '>' || c == '"' || c == '=' ||
               c == '#' || c == '/' || c == ':' || c == '?' || c == '\\' || c == '\'' || c == ',' ||
               c == ';' || c == '{' || c == '}' || c == '[' || c == ']' || c == '^' || c == '@';
    });
}

}  // namespace

std::string abbreviate(const Iri& iri, const PrefixMap& prefixes) {
    const std::string* best_name = nullptr;
    std::size_t best_len = 0;
    for (const auto& [name, ns] : prefixes) {
        if (ns.empty() || ns.size() <= best_len) continue;
        if (iri.value.size() <= ns.size() || iri.value.compare(0, ns.size(), ns) != 0) continue;
        if (!valid_local_part(std::string_view(iri.value).substr(ns.size()))) continue;
        best_name = &name;
        best_len = ns.size();
    }
    if (best_name == nullptr) return "<" + iri.value + ">";
    return *best_name + ":" + iri.value.substr(best_len);
}

}  // namespace cqforge
