#pragma once

#include <compare>
#include <map>
#include <string>
#include <string_view>

namespace cqforge {

/// Absolute IRI naming an ontology entity.
struct Iri {
    std::string value;

    Iri() = default;
    explicit Iri(std::string v) : value(std::move(v)) {}

    bool empty() const { return value.empty(); }
    auto operator<=>(const Iri&) const = default;
};

/// Prefix name (without the trailing ':') to namespace IRI.
using PrefixMap = std::map<std::string, std::string>;

/// Prefixes every OWL functional-syntax document may use without declaring.
PrefixMap standard_prefixes();

/// Portion of the IRI after the last '#' or '/'; the whole IRI if neither occurs.
std::string local_name(const Iri& iri);

/// Shortest "prefix:local" form for the IRI, or "<iri>" when no prefix fits.
std::string abbreviate(const Iri& iri, const PrefixMap& prefixes);

}  // namespace cqforge
