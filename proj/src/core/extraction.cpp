#include <algorithm>

#include "cqforge/core/ontology.hpp"
#include "cqforge/util/rng.hpp"

namespace cqforge {

namespace {

bool same_assertion(const Axiom& a, const Axiom& b) {
    return a.relation == b.relation && a.object == b.object && a.characteristic == b.characteristic;
}

}  // namespace

std::vector<TermRecord> extract_terms(const Ontology& ontology, ExtractionFilter filter) {
    std::vector<TermRecord> out = ontology.terms;
    if (filter == ExtractionFilter::SubjectOnly) return out;

    for (auto& rec : out) {
        auto node = ontology.hierarchy.find(rec.term);
        if (node == ontology.hierarchy.end()) continue;
        std::vector<const TermRecord*> neighbours;
        for (const auto* set : {&node->second.parents, &node->second.children}) {
            for (const auto& iri : *set) {
                if (const TermRecord* n = ontology.find(iri)) neighbours.push_back(n);
            }
        }
        std::erase_if(rec.axioms, [&](const Axiom& ax) {
            return std::any_of(neighbours.begin(), neighbours.end(), [&](const TermRecord* n) {
                return std::any_of(n->axioms.begin(), n->axioms.end(),
                                   [&](const Axiom& other) { return same_assertion(ax, other); });
            });
        });
    }
    return out;
}

std::vector<TermRecord> sample_terms(const std::vector<TermRecord>& terms, std::size_t cap, std::uint64_t seed) {
    if (terms.size() <= cap) return terms;
    Rng rng(derive_seed(seed, "sample_terms"));
    std::vector<TermRecord> out;
    out.reserve(cap);
    for (std::size_t i : rng.sample_indices(terms.size(), cap)) out.push_back(terms[i]);
    return out;
}

}  // namespace cqforge
