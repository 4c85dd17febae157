#include "cqforge/generation/generation.hpp"

#include <algorithm>
#include <cctype>

#include "cqforge/util/rng.hpp"

namespace cqforge {

void GenerationConfig::validate() const {
    if (n == 0) throw std::invalid_argument("generation: n must be at least 1");
    if (temperature && *temperature < 0.0) throw std::invalid_argument("generation: temperature must be >= 0");
}

std::string_view to_string(CqRole role) {
    return role == CqRole::SemanticPitfall ? "SemanticPitfall" : "Normal";
}

CqParseError::CqParseError(Kind kind, std::size_t found, std::size_t expected)
    : std::runtime_error(kind == Kind::EmptyResponse
                             ? std::string("empty CQ response")
                             : "expected " + std::to_string(expected) + " CQs, found " + std::to_string(found)),
      kind_(kind),
      found_(found),
      expected_(expected) {}

namespace {

std::string trim(std::string_view s) {
    auto space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && space(s.front())) s.remove_prefix(1);
    while (!s.empty() && space(s.back())) s.remove_suffix(1);
    return std::string(s);
}

}  // namespace

std::vector<std::string> parse_cq_response(const std::string& raw, std::size_t n) {
    std::vector<std::string> items;
    std::string_view rest(raw);
    while (true) {
        const auto bar = rest.find('|');
        std::string item = trim(rest.substr(0, bar));
        if (!item.empty()) items.push_back(std::move(item));
        if (bar == std::string_view::npos) break;
        rest.remove_prefix(bar + 1);
    }
    if (items.empty()) throw CqParseError(CqParseError::Kind::EmptyResponse, 0, n);
    if (items.size() != n) throw CqParseError(CqParseError::Kind::ItemCountMismatch, items.size(), n);
    return items;
}

CaseArtifacts generate_case_artifacts(const MisalignmentCase& c, const GenerationConfig& config,
                                      const TextBackend& backend, const GenerationResources& resources,
                                      const Ontology& context) {
    config.validate();
    CaseArtifacts out;
    const std::uint64_t case_seed = derive_seed(config.master_seed, c.term.term.value);
    const std::size_t attempts = config.max_retries + 1;

    std::string last_error;
    const std::string def_prompt = build_definition_prompt(c, resources.definition_examples, context);
    for (std::size_t attempt = 0; attempt < attempts && out.definition.empty(); ++attempt) {
        try {
            std::string text =
                trim(backend.complete(def_prompt, config.temperature, derive_seed(case_seed, "definition#" +
                                                                                                 std::to_string(attempt))));
            if (text.empty()) last_error = "empty definition";
            out.definition = std::move(text);
        } catch (const BackendUnreachable&) {
            throw;
        } catch (const BackendError& e) {
            last_error = e.what();
        }
    }
    if (out.definition.empty()) {
        out.failure = "definition: " + last_error;
        return out;
    }

    for (std::size_t i = 0; i < c.term.axioms.size(); ++i) {
        const std::string prompt = build_cq_prompt(c.term.axioms[i], resources.templates, config.n, context);
        CqSet set;
        set.axiom_index = i;
        set.role = c.pitfall_axiom_index == i ? CqRole::SemanticPitfall : CqRole::Normal;
        for (std::size_t attempt = 0; attempt < attempts && set.questions.empty(); ++attempt) {
            const std::uint64_t seed =
                derive_seed(case_seed, "axiom#" + std::to_string(i) + "#" + std::to_string(attempt));
            try {
                set.questions = parse_cq_response(backend.complete(prompt, config.temperature, seed), config.n);
            } catch (const BackendUnreachable&) {
                throw;
            } catch (const BackendError& e) {
                last_error = e.what();
            } catch (const CqParseError& e) {
                last_error = e.what();
            }
        }
        if (set.questions.empty()) {
            out.failure = "axiom " + std::to_string(i) + ": " + last_error + " after " + std::to_string(attempts) +
                          " attempts";
            out.cq_sets.clear();
            return out;
        }
        out.cq_sets.push_back(std::move(set));
    }
    out.ok = true;
    return out;
}

}  // namespace cqforge
