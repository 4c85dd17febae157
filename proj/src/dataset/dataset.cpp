#include "cqforge/dataset/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cqforge/util/rng.hpp"

namespace cqforge {

nlohmann::ordered_json to_json(const DatasetTriple& t) {
    nlohmann::ordered_json j;
    j["term_iri"] = t.term_iri;
    j["term_kind"] = to_string(t.term_kind);
    j["ontology_id"] = t.ontology_id;
    j["assigned_type"] = to_string(t.assigned_type);
    j["input_axioms_text"] = t.input_axioms_text;
    j["definition"] = t.definition;
    j["target_cqs"] = t.target_cqs;
    auto normal = nlohmann::ordered_json::array();
    for (const auto& set : t.cq_normal_all) {
        normal.push_back({{"axiom_index", set.axiom_index}, {"questions", set.questions}});
    }
    j["cq_normal_all"] = std::move(normal);
    j["pitfall_axiom_index"] = t.pitfall_axiom_index ? nlohmann::ordered_json(*t.pitfall_axiom_index) : nlohmann::ordered_json(nullptr);
    j["seed"] = t.seed;
    return j;
}

DatasetTriple triple_from_json(const nlohmann::json& j) {
    try {
        DatasetTriple t;
        t.term_iri = j.at("term_iri").get<std::string>();
        t.term_kind = term_kind_from_string(j.at("term_kind").get<std::string>());
        t.ontology_id = j.at("ontology_id").get<std::string>();
        t.assigned_type = misalignment_type_from_string(j.at("assigned_type").get<std::string>());
        t.input_axioms_text = j.at("input_axioms_text").get<std::vector<std::string>>();
        t.definition = j.at("definition").get<std::string>();
        t.target_cqs = j.at("target_cqs").get<std::vector<std::string>>();
        for (const auto& set : j.at("cq_normal_all")) {
            t.cq_normal_all.push_back(
                {set.at("axiom_index").get<std::size_t>(), set.at("questions").get<std::vector<std::string>>()});
        }
        const auto& pitfall = j.at("pitfall_axiom_index");
        if (!pitfall.is_null()) t.pitfall_axiom_index = pitfall.get<std::size_t>();
        t.seed = j.at("seed").get<std::uint64_t>();
        return t;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("dataset record: ") + e.what());
    }
}

AssembleResult assemble(const std::vector<GeneratedCase>& cases, std::size_t n, std::uint64_t seed) {
    AssembleResult out;
    for (const auto& gc : cases) {
        const MisalignmentCase& mc = gc.misalignment;
        const CaseArtifacts& art = gc.artifacts;
        const std::string& iri = mc.term.term.value;
        if (!art.ok || art.definition.empty() || art.cq_sets.size() != mc.term.axioms.size()) {
            out.excluded.push_back({iri, art.failure.empty() ? "missing artifacts" : art.failure});
            continue;
        }

        DatasetTriple t;
        t.term_iri = iri;
        t.term_kind = mc.term.kind;
        t.ontology_id = mc.term.ontology_id;
        t.assigned_type = mc.assigned_type;
        for (const auto& ax : mc.input_axioms) t.input_axioms_text.push_back(serialize_axiom(ax, gc.prefixes));
        t.definition = art.definition;
        t.pitfall_axiom_index = mc.pitfall_axiom_index;
        t.seed = mc.rng_seed;
        for (const auto& set : art.cq_sets) t.cq_normal_all.push_back({set.axiom_index, set.questions});

        if (mc.assigned_type == MisalignmentType::Type4Alignment) {
            std::vector<std::string> pool;
            for (const auto& set : art.cq_sets) pool.insert(pool.end(), set.questions.begin(), set.questions.end());
            if (pool.size() < n) {
                out.excluded.push_back({iri, "fewer than n pooled questions"});
                continue;
            }
            Rng rng(derive_seed(seed, iri + "#type4-target"));
            for (std::size_t i : rng.sample_indices(pool.size(), n)) t.target_cqs.push_back(pool[i]);
        } else {
            const CqSet* pitfall = nullptr;
            for (const auto& set : art.cq_sets) {
                if (set.role == CqRole::SemanticPitfall) pitfall = &set;
            }
            if (pitfall == nullptr || pitfall->axiom_index != mc.pitfall_axiom_index) {
                out.excluded.push_back({iri, "pitfall CQ set missing"});
                continue;
            }
            t.target_cqs = pitfall->questions;
        }
        if (t.target_cqs.size() != n) {
            out.excluded.push_back({iri, "target CQ count differs from n"});
            continue;
        }
        out.triples.push_back(std::move(t));
    }
    return out;
}

void SplitSpec::validate() const {
    if (mode == Mode::Random && !(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw std::invalid_argument("split: train fraction must lie strictly between 0 and 1");
    }
}

namespace {

void random_partition(const std::vector<std::size_t>& members, double fraction, std::uint64_t seed,
                      std::vector<bool>& in_train) {
    std::vector<std::size_t> order = members;
    Rng rng(seed);
    rng.shuffle(order);
    const auto n_train = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(order.size())));
    for (std::size_t i = 0; i < n_train && i < order.size(); ++i) in_train[order[i]] = true;
}

}  // namespace

SplitResult split(const std::vector<DatasetTriple>& triples, const SplitSpec& spec) {
    spec.validate();
    std::vector<bool> in_train(triples.size(), false);

    if (spec.mode == SplitSpec::Mode::LeaveOneOntologyOut) {
        bool found = false;
        for (std::size_t i = 0; i < triples.size(); ++i) {
            const bool held_out = triples[i].ontology_id == spec.holdout;
            found = found || held_out;
            in_train[i] = !held_out;
        }
        if (!found) throw std::invalid_argument("split: holdout ontology '" + spec.holdout + "' not present");
    } else if (spec.stratify) {
        for (auto type : kAllMisalignmentTypes) {
            std::vector<std::size_t> members;
            for (std::size_t i = 0; i < triples.size(); ++i) {
                if (triples[i].assigned_type == type) members.push_back(i);
            }
            random_partition(members, spec.train_fraction,
                             derive_seed(spec.seed, "split#" + std::string(to_string(type))), in_train);
        }
    } else {
        std::vector<std::size_t> all(triples.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        random_partition(all, spec.train_fraction, derive_seed(spec.seed, "split"), in_train);
    }

    SplitResult out;
    for (std::size_t i = 0; i < triples.size(); ++i) (in_train[i] ? out.train : out.test).push_back(triples[i]);
    return out;
}

std::string to_jsonl(const std::vector<DatasetTriple>& triples) {
    std::string out;
    for (const auto& t : triples) out += to_json(t).dump() + "\n";
    return out;
}

std::vector<DatasetTriple> from_jsonl(const std::string& text) {
    std::vector<DatasetTriple> out;
    std::istringstream in(text);
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(triple_from_json(nlohmann::json::parse(line)));
        } catch (const std::exception& e) {
            throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

void export_jsonl(const std::vector<DatasetTriple>& triples, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << to_jsonl(triples);
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<DatasetTriple> import_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_jsonl(buf.str());
}

nlohmann::ordered_json finetune_metadata() {
    nlohmann::ordered_json j;
    j["base_model"] = "LLaMA-3.1-8B-Instruct";
    j["method"] = "LoRA";
    j["lora_rank"] = 8;
    j["lora_alpha"] = 16;
    j["lora_dropout"] = 0.05;
    j["epochs"] = 3;
    j["effective_batch_size"] = 4;
    j["learning_rate"] = 3e-4;
    j["precision"] = "bf16";
    j["executed"] = false;
    return j;
}

CorpusStats stats(const std::vector<DatasetTriple>& triples) {
    CorpusStats s;
    auto bump = [](KindCounts& k, TermKind kind) { (is_property(kind) ? k.properties : k.classes) += 1; };
    for (const auto& t : triples) {
        bump(s.per_ontology[t.ontology_id], t.term_kind);
        bump(s.per_type[static_cast<std::size_t>(t.assigned_type)], t.term_kind);
        bump(s.totals, t.term_kind);
    }
    return s;
}

namespace {

std::string row(const std::string& label, const std::vector<std::size_t>& values) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%-16s", label.c_str());
    std::string out = buf;
    for (auto v : values) {
        std::snprintf(buf, sizeof buf, "%12zu", v);
        out += buf;
    }
    return out + "\n";
}

std::string header(const std::string& label, const std::vector<std::string>& cols) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-16s", label.c_str());
    std::string out = buf;
    for (const auto& c : cols) {
        std::snprintf(buf, sizeof buf, "%12s", c.c_str());
        out += buf;
    }
    return out + "\n";
}

}  // namespace

std::string render_stats(const CorpusStats& s) {
    std::string out = "Terms per ontology\n";
    out += header("ontology", {"classes", "properties", "total"});
    for (const auto& [id, k] : s.per_ontology) out += row(id, {k.classes, k.properties, k.total()});
    out += row("all", {s.totals.classes, s.totals.properties, s.totals.total()});
    out += "\nTerms per misalignment type\n";
    out += header("", {"Type 1", "Type 2", "Type 3", "Type 4"});
    std::vector<std::size_t> c, p, t;
    for (const auto& k : s.per_type) {
        c.push_back(k.classes);
        p.push_back(k.properties);
        t.push_back(k.total());
    }
    out += row("classes", c);
    out += row("properties", p);
    out += row("total", t);
    return out;
}

std::string render_reference_diff(const CorpusStats& s) {
    std::string out = header("", {"Type 1", "Type 2", "Type 3", "Type 4"});
    std::vector<std::size_t> ours, ref(kReferenceTypeTotals.begin(), kReferenceTypeTotals.end());
    for (const auto& k : s.per_type) ours.push_back(k.total());
    out += row("this corpus", ours);
    out += row("reference", ref);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%-16s", "difference");
    out += buf;
    for (std::size_t i = 0; i < 4; ++i) {
        std::snprintf(buf, sizeof buf, "%+12lld",
                      static_cast<long long>(ours[i]) - static_cast<long long>(ref[i]));
        out += buf;
    }
    return out + "\n";
}

}  // namespace cqforge
