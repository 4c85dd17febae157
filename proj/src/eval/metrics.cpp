#include "cqforge/eval/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cqforge {

std::string_view to_string(Aggregation a) { return a == Aggregation::Micro ? "micro" : "macro"; }
std::string_view to_string(GtMode m) { return m == GtMode::SpOnly ? "CQ_sp" : "CQ_sp+CQ_normal"; }

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> trimmed(const std::vector<std::string>& v) {
    std::vector<std::string> out;
    out.reserve(v.size());
    for (const auto& s : v) out.push_back(trim(s));
    return out;
}

double f1_of(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

std::vector<std::size_t> rows_reaching(const SimilarityMatrix& m, double tau) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (!m[i].empty() && *std::max_element(m[i].begin(), m[i].end()) >= tau) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> cols_reaching(const SimilarityMatrix& m, std::size_t cols, double tau) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < cols; ++j) {
        bool hit = false;
        for (const auto& row : m) hit = hit || row[j] >= tau;
        if (hit) out.push_back(j);
    }
    return out;
}

}  // namespace

std::vector<std::size_t> valid_set(const std::vector<std::string>& generated, const std::vector<std::string>& reference,
                                   double tau, const SimilarityBackend& backend) {
    if (generated.empty() || reference.empty()) return {};
    return rows_reaching(backend.similarity(trimmed(generated), trimmed(reference)), tau);
}

std::vector<std::size_t> matched_set(const std::vector<std::string>& generated,
                                     const std::vector<std::string>& reference, double tau,
                                     const SimilarityBackend& backend) {
    if (generated.empty() || reference.empty()) return {};
    return cols_reaching(backend.similarity(trimmed(generated), trimmed(reference)), reference.size(), tau);
}

TermEvalResult evaluate_term(const std::vector<std::string>& generated, const std::vector<std::string>& reference,
                             const EvalConfig& config, const SimilarityBackend& backend) {
    if (reference.empty()) throw std::invalid_argument("evaluate_term: empty reference set");
    TermEvalResult r;
    r.gen_count = generated.size();
    r.gt_count = reference.size();
    if (generated.empty()) {
        r.empty_generation = true;
        return r;
    }
    const SimilarityMatrix m = backend.similarity(trimmed(generated), trimmed(reference));
    r.valid_gen = rows_reaching(m, config.tau);
    r.matched_gt = cols_reaching(m, reference.size(), config.tau);
    for (const auto& row : m) r.per_gen_max_sim.push_back(*std::max_element(row.begin(), row.end()));
    r.precision = static_cast<double>(r.valid_gen.size()) / static_cast<double>(r.gen_count);
    r.recall = static_cast<double>(r.matched_gt.size()) / static_cast<double>(r.gt_count);
    r.f1 = f1_of(r.precision, r.recall);
    return r;
}

Aggregate aggregate(const std::vector<const TermEvalResult*>& results) {
    Aggregate a;
    a.terms = results.size();
    double sum_p = 0, sum_r = 0, sum_f = 0, sum_cs = 0, sum_term_cs = 0;
    std::size_t n_cs = 0, n_term_cs = 0;
    for (const TermEvalResult* r : results) {
        a.gen_total += r->gen_count;
        a.valid_total += r->valid_gen.size();
        a.gt_total += r->gt_count;
        a.matched_total += r->matched_gt.size();
        sum_p += r->precision;
        sum_r += r->recall;
        sum_f += r->f1;
        double term_cs = 0;
        for (double s : r->per_gen_max_sim) {
            sum_cs += s;
            term_cs += s;
        }
        n_cs += r->per_gen_max_sim.size();
        if (!r->per_gen_max_sim.empty()) {
            sum_term_cs += term_cs / static_cast<double>(r->per_gen_max_sim.size());
            ++n_term_cs;
        }
    }
    if (a.gen_total) a.micro_precision = static_cast<double>(a.valid_total) / static_cast<double>(a.gen_total);
    if (a.gt_total) a.micro_recall = static_cast<double>(a.matched_total) / static_cast<double>(a.gt_total);
    a.micro_f1 = f1_of(a.micro_precision, a.micro_recall);
    if (a.terms) {
        const auto n = static_cast<double>(a.terms);
        a.macro_precision = sum_p / n;
        a.macro_recall = sum_r / n;
        a.macro_f1 = sum_f / n;
    }
    if (n_cs) a.cos_sim_per_cq = sum_cs / static_cast<double>(n_cs);
    if (n_term_cs) a.cos_sim_per_term = sum_term_cs / static_cast<double>(n_term_cs);
    return a;
}

std::vector<std::string> reference_cqs(const DatasetTriple& t, GtMode mode) {
    if (mode == GtMode::SpOnly) {
        if (t.assigned_type == MisalignmentType::Type4Alignment) return {};
        return t.target_cqs;
    }
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& set : t.cq_normal_all) {
        for (const auto& q : set.questions) {
            if (seen.insert(trim(q)).second) out.push_back(q);
        }
    }
    return out;
}

MetricsReport evaluate_suite(const std::vector<DatasetTriple>& test, const Generations& generations,
                             const EvalConfig& config, const SimilarityBackend& backend, GtMode gt_mode) {
    MetricsReport report;
    report.config = config;
    report.gt_mode = gt_mode;
    for (const auto& t : test) {
        const auto reference = reference_cqs(t, gt_mode);
        if (reference.empty()) {
            report.skipped.push_back({t.term_iri, gt_mode == GtMode::SpOnly && t.assigned_type ==
                                                                                  MisalignmentType::Type4Alignment
                                                      ? "no pitfall CQs (Type 4)"
                                                      : "empty reference set"});
            continue;
        }
        auto gen = generations.find(t.term_iri);
        if (gen == generations.end() && config.missing == MissingPolicy::Skip) {
            report.skipped.push_back({t.term_iri, "no generations"});
            continue;
        }
        static const std::vector<std::string> kNone;
        TermEvalResult r = evaluate_term(gen == generations.end() ? kNone : gen->second, reference, config, backend);
        r.term_iri = t.term_iri;
        r.type = t.assigned_type;
        report.terms.push_back(std::move(r));
    }

    std::map<MisalignmentType, std::vector<const TermEvalResult*>> groups;
    std::vector<const TermEvalResult*> all;
    for (const auto& r : report.terms) {
        groups[r.type].push_back(&r);
        all.push_back(&r);
    }
    for (const auto& [type, members] : groups) report.per_type[type] = aggregate(members);
    report.overall = aggregate(all);
    return report;
}

namespace {

std::string format_row(const std::string& name, const Aggregate& a, const EvalConfig& c) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-10s %6zu %7.1f %7.1f %7.1f %8.4f\n", name.c_str(), a.terms,
                  100.0 * a.precision(c.aggregation), 100.0 * a.recall(c.aggregation), 100.0 * a.f1(c.aggregation),
                  a.cos_sim(c.cos_sim_mode));
    return buf;
}

nlohmann::ordered_json aggregate_json(const Aggregate& a) {
    nlohmann::ordered_json j;
    j["terms"] = a.terms;
    j["generated"] = a.gen_total;
    j["valid"] = a.valid_total;
    j["reference"] = a.gt_total;
    j["matched"] = a.matched_total;
    j["micro"] = {{"precision", a.micro_precision}, {"recall", a.micro_recall}, {"f1", a.micro_f1}};
    j["macro"] = {{"precision", a.macro_precision}, {"recall", a.macro_recall}, {"f1", a.macro_f1}};
    j["cos_sim_per_cq"] = a.cos_sim_per_cq;
    j["cos_sim_per_term"] = a.cos_sim_per_term;
    return j;
}

}  // namespace

std::string render_report(const MetricsReport& report) {
    const EvalConfig& c = report.config;
    char buf[200];
    std::snprintf(buf, sizeof buf, "tau=%.2f reference=%s aggregation=%s cs=%s backend=%s\n", c.tau,
                  std::string(to_string(report.gt_mode)).c_str(), std::string(to_string(c.aggregation)).c_str(),
                  c.cos_sim_mode == CosSimMode::PerGeneratedCq ? "per-cq" : "per-term", c.backend_id.c_str());
    std::string out = buf;
    std::snprintf(buf, sizeof buf, "%-10s %6s %7s %7s %7s %8s\n", "group", "terms", "P", "R", "F1", "C.S.");
    out += buf;
    for (const auto& [type, agg] : report.per_type) out += format_row("Type " + std::to_string(ordinal(type)), agg, c);
    out += format_row("Overall", report.overall, c);
    if (!report.skipped.empty()) {
        out += std::to_string(report.skipped.size()) + " term(s) skipped\n";
    }
    std::size_t empty = 0;
    for (const auto& t : report.terms) empty += t.empty_generation ? 1 : 0;
    if (empty) out += std::to_string(empty) + " term(s) had no generated CQs (precision counted as 0)\n";
    return out;
}

nlohmann::ordered_json report_to_json(const MetricsReport& report) {
    nlohmann::ordered_json j;
    const EvalConfig& c = report.config;
    j["config"] = {{"tau", c.tau},
                   {"backend", c.backend_id},
                   {"aggregation", to_string(c.aggregation)},
                   {"cos_sim_mode", c.cos_sim_mode == CosSimMode::PerGeneratedCq ? "per-cq" : "per-term"},
                   {"missing", c.missing == MissingPolicy::Skip ? "skip" : "count-as-zero"},
                   {"reference", to_string(report.gt_mode)}};
    j["overall"] = aggregate_json(report.overall);
    nlohmann::ordered_json per_type = nlohmann::ordered_json::object();
    for (const auto& [type, agg] : report.per_type) per_type[std::string(to_string(type))] = aggregate_json(agg);
    j["per_type"] = std::move(per_type);
    auto terms = nlohmann::ordered_json::array();
    for (const auto& t : report.terms) {
        terms.push_back({{"term_iri", t.term_iri},
                         {"type", to_string(t.type)},
                         {"precision", t.precision},
                         {"recall", t.recall},
                         {"f1", t.f1},
                         {"valid_gen", t.valid_gen},
                         {"matched_gt", t.matched_gt},
                         {"per_gen_max_sim", t.per_gen_max_sim},
                         {"empty_generation", t.empty_generation}});
    }
    j["terms"] = std::move(terms);
    auto skipped = nlohmann::ordered_json::array();
    for (const auto& s : report.skipped) skipped.push_back({{"term_iri", s.term_iri}, {"reason", s.reason}});
    j["skipped"] = std::move(skipped);
    return j;
}

Generations parse_generations(const std::string& jsonl) {
    Generations out;
    std::istringstream in(jsonl);
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            out[j.at("term_iri").get<std::string>()] = j.at("questions").get<std::vector<std::string>>();
        } catch (const nlohmann::json::exception& e) {
            throw std::invalid_argument("generations line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace cqforge
