#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <thread>

#include "httplib.h"

#include "cqforge/eval/metrics.hpp"
#include "support.hpp"

using namespace cqforge;
using namespace cqforge::testing;

namespace {

using Strings = std::vector<std::string>;

EvalConfig config_with(double tau) {
    EvalConfig c;
    c.tau = tau;
    return c;
}

DatasetTriple triple(const std::string& iri, MisalignmentType type, Strings target, std::vector<NormalCqs> normal) {
    DatasetTriple t;
    t.term_iri = iri;
    t.assigned_type = type;
    t.target_cqs = std::move(target);
    t.cq_normal_all = std::move(normal);
    if (type != MisalignmentType::Type4Alignment) t.pitfall_axiom_index = 0;
    return t;
}

}  // namespace

TEST(Metrics, DefaultThreshold) { EXPECT_EQ(EvalConfig{}.tau, 0.7); }

TEST(Metrics, SetExamples) {
    ExactMatchBackend exact;
    EXPECT_EQ(valid_set({"Q?"}, {"Q?"}, 0.7, exact), (std::vector<std::size_t>{0}));
    EXPECT_EQ(valid_set({"a", "b", "c"}, {"a", "d"}, 0.7, exact), (std::vector<std::size_t>{0}));
    EXPECT_EQ(matched_set({"a", "b", "c"}, {"a", "d"}, 0.7, exact), (std::vector<std::size_t>{0}));
    EXPECT_TRUE(valid_set({"a"}, {"a"}, 1.01, exact).empty());
    EXPECT_TRUE(matched_set({}, {"a"}, 0.7, exact).empty());
    EXPECT_EQ(matched_set({"x", "y"}, {"x", "y"}, 0.7, exact), (std::vector<std::size_t>{0, 1}));
    const auto r = evaluate_term({"a", "b", "c"}, {"a", "d"}, config_with(0.7), exact);
    EXPECT_DOUBLE_EQ(r.recall, 0.5);
    EXPECT_DOUBLE_EQ(r.precision, 1.0 / 3.0);
}

TEST(Metrics, Identities) {
    ExactMatchBackend exact;
    TokenJaccardBackend jac;
    const Strings s = {"what does a lion eat?", "is a leaf part of a plant?", "what is a plant?"};
    for (const SimilarityBackend* b : {static_cast<const SimilarityBackend*>(&exact),
                                       static_cast<const SimilarityBackend*>(&jac)}) {
        const auto r = evaluate_term(s, s, EvalConfig{}, *b);
        EXPECT_EQ(r.precision, 1.0);
        EXPECT_EQ(r.recall, 1.0);
        EXPECT_EQ(r.f1, 1.0);
        for (double m : r.per_gen_max_sim) EXPECT_EQ(m, 1.0);
    }
    const auto d = evaluate_term({"a?", "b?"}, {"c?", "d?", "e?"}, EvalConfig{}, exact);
    EXPECT_EQ(d.precision, 0.0);
    EXPECT_EQ(d.recall, 0.0);
    EXPECT_EQ(d.f1, 0.0);
    for (double m : d.per_gen_max_sim) EXPECT_EQ(m, 0.0);
}

TEST(Metrics, EmptyGenerationAndReference) {
    ExactMatchBackend exact;
    const auto r = evaluate_term({}, {"a"}, EvalConfig{}, exact);
    EXPECT_TRUE(r.empty_generation);
    EXPECT_EQ(r.precision, 0.0);
    EXPECT_EQ(r.recall, 0.0);
    EXPECT_THROW(evaluate_term({"a"}, {}, EvalConfig{}, exact), std::invalid_argument);
}

TEST(Metrics, TrimsButDoesNotNormalizeCase) {
    ExactMatchBackend exact;
    EXPECT_EQ(evaluate_term({"  Q? "}, {"Q?"}, EvalConfig{}, exact).precision, 1.0);
    EXPECT_EQ(evaluate_term({"q?"}, {"Q?"}, EvalConfig{}, exact).precision, 0.0);
}

TEST(Metrics, OracleEquivalence) {
    Rng rng(99);
    ExactMatchBackend exact;
    TokenJaccardBackend jac;
    for (int i = 0; i < 100; ++i) {
        const Strings gen = random_questions(rng, 1 + rng.below(5));
        const Strings gt = random_questions(rng, 1 + rng.below(5));
        const double tau = 0.05 * double(rng.below(21));
        const bool use_jaccard = i % 2 == 0;
        const SimilarityBackend& b = use_jaccard ? static_cast<const SimilarityBackend&>(jac) : exact;
        const auto want = oracle_metrics(gen, gt, tau, use_jaccard ? oracle_jaccard : oracle_exact);
        const auto got = evaluate_term(gen, gt, config_with(tau), b);
        ASSERT_EQ(got.valid_gen, want.valid);
        ASSERT_EQ(got.matched_gt, want.matched);
        ASSERT_NEAR(got.precision, want.precision, 1e-12);
        ASSERT_NEAR(got.recall, want.recall, 1e-12);
        ASSERT_NEAR(got.f1, want.f1, 1e-12);
        ASSERT_EQ(got.per_gen_max_sim.size(), want.max_sim.size());
        for (std::size_t k = 0; k < want.max_sim.size(); ++k) ASSERT_NEAR(got.per_gen_max_sim[k], want.max_sim[k], 1e-12);
    }
}

TEST(Metrics, ThresholdMonotonicity) {
    Rng rng(5);
    TokenJaccardBackend jac;
    HashedBagOfWordsBackend hashed;
    for (int i = 0; i < 50; ++i) {
        const Strings gen = random_questions(rng, 1 + rng.below(5));
        const Strings gt = random_questions(rng, 1 + rng.below(5));
        for (const SimilarityBackend* b : {static_cast<const SimilarityBackend*>(&jac),
                                           static_cast<const SimilarityBackend*>(&hashed)}) {
            double prev_p = 2, prev_r = 2;
            for (int step = 0; step <= 20; ++step) {
                const auto r = evaluate_term(gen, gt, config_with(0.05 * step), *b);
                ASSERT_LE(r.precision, prev_p);
                ASSERT_LE(r.recall, prev_r);
                prev_p = r.precision;
                prev_r = r.recall;
            }
        }
    }
}

TEST(Metrics, SymmetryDuality) {
    Rng rng(8);
    TokenJaccardBackend jac;
    for (int i = 0; i < 100; ++i) {
        const Strings g = random_questions(rng, 1 + rng.below(5));
        const Strings r = random_questions(rng, 1 + rng.below(5));
        const double tau = 0.1 * double(rng.below(11));
        EXPECT_EQ(valid_set(r, g, tau, jac), matched_set(g, r, tau, jac));
    }
}

TEST(Similarity, BackendsAreSymmetricAndReflexive) {
    Rng rng(4);
    TokenJaccardBackend jac;
    HashedBagOfWordsBackend hashed;
    for (int i = 0; i < 50; ++i) {
        const auto qs = random_questions(rng, 2);
        EXPECT_EQ(jac.score(qs[0], qs[1]), jac.score(qs[1], qs[0]));
        EXPECT_EQ(jac.score(qs[0], qs[0]), 1.0);
        EXPECT_EQ(jac.score(qs[0], qs[1]), oracle_jaccard(qs[0], qs[1]));
        const auto m = hashed.similarity(qs, qs);
        EXPECT_NEAR(m[0][1], m[1][0], 1e-12);
        EXPECT_NEAR(m[0][0], 1.0, 1e-12);
        for (const auto& v : hashed.embed(qs)) EXPECT_NEAR(std::sqrt(dot(v, v)), 1.0, 1e-12);
    }
}

TEST(Similarity, EmbeddingCacheServesRepeats) {
    HashedBagOfWordsBackend hashed;
    hashed.similarity({"a b", "c"}, {"a b"});
    EXPECT_EQ(hashed.cache().size(), 2u);
    hashed.similarity({"a b"}, {"c", "d"});
    EXPECT_EQ(hashed.cache().size(), 3u);
}

TEST(Suite, MicroAverageExample) {
    ExactMatchBackend exact;
    const std::vector<DatasetTriple> test = {
        triple("t1", MisalignmentType::Type1MissingAxiom, {"a?", "b?", "c?"}, {{0, {"a?", "b?", "c?"}}}),
        triple("t2", MisalignmentType::Type2UndefinedAxiom, {"d?", "e?", "f?"}, {{0, {"d?", "e?", "f?"}}}),
    };
    const Generations gens = {{"t1", {"a?", "b?", "c?"}}, {"t2", {"x?", "y?", "z?"}}};
    const auto rep = evaluate_suite(test, gens, EvalConfig{}, exact, GtMode::SpOnly);
    EXPECT_DOUBLE_EQ(rep.overall.micro_precision, 0.5);
    EXPECT_DOUBLE_EQ(rep.overall.micro_recall, 0.5);
    EXPECT_DOUBLE_EQ(rep.overall.macro_f1, 0.5);
    EXPECT_EQ(rep.overall.gen_total, 6u);
    EXPECT_EQ(rep.per_type.size(), 2u);
}

TEST(Suite, IdenticalSetsReportHundred) {
    ExactMatchBackend exact;
    const std::vector<DatasetTriple> test = {
        triple("t1", MisalignmentType::Type3MisusingAxiom, {"a?", "b?", "c?"}, {{0, {"a?", "b?", "c?"}}})};
    const auto rep = evaluate_suite(test, {{"t1", {"a?", "b?", "c?"}}}, EvalConfig{}, exact, GtMode::SpOnly);
    const std::string text = render_report(rep);
    EXPECT_NE(text.find("Overall"), std::string::npos);
    EXPECT_NE(text.find("  100.0   100.0   100.0   1.0000"), std::string::npos) << text;
    EXPECT_EQ(report_to_json(rep)["overall"]["micro"]["f1"], 1.0);
}

TEST(Suite, ReferenceModesAndMissingPolicy) {
    ExactMatchBackend exact;
    const std::vector<DatasetTriple> test = {
        triple("t1", MisalignmentType::Type1MissingAxiom, {"a?", "b?", "c?"},
               {{0, {"a?", "b?", "c?"}}, {1, {"d?", "a?", "e?"}}}),
        triple("t4", MisalignmentType::Type4Alignment, {"x?", "y?", "z?"}, {{0, {"x?", "y?", "z?"}}}),
        triple("missing", MisalignmentType::Type2UndefinedAxiom, {"m?", "n?", "o?"}, {{0, {"m?", "n?", "o?"}}}),
    };
    const Generations gens = {{"t1", {"a?", "d?"}}, {"t4", {"x?"}}};

    const auto sp = evaluate_suite(test, gens, EvalConfig{}, exact, GtMode::SpOnly);
    EXPECT_EQ(sp.terms.size(), 1u);  // Type4 and the missing term are skipped
    EXPECT_EQ(sp.skipped.size(), 2u);
    EXPECT_DOUBLE_EQ(sp.terms[0].precision, 0.5);

    const auto all = evaluate_suite(test, gens, EvalConfig{}, exact, GtMode::SpPlusNormal);
    ASSERT_EQ(all.terms.size(), 2u);
    EXPECT_EQ(all.terms[0].gt_count, 5u);  // a b c d e, duplicate "a?" dropped
    EXPECT_DOUBLE_EQ(all.terms[0].precision, 1.0);
    EXPECT_DOUBLE_EQ(all.terms[0].recall, 0.4);

    EvalConfig zero;
    zero.missing = MissingPolicy::CountAsZero;
    const auto z = evaluate_suite(test, gens, zero, exact, GtMode::SpOnly);
    ASSERT_EQ(z.terms.size(), 2u);
    EXPECT_TRUE(z.terms[1].empty_generation);
    EXPECT_LT(z.overall.micro_recall, sp.overall.micro_recall);
    EXPECT_NE(render_report(z).find("no generated CQs"), std::string::npos);
}

TEST(Suite, ParseGenerations) {
    const auto g = parse_generations("{\"term_iri\":\"t\",\"questions\":[\"a?\",\"b?\"]}\n\n");
    EXPECT_EQ(g.at("t"), (Strings{"a?", "b?"}));
    EXPECT_THROW(parse_generations("{\"term\":1}\n"), std::invalid_argument);
}

namespace {

// Minimal stand-in for the embedding service: hashed bag-of-words vectors.
class FakeEmbedServer {
  public:
    explicit FakeEmbedServer(bool break_norm = false) {
        server_.Post("/embed", [this, break_norm](const httplib::Request& req, httplib::Response& res) {
            ++requests;
            const auto texts = nlohmann::json::parse(req.body).at("texts").get<Strings>();
            auto vectors = model_.embed(texts);
            if (break_norm) vectors[0][0] += 0.5;
            res.set_content(nlohmann::json{{"vectors", vectors}, {"dim", 64}, {"model_id", "fake"}}.dump(),
                            "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~FakeEmbedServer() {
        server_.stop();
        thread_.join();
    }
    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
    std::atomic<int> requests{0};

  private:
    HashedBagOfWordsBackend model_;
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

}  // namespace

TEST(HttpEmbedding, MatchesLocalModelAndBatches) {
    FakeEmbedServer server;
    HttpEmbeddingBackend remote(server.url(), 2);
    HashedBagOfWordsBackend local;
    Rng rng(12);
    const auto qs = random_questions(rng, 5);
    const auto a = remote.embed(qs);
    const auto b = local.embed(qs);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < a[i].size(); ++k) EXPECT_NEAR(a[i][k], b[i][k], 1e-9);
    EXPECT_EQ(server.requests.load(), 3);  // 5 texts in batches of 2

    // Monotonicity holds with the HTTP backend too.
    const Strings ref = {qs[0], "what does a plant eat?"};
    double prev = 2;
    for (int step = 0; step <= 20; ++step) {
        const auto r = evaluate_term(qs, ref, config_with(0.05 * step), remote);
        EXPECT_LE(r.precision, prev);
        prev = r.precision;
    }
}

TEST(HttpEmbedding, RejectsBadVectorsAndDeadService) {
    FakeEmbedServer broken(true);
    EXPECT_THROW(HttpEmbeddingBackend(broken.url()).embed({"a"}), SimilarityError);
    EXPECT_THROW(HttpEmbeddingBackend("http://127.0.0.1:1", 8, 1).embed({"a"}), SimilarityError);
}
