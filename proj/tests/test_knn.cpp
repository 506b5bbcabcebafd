#include <gtest/gtest.h>

#include <random>
#include <set>

#include "mocet/error.hpp"
#include "mocet/knn.hpp"
#include "mocet/synthetic.hpp"
#include "support.hpp"

using namespace mocet;
using mocet::testing::brute_force_knn;
using mocet::testing::item;

namespace {

ReferenceCorpus triangle() {
    return ReferenceCorpus({item("a", {0, 0}, 1), item("b", {3, 0}, 0), item("c", {0, 4}, 1)});
}

ReferenceCorpus random_corpus_with_ties(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
    // Integer-valued coordinates on a small grid produce plenty of exact ties.
    std::uniform_int_distribution<int> coord(-2, 2);
    std::vector<ReferenceItem> items;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);  // ids not in insertion order
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> v(dim);
        for (auto& x : v) x = coord(rng);
        items.push_back(item("id" + std::to_string(order[i]), v, static_cast<int>(rng() % 2)));
    }
    return ReferenceCorpus(std::move(items));
}

}  // namespace

TEST(BuildIndex, EmptyCorpusThrows) {
    EXPECT_THROW(build_index(ReferenceCorpus{}), Error);
}

TEST(BuildIndex, SingleItemAlwaysReturned) {
    const auto index = build_index(ReferenceCorpus({item("only", {1, 1}, 1)}));
    for (const auto& q : {std::vector<double>{0, 0}, {-5, 7}, {1, 1}}) {
        const auto n = nearest_neighbors(index, EmbeddingVector(q), 1);
        ASSERT_EQ(n.size(), 1u);
        EXPECT_EQ(n[0].id, "only");
    }
}

TEST(NearestNeighbors, HandComputedDistances) {
    const auto index = build_index(triangle());
    const auto n = nearest_neighbors(index, EmbeddingVector({0, 0}), 2);
    ASSERT_EQ(n.size(), 2u);
    EXPECT_EQ(n[0].id, "a");
    EXPECT_EQ(n[0].distance, 0.0);
    EXPECT_EQ(n[1].id, "b");
    EXPECT_EQ(n[1].distance, 3.0);
    EXPECT_EQ(nearest_neighbors(index, EmbeddingVector({0, 0}), 3)[2].distance, 4.0);
}

TEST(NearestNeighbors, SelfQueryFirstWithZeroDistance) {
    const auto corpus = synthetic::random_corpus(50, 6, 0.5, 9);
    const auto index = build_index(corpus);
    for (const auto& it : corpus.items()) {
        const auto n = nearest_neighbors(index, it.embedding, 1);
        EXPECT_EQ(n[0].id, it.id);
        EXPECT_EQ(n[0].distance, 0.0);
    }
}

TEST(NearestNeighbors, TiesBrokenByAscendingId) {
    const auto index = build_index(ReferenceCorpus({item("zeta", {1, 0}, 1), item("alpha", {-1, 0}, 0),
                                                    item("mid", {0, 1}, 1)}));
    const auto n = nearest_neighbors(index, EmbeddingVector({0, 0}), 3);
    EXPECT_EQ(n[0].id, "alpha");
    EXPECT_EQ(n[1].id, "mid");
    EXPECT_EQ(n[2].id, "zeta");
}

TEST(NearestNeighbors, Preconditions) {
    const auto index = build_index(triangle());
    EXPECT_THROW(nearest_neighbors(index, EmbeddingVector({0, 0}), 4), Error);
    EXPECT_THROW(nearest_neighbors(index, EmbeddingVector({0, 0}), 0), Error);
    try {
        nearest_neighbors(index, EmbeddingVector({0, 0, 0}), 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::dimension_mismatch);
    }
}

TEST(NearestNeighbors, MatchesBruteForceOnRandomCorpora) {
    std::mt19937_64 rng(2024);
    for (int round = 0; round < 60; ++round) {
        const std::size_t n = 1 + rng() % 120;
        const std::size_t dim = 1 + rng() % 5;
        const auto corpus = random_corpus_with_ties(rng, n, dim);
        const auto index = build_index(corpus);
        for (int q = 0; q < 5; ++q) {
            std::vector<double> query(dim);
            std::uniform_int_distribution<int> coord(-2, 2);
            for (auto& x : query) x = coord(rng);
            const std::size_t k = 1 + rng() % n;
            const auto got = nearest_neighbors(index, EmbeddingVector(query), k);
            const auto want = brute_force_knn(corpus, query, k);
            ASSERT_EQ(got.size(), want.size());
            for (std::size_t i = 0; i < k; ++i) {
                EXPECT_EQ(got[i].id, want[i].first);
                EXPECT_EQ(got[i].distance, want[i].second);
                if (i > 0) EXPECT_LE(got[i - 1].distance, got[i].distance);
            }
        }
    }
}

TEST(NearestNeighbors, ExclusionSkipsOnePosition) {
    const auto corpus = triangle();
    const auto index = build_index(corpus);
    const auto n = index.nearest(std::vector<double>{0, 0}, 2, 0);
    EXPECT_EQ(n[0].id, "b");
    EXPECT_EQ(n[1].id, "c");
    EXPECT_THROW(index.nearest(std::vector<double>{0, 0}, 3, 0), Error);
}

TEST(CosineMetric, OrdersByAngle) {
    const auto index = build_index(
        ReferenceCorpus({item("far", {10, 0.1}, 1), item("aligned", {0.1, 3}, 0), item("diag", {1, 1}, 1)}),
        Metric::cosine);
    const auto n = nearest_neighbors(index, EmbeddingVector({0, 1}), 3);
    EXPECT_EQ(n[0].id, "aligned");
    EXPECT_EQ(n[1].id, "diag");
    EXPECT_EQ(n[2].id, "far");
    EXPECT_NEAR(n[1].distance, 1.0 - 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(CosineMetric, ZeroVectorsRejected) {
    EXPECT_THROW(build_index(ReferenceCorpus({item("z", {0, 0}, 1)}), Metric::cosine), Error);
    const auto index = build_index(ReferenceCorpus({item("a", {1, 0}, 1)}), Metric::cosine);
    EXPECT_THROW(nearest_neighbors(index, EmbeddingVector({0, 0}), 1), Error);
}

TEST(Metric, ParseAndPrint) {
    EXPECT_EQ(parse_metric("euclidean"), Metric::euclidean);
    EXPECT_EQ(parse_metric("cosine"), Metric::cosine);
    EXPECT_THROW(parse_metric("manhattan"), Error);
    EXPECT_STREQ(to_string(Metric::cosine), "cosine");
}

TEST(EstimateStepProbability, MeanOfNeighbourOutcomes) {
    // Nearest three to the origin: n1 (1), n2 (1), n3 (0); the far item is never used.
    const auto corpus = ReferenceCorpus({item("n1", {0.1, 0}, 1), item("n2", {0, 0.2}, 1), item("n3", {0.3, 0}, 0),
                                         item("far", {9, 9}, 1)});
    const auto index = build_index(corpus);
    ProtocolStep step{"s", EmbeddingVector({0, 0})};
    const auto estimate = estimate_step_probability(index, step, 3);
    EXPECT_EQ(estimate.p, 2.0 / 3.0);
    EXPECT_EQ(estimate.k_used, 3u);
    EXPECT_EQ(estimate.source, EstimateSource::knn);
    EXPECT_EQ(estimate.neighbor_ids, (std::vector<std::string>{"n1", "n2", "n3"}));
}

TEST(EstimateStepProbability, WholeCorpusGivesBaseRate) {
    const auto corpus = synthetic::random_corpus(37, 4, 0.4, 77);
    const auto index = build_index(corpus);
    std::size_t ones = 0;
    for (const auto& it : corpus.items()) ones += static_cast<std::size_t>(it.outcome);
    ProtocolStep step{"q", EmbeddingVector({0.3, -0.2, 1.0, 0.0})};
    EXPECT_EQ(estimate_step_probability(index, step, 37).p, static_cast<double>(ones) / 37.0);
}

TEST(EstimateStepProbability, ConstantOutcomes) {
    std::vector<ReferenceItem> items;
    for (int i = 0; i < 30; ++i) items.push_back(item("i" + std::to_string(i), {double(i), double(i % 7)}, 1));
    const auto index = build_index(ReferenceCorpus(items));
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g(0, 10);
    for (int q = 0; q < 20; ++q) {
        ProtocolStep step{"s", EmbeddingVector({g(rng), g(rng)})};
        EXPECT_EQ(estimate_step_probability(index, step, 1 + q % 30).p, 1.0);
    }
}

TEST(EstimateStepProbability, ErrorsAndExclusion) {
    const auto index = build_index(triangle());
    EXPECT_THROW(estimate_step_probability(index, ProtocolStep{"s", FixedProbability{0.5}}, 1), Error);
    EXPECT_THROW(estimate_step_probability(index, ProtocolStep{"s", EmbeddingVector({0, 0})}, 4), Error);

    // A step whose id matches a corpus item can leave that item out.
    ProtocolStep a{"a", EmbeddingVector({0, 0})};
    EXPECT_EQ(estimate_step_probability(index, a, 1).neighbor_ids.front(), "a");
    EXPECT_EQ(estimate_step_probability(index, a, 1, true).neighbor_ids.front(), "b");
}

TEST(EstimateStepProbability, MultipleOfOneOverKProperty) {
    std::mt19937_64 rng(8);
    for (int round = 0; round < 30; ++round) {
        const auto corpus = synthetic::random_corpus(20 + rng() % 80, 3, 0.5, rng());
        const auto index = build_index(corpus);
        const std::size_t k = 1 + rng() % corpus.size();
        ProtocolStep step{"s", EmbeddingVector({0.1 * double(rng() % 10), -0.5, 0.25})};
        const auto e = estimate_step_probability(index, step, k);
        EXPECT_GE(e.p, 0.0);
        EXPECT_LE(e.p, 1.0);
        const double scaled = e.p * static_cast<double>(k);
        EXPECT_NEAR(scaled, std::round(scaled), 1e-9);
        // Recompute from the listed neighbours.
        std::size_t ones = 0;
        for (const auto& id : e.neighbor_ids) ones += static_cast<std::size_t>(mocet::testing::outcome_of(corpus, id));
        EXPECT_EQ(e.p, static_cast<double>(ones) / static_cast<double>(k));
        // Determinism.
        EXPECT_EQ(estimate_step_probability(index, step, k).neighbor_ids, e.neighbor_ids);
    }
}

TEST(CategoricalProbability, CategoryMeans) {
    const auto corpus = ReferenceCorpus({item("1", {0}, 1, "a"), item("2", {0}, 0, "a"), item("3", {0}, 1, "solo"),
                                         item("4", {0}, 0)});
    EXPECT_EQ(estimate_categorical_probability(corpus, "a"), 0.5);
    EXPECT_EQ(estimate_categorical_probability(corpus, "solo"), 1.0);
    try {
        estimate_categorical_probability(corpus, "missing");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::unknown_category);
    }
}
