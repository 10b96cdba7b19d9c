// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "adchain/search.hpp"
#include "test_support.hpp"

using namespace adchain;

namespace {

AdapterGraph fixture() {
    return parse_graph(testsupport::slurp(testsupport::fixture_path("media-players.json")));
}

AvailabilityVector vec(const std::vector<bool>& bits) {
    return AvailabilityVector::from_bits(bits);
}

// The strawman route of the media-player example, assembled by hand.
Chain video1_via_audio(const AdapterGraph& g) {
    Chain c;
    c.edges = {"Video1toAudio", "AudiotoVideo3"};
    c.source = "Video1";
    c.target = "Video3";
    c.composed = compose(dependency_matrix_of(g, "AudiotoVideo3"),
                         dependency_matrix_of(g, "Video1toAudio"));
    return c;
}

AdapterGraph random_graph(std::uint64_t seed) {
    GenParams params;
    params.interfaces = 2 + seed % 5;          // up to 6
    params.methods_min = 0;
    params.methods_max = 5;
    params.adapters = 1 + seed % 10;           // up to 10
    params.dependency_density = 0.15 + 0.1 * double(seed % 7);
    params.never_implementable_rate = 0.1 * double(seed % 5);
    params.seed = seed * 2654435761u + 17;
    return gen_random_graph(params);
}

} // namespace

TEST_CASE("loss of fixture chains") {
    const AdapterGraph g = fixture();
    const SearchOutcome best = greedy_chain(g, "Video1", "Video3");
    REQUIRE(best.found());
    CHECK(loss(*best.chain) == 4);
    CHECK(loss(video1_via_audio(g)) == 5);

    // A single identity adapter only loses the dummy slot.
    const AdapterGraph tiny = parse_graph(R"({
        "interfaces": [{"name": "P", "methods": ["a", "b"]},
                       {"name": "Q", "methods": ["c", "d"]}],
        "adapters": [{"name": "id", "source": "P", "target": "Q",
                      "provides": {"c": {"requires": ["a"]}, "d": {"requires": ["b"]}}}]})");
    CHECK(dependency_matrix_of(tiny, "id") == identity(3));
    const SearchOutcome one = greedy_chain(tiny, "P", "Q");
    REQUIRE(one.found());
    CHECK(loss(*one.chain) == 1);
}

TEST_CASE("weight of fixture chains") {
    const AdapterGraph g = fixture();
    const InterfaceSpec* video3 = g.find_interface("Video3");
    const Chain best = *greedy_chain(g, "Video1", "Video3").chain;

    CHECK(weight(best, WeightAssignment::uniform(*video3)) == 1);
    CHECK(weight(best, WeightAssignment::uniform(*video3, 0)) == 0);
    CHECK(weight(video1_via_audio(g), WeightAssignment::uniform(*video3)) == 0);

    const WeightAssignment play_heavy = WeightAssignment::from_map(
        *video3, {{"play", 10}, {"getVolume", 1}, {"setVolume", 1}, {"setEqualizer", 1}});
    CHECK(weight(best, play_heavy) == 10);

    // A weight assignment for a different interface is rejected.
    CHECK_THROWS_AS(weight(best, WeightAssignment::uniform(*g.find_interface("Audio"))),
                    InvalidInput);
}

TEST_CASE("greedy chain on the fixture") {
    const AdapterGraph g = fixture();
    const SearchOutcome out = greedy_chain(g, "Video1", "Video3");
    REQUIRE(out.found());
    CHECK(out.chain->edges == std::vector<std::string>{"Video1toVideo2", "Video2toVideo3"});
    CHECK(*out.availability == vec({false, true, false, false, false}));
    CHECK(out.loss == 4);
    CHECK(out.source == "Video1");
}

TEST_CASE("greedy chain special cases") {
    const AdapterGraph g = fixture();

    const SearchOutcome same = greedy_chain(g, "Video3", "Video3");
    REQUIRE(same.found());
    CHECK(same.chain->edges.empty());
    CHECK(*same.availability == full_availability(5));
    CHECK(same.loss == 1);

    const AdapterGraph isolated = parse_graph(R"({
        "interfaces": [{"name": "A", "methods": ["x"]}, {"name": "B", "methods": ["y"]}],
        "adapters": []})");
    CHECK_FALSE(greedy_chain(isolated, "A", "B").found());

    CHECK_THROWS_AS(greedy_chain(g, "Video1", "Nope"), InvalidInput);
    CHECK_THROWS_AS(greedy_chain(g, "Nope", "Video3"), InvalidInput);
}

TEST_CASE("weighted search on the fixture") {
    const AdapterGraph g = fixture();
    const InterfaceSpec* video3 = g.find_interface("Video3");
    const WeightAssignment uniform = WeightAssignment::uniform(*video3);

    const SearchOutcome single = greedy_chain_weighted(g, {"Video1"}, "Video3", uniform);
    REQUIRE(single.found());
    CHECK(single.chain->edges == greedy_chain(g, "Video1", "Video3").chain->edges);
    CHECK(single.weight == 1);

    const SearchOutcome multi = greedy_chain_weighted(g, {"Video1", "Audio"}, "Video3", uniform);
    REQUIRE(multi.found());
    CHECK(multi.source == "Audio");
    CHECK(multi.chain->edges == std::vector<std::string>{"AudiotoVideo3"});
    CHECK(multi.weight == 2);

    const SearchOutcome self = greedy_chain_weighted(g, {"Video3"}, "Video3", uniform);
    REQUIRE(self.found());
    CHECK(self.chain->edges.empty());
    CHECK(self.source == "Video3");
    CHECK(self.weight == 4);

    CHECK_THROWS_AS(greedy_chain_weighted(g, {}, "Video3", uniform), InvalidInput);
    WeightAssignment negative = uniform;
    negative.weights[1] = -1;
    CHECK_THROWS_AS(greedy_chain_weighted(g, {"Video1"}, "Video3", negative), InvalidInput);
    CHECK_THROWS_AS(WeightAssignment::from_map(*video3, {{"play", -2}}), InvalidInput);
    CHECK_THROWS_AS(WeightAssignment::from_map(*video3, {{"nosuch", 1}}), InvalidInput);
}

TEST_CASE("weighted search prefers heavy methods") {
    const AdapterGraph g = fixture();
    const InterfaceSpec* video3 = g.find_interface("Video3");
    const WeightAssignment play_heavy = WeightAssignment::from_map(*video3, {{"play", 100}});
    const SearchOutcome out = greedy_chain_weighted(g, {"Video1", "Audio"}, "Video3", play_heavy);
    REQUIRE(out.found());
    CHECK(out.source == "Video1");
    CHECK(out.chain->edges == std::vector<std::string>{"Video1toVideo2", "Video2toVideo3"});
    CHECK(out.weight == 100);
}

TEST_CASE("oracle on the fixture and small graphs") {
    const AdapterGraph g = fixture();
    const SearchOutcome oracle = oracle_best_chain(g, "Video1", "Video3");
    const SearchOutcome greedy = greedy_chain(g, "Video1", "Video3");
    REQUIRE(oracle.found());
    CHECK(oracle.loss == greedy.loss);
    CHECK(oracle.chain->edges == greedy.chain->edges);

    const AdapterGraph single = parse_graph(R"({
        "interfaces": [{"name": "A", "methods": ["x"]}, {"name": "B", "methods": ["y"]}],
        "adapters": [{"name": "only", "source": "A", "target": "B",
                      "provides": {"y": {"requires": ["x"]}}}]})");
    const SearchOutcome out = oracle_best_chain(single, "A", "B");
    REQUIRE(out.found());
    CHECK(out.chain->edges == std::vector<std::string>{"only"});

    CHECK_FALSE(oracle_best_chain(single, "B", "A").found());
}

TEST_CASE("oracle refuses oversized graphs") {
    GenParams params;
    params.interfaces = 13;
    params.adapters = 0;
    const AdapterGraph big = gen_random_graph(params);
    CHECK_THROWS_AS(oracle_best_chain(big, "I1", "I2"), GuardExceeded);
    CHECK_THROWS_AS(enumerate_chains(big, "I1", "I2"), GuardExceeded);
}

TEST_CASE("decide_chain thresholds") {
    const AdapterGraph g = fixture();
    CHECK(decide_chain(g, "Video1", "Video3", 1));
    CHECK_FALSE(decide_chain(g, "Video1", "Video3", 2));
    CHECK(decide_chain(g, "Video3", "Video3", 0));
    CHECK(decide_chain(g, "Video3", "Video3", -5));
    const AdapterGraph isolated = parse_graph(R"({
        "interfaces": [{"name": "A", "methods": ["x"]}, {"name": "B", "methods": ["y"]}],
        "adapters": []})");
    CHECK_FALSE(decide_chain(isolated, "A", "B", 0));
}

TEST_CASE("deterministic tie-break prefers the lexicographically smaller name") {
    // Two parallel adapters with identical matrices tie on loss and length.
    const AdapterGraph g = parse_graph(R"({
        "interfaces": [{"name": "X", "methods": ["a"]}, {"name": "Y", "methods": ["b"]}],
        "adapters": [
            {"name": "zeta", "source": "X", "target": "Y", "provides": {"b": {"requires": ["a"]}}},
            {"name": "alpha", "source": "X", "target": "Y", "provides": {"b": {"requires": ["a"]}}}
        ]})");
    for (int run = 0; run < 3; ++run) {
        const SearchOutcome out = greedy_chain(g, "X", "Y");
        REQUIRE(out.found());
        CHECK(out.chain->edges == std::vector<std::string>{"alpha"});
        const SearchOutcome oracle = oracle_best_chain(g, "X", "Y");
        CHECK(oracle.chain->edges == std::vector<std::string>{"alpha"});
    }
}

TEST_CASE("ties prefer fewer edges") {
    // Both the direct edge and the two-hop route lose nothing but the dummy.
    const AdapterGraph g = parse_graph(R"({
        "interfaces": [{"name": "A", "methods": ["x"]}, {"name": "B", "methods": ["x"]},
                       {"name": "C", "methods": ["x"]}],
        "adapters": [
            {"name": "ab", "source": "A", "target": "B", "provides": {"x": {"requires": ["x"]}}},
            {"name": "bc", "source": "B", "target": "C", "provides": {"x": {"requires": ["x"]}}},
            {"name": "ac", "source": "A", "target": "C", "provides": {"x": {"requires": ["x"]}}}
        ]})");
    const SearchOutcome out = greedy_chain(g, "A", "C");
    REQUIRE(out.found());
    CHECK(out.chain->edges == std::vector<std::string>{"ac"});
}

TEST_CASE("frontier extensions never decrease loss") {
    SearchTrace trace;
    greedy_chain(fixture(), "Video1", "Video3", &trace);
    CHECK(!trace.extensions.empty());
    for (auto [parent, child] : trace.extensions)
        CHECK(child >= parent);

    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const AdapterGraph g = random_graph(seed);
        SearchTrace t;
        greedy_chain(g, g.interfaces().front().name, g.interfaces().back().name, &t);
        for (auto [parent, child] : t.extensions)
            CHECK(child >= parent);
    }
}

TEST_CASE("greedy matches the oracle on random graphs") {
    int chains_checked = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const AdapterGraph g = random_graph(seed);
        for (const auto& s : g.interfaces())
            for (const auto& t : g.interfaces()) {
                const SearchOutcome fast = greedy_chain(g, s.name, t.name);
                const SearchOutcome slow = oracle_best_chain(g, s.name, t.name);
                REQUIRE(fast.found() == slow.found());
                if (fast.found()) {
                    REQUIRE(fast.loss == slow.loss);
                    ++chains_checked;
                }
            }
    }
    CHECK(chains_checked > 100);
}

TEST_CASE("uniform weights rank chains exactly like loss") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const AdapterGraph g = random_graph(seed);
        for (const auto& t : g.interfaces()) {
            const WeightAssignment uniform = WeightAssignment::uniform(t);
            for (const auto& s : g.interfaces()) {
                const SearchOutcome by_loss = greedy_chain(g, s.name, t.name);
                const SearchOutcome by_weight =
                    greedy_chain_weighted(g, {s.name}, t.name, uniform);
                REQUIRE(by_loss.found() == by_weight.found());
                if (by_loss.found())
                    CHECK(loss(*by_weight.chain) == by_loss.loss);
            }
        }
    }
}

TEST_CASE("returned composed matrices are association-independent") {
    auto check_chain = [](const AdapterGraph& g, const Chain& c) {
        if (c.edges.empty())
            return;
        MethodDependencyMatrix left = dependency_matrix_of(g, c.edges.front());
        for (std::size_t k = 1; k < c.edges.size(); ++k)
            left = compose(dependency_matrix_of(g, c.edges[k]), left);
        MethodDependencyMatrix right = dependency_matrix_of(g, c.edges.back());
        for (std::size_t k = c.edges.size() - 1; k-- > 0;)
            right = compose(right, dependency_matrix_of(g, c.edges[k]));
        CHECK(left == c.composed);
        CHECK(right == c.composed);
    };
    const AdapterGraph g = fixture();
    check_chain(g, *greedy_chain(g, "Video1", "Video3").chain);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const AdapterGraph r = random_graph(seed);
        for (const auto& s : r.interfaces())
            for (const auto& t : r.interfaces()) {
                const SearchOutcome out = greedy_chain(r, s.name, t.name);
                if (out.found())
                    check_chain(r, *out.chain);
            }
    }
}

TEST_CASE("searches are deterministic, including tie cases") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const AdapterGraph g = random_graph(seed);
        const auto& s = g.interfaces().front().name;
        const auto& t = g.interfaces().back().name;
        const SearchOutcome a = greedy_chain(g, s, t);
        const SearchOutcome b = greedy_chain(g, s, t);
        CHECK(a.found() == b.found());
        if (a.found()) {
            CHECK(a.chain->edges == b.chain->edges);
            CHECK(*a.availability == *b.availability);
            CHECK(a.loss == b.loss);
        }
    }
}
