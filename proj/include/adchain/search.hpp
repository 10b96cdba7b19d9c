// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "adchain/graph.hpp"

namespace adchain {

/// Method weights are exact rationals: optimality tie and threshold arguments
/// (essential methods outweighing all others) do not survive floating error.
using Rational = boost::multiprecision::cpp_rational;

/// A consecutive-compatible adapter sequence from source to target, carrying
/// the composed matrix dep(edges.back()) ⊗ … ⊗ dep(edges.front()). An empty
/// edge list is the identity adaptation of target (source == target).
struct Chain {
    std::vector<std::string> edges;
    std::string source;
    std::string target;
    MethodDependencyMatrix composed;
};

/// Per-method weights over one interface's slots; slot 0 (dummy) is fixed 0.
struct WeightAssignment {
    std::string interface_name;
    std::vector<Rational> weights;

    static WeightAssignment uniform(const InterfaceSpec& itf, const Rational& w = 1);

    /// Missing methods default to weight 1; unknown names and negative
    /// weights are rejected.
    static WeightAssignment from_map(const InterfaceSpec& itf,
                                     const std::map<std::string, Rational>& by_method);

    Rational total() const;
};

struct SearchOutcome {
    std::optional<Chain> chain; // nullopt = no chain exists
    std::string source;         // chosen source interface when found
    std::optional<AvailabilityVector> availability; // at target when found
    std::uint32_t loss = 0;     // unavailable target slots incl. the dummy
    Rational weight = 0;        // filled by the weighted search

    bool found() const { return chain.has_value(); }
};

/// Records (parent loss, extension loss) for every frontier extension.
struct SearchTrace {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> extensions;
};

/// Number of unavailable target slots, dummy included, so the minimum is 1.
/// User-facing reports subtract the constant dummy offset.
std::uint32_t loss(const Chain& c);

/// Sum of weights over the methods the chain makes available.
Rational weight(const Chain& c, const WeightAssignment& w);

/// Best-first search over backward-extended acyclic chains ending at t,
/// keyed by loss; returns a minimum-loss node-simple chain from s to t, or
/// no-chain. Ties prefer fewer edges, then the lexicographically smaller
/// adapter-name sequence. s == t yields the empty identity adaptation.
SearchOutcome greedy_chain(const AdapterGraph& g, std::string_view s, std::string_view t,
                           SearchTrace* trace = nullptr);

/// Weighted multi-source variant: maximizes weight over node-simple chains
/// from any member of sources to t; same tie-break. If t is itself a source,
/// the empty identity adaptation wins.
SearchOutcome greedy_chain_weighted(const AdapterGraph& g, const std::vector<std::string>& sources,
                                    std::string_view t, const WeightAssignment& w);

/// Exhaustive enumeration guard: beyond this many interfaces the number of
/// node-simple chains can explode, so enumeration refuses to run.
inline constexpr std::size_t kOracleMaxInterfaces = 12;

/// Every node-simple chain from s to t, by depth-first traversal, in
/// deterministic (adapter-name) discovery order.
std::vector<Chain> enumerate_chains(const AdapterGraph& g, std::string_view s, std::string_view t);

/// Independent optimum: enumerates all node-simple chains and picks the
/// minimum-loss one under the same tie-break as greedy_chain.
SearchOutcome oracle_best_chain(const AdapterGraph& g, std::string_view s, std::string_view t);

/// True iff some node-simple chain from s to t makes at least n methods
/// available at t.
bool decide_chain(const AdapterGraph& g, std::string_view s, std::string_view t, std::int64_t n);

} // namespace adchain
