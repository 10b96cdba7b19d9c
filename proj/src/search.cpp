// SPDX-License-Identifier: Apache-2.0
#include "adchain/search.hpp"

#include <algorithm>
#include <queue>

namespace adchain {

WeightAssignment WeightAssignment::uniform(const InterfaceSpec& itf, const Rational& w) {
    if (w < 0)
        throw InvalidInput("weights must be non-negative");
    WeightAssignment wa;
    wa.interface_name = itf.name;
    wa.weights.assign(itf.dim(), w);
    wa.weights[0] = 0;
    return wa;
}

WeightAssignment WeightAssignment::from_map(const InterfaceSpec& itf,
                                            const std::map<std::string, Rational>& by_method) {
    WeightAssignment wa = uniform(itf, 1);
    for (const auto& [method, w] : by_method) {
        auto it = std::find(itf.methods.begin(), itf.methods.end(), method);
        if (it == itf.methods.end())
            throw InvalidInput("weight for method \"" + method + "\" which is not in interface \"" +
                               itf.name + "\"");
        if (w < 0)
            throw InvalidInput("negative weight for method \"" + method + "\"");
        wa.weights[(it - itf.methods.begin()) + 1] = w;
    }
    return wa;
}

Rational WeightAssignment::total() const {
    Rational sum = 0;
    for (const Rational& w : weights)
        sum += w;
    return sum;
}

std::uint32_t loss(const Chain& c) {
    const auto available = norm(apply(c.composed, full_availability(c.composed.cols())));
    return c.composed.rows() - available;
}

Rational weight(const Chain& c, const WeightAssignment& w) {
    if (w.interface_name != c.target)
        throw InvalidInput("weight assignment is for interface \"" + w.interface_name +
                           "\" but the chain targets \"" + c.target + "\"");
    if (w.weights.size() != c.composed.rows())
        throw InvalidInput("weight assignment has " + std::to_string(w.weights.size()) +
                           " slots but the chain's target has " + std::to_string(c.composed.rows()));
    const auto avail = apply(c.composed, full_availability(c.composed.cols()));
    Rational sum = 0;
    for (std::uint32_t i = 0; i < avail.dim(); ++i)
        if (avail.test(i))
            sum += w.weights[i];
    return sum;
}

namespace {

void check_weights(const WeightAssignment& w, const InterfaceSpec& itf) {
    if (w.interface_name != itf.name)
        throw InvalidInput("weight assignment is for interface \"" + w.interface_name +
                           "\" but the search targets \"" + itf.name + "\"");
    if (w.weights.size() != itf.dim())
        throw InvalidInput("weight assignment has the wrong number of slots for \"" + itf.name +
                           "\"");
    for (const Rational& x : w.weights)
        if (x < 0)
            throw InvalidInput("weights must be non-negative");
    if (w.weights[0] != 0)
        throw InvalidInput("the dummy slot's weight must be 0");
}

// One frontier entry: a chain ending at the search target, extended backward.
// Adapters are stored as indices into AdapterGraph::adapters(); that array is
// name-sorted, so index order is name order and lexicographic comparison of
// index sequences is the adapter-name tie-break.
struct FrontierNode {
    std::vector<std::uint32_t> edges;   // chain order, source first
    std::vector<std::uint32_t> visited; // interfaces on the path
    std::uint32_t first;                // source interface of edges.front(); t when empty
    MethodDependencyMatrix composed;
    AvailabilityVector avail;
    std::uint32_t loss;
    Rational weight;

    bool visits(std::uint32_t itf) const {
        return std::find(visited.begin(), visited.end(), itf) != visited.end();
    }
};

Chain to_chain(const AdapterGraph& g, const FrontierNode& node, std::string_view t) {
    Chain c;
    for (std::uint32_t e : node.edges)
        c.edges.push_back(g.adapters()[e].name);
    c.source = g.interfaces()[node.first].name;
    c.target = std::string(t);
    c.composed = node.composed;
    return c;
}

SearchOutcome identity_outcome(const InterfaceSpec& target, const Rational* total_weight) {
    SearchOutcome out;
    Chain c;
    c.source = c.target = target.name;
    c.composed = identity(target.dim());
    out.chain = std::move(c);
    out.source = target.name;
    out.availability = full_availability(target.dim());
    out.loss = 1;
    if (total_weight)
        out.weight = *total_weight;
    return out;
}

// Best-first expansion shared by the loss and weight searches. Better keys
// pop first; both key orders are strictly worsened by extension, so the first
// accepted pop is the global optimum over node-simple chains.
template <typename ScoreFn, typename BetterFn, typename AcceptFn>
SearchOutcome best_first(const AdapterGraph& g, std::uint32_t t_idx, ScoreFn&& score,
                         BetterFn&& better, AcceptFn&& accept_source, SearchTrace* trace) {
    const auto& adapters = g.adapters();
    std::vector<std::vector<std::uint32_t>> in_edges(g.interfaces().size());
    for (std::uint32_t e = 0; e < adapters.size(); ++e)
        in_edges[g.interface_index(adapters[e].target)].push_back(e);

    std::vector<FrontierNode> arena;
    auto below = [&](std::size_t x, std::size_t y) { return better(arena[y], arena[x]); };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(below)> frontier(below);

    const std::uint32_t t_dim = g.interfaces()[t_idx].dim();
    FrontierNode root{{}, {t_idx}, t_idx, identity(t_dim), full_availability(t_dim), 1, 0};
    score(root);
    arena.push_back(std::move(root));
    frontier.push(0);

    while (!frontier.empty()) {
        const std::size_t best = frontier.top();
        frontier.pop();
        if (!arena[best].edges.empty() && accept_source(arena[best].first)) {
            SearchOutcome out;
            out.chain = to_chain(g, arena[best], g.interfaces()[t_idx].name);
            out.source = g.interfaces()[arena[best].first].name;
            out.availability = arena[best].avail;
            out.loss = arena[best].loss;
            out.weight = arena[best].weight;
            return out;
        }
        // Copy: pushing extensions may reallocate the arena. Each chain is
        // generated exactly once (its tail is expanded exactly once), so no
        // dedup set is needed.
        const FrontierNode node = arena[best];
        for (std::uint32_t e : in_edges[node.first]) {
            const std::uint32_t src = g.interface_index(adapters[e].source);
            if (node.visits(src))
                continue;
            FrontierNode child;
            child.edges.reserve(node.edges.size() + 1);
            child.edges.push_back(e);
            child.edges.insert(child.edges.end(), node.edges.begin(), node.edges.end());
            child.visited = node.visited;
            child.visited.push_back(src);
            child.first = src;
            child.composed = compose(node.composed, adapters[e].matrix);
            child.avail = apply(child.composed, full_availability(child.composed.cols()));
            child.loss = t_dim - norm(child.avail);
            score(child);
            if (trace)
                trace->extensions.emplace_back(node.loss, child.loss);
            arena.push_back(std::move(child));
            frontier.push(arena.size() - 1);
        }
    }
    return SearchOutcome{};
}

bool lex_before(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

} // namespace

SearchOutcome greedy_chain(const AdapterGraph& g, std::string_view s, std::string_view t,
                           SearchTrace* trace) {
    const std::uint32_t s_idx = g.interface_index(s);
    const std::uint32_t t_idx = g.interface_index(t);
    if (s_idx == t_idx)
        return identity_outcome(g.interfaces()[t_idx], nullptr);

    auto out = best_first(
        g, t_idx, [](FrontierNode&) {},
        [](const FrontierNode& a, const FrontierNode& b) {
            if (a.loss != b.loss)
                return a.loss < b.loss;
            if (a.edges.size() != b.edges.size())
                return a.edges.size() < b.edges.size();
            return lex_before(a.edges, b.edges);
        },
        [&](std::uint32_t first) { return first == s_idx; }, trace);
    if (!out.found())
        out.source = std::string(s);
    return out;
}

SearchOutcome greedy_chain_weighted(const AdapterGraph& g, const std::vector<std::string>& sources,
                                    std::string_view t, const WeightAssignment& w) {
    if (sources.empty())
        throw InvalidInput("the source set must be non-empty");
    const std::uint32_t t_idx = g.interface_index(t);
    check_weights(w, g.interfaces()[t_idx]);

    std::vector<bool> is_source(g.interfaces().size(), false);
    for (const auto& s : sources)
        is_source[g.interface_index(s)] = true;
    if (is_source[t_idx]) {
        const Rational total = w.total();
        return identity_outcome(g.interfaces()[t_idx], &total);
    }

    auto weigh = [&](FrontierNode& node) {
        node.weight = 0;
        for (std::uint32_t i = 0; i < node.avail.dim(); ++i)
            if (node.avail.test(i))
                node.weight += w.weights[i];
    };
    return best_first(
        g, t_idx, weigh,
        [](const FrontierNode& a, const FrontierNode& b) {
            if (a.weight != b.weight)
                return a.weight > b.weight;
            if (a.edges.size() != b.edges.size())
                return a.edges.size() < b.edges.size();
            return lex_before(a.edges, b.edges);
        },
        [&](std::uint32_t first) { return is_source[first]; }, nullptr);
}

namespace {

void enumerate_from(const AdapterGraph& g, const std::vector<std::vector<std::uint32_t>>& out_edges,
                    std::uint32_t at, std::uint32_t t_idx, std::vector<std::uint32_t>& edges,
                    std::vector<bool>& visited, const MethodDependencyMatrix& composed,
                    std::vector<Chain>& result) {
    for (std::uint32_t e : out_edges[at]) {
        const std::uint32_t next = g.interface_index(g.adapters()[e].target);
        if (visited[next])
            continue;
        MethodDependencyMatrix extended = compose(g.adapters()[e].matrix, composed);
        edges.push_back(e);
        if (next == t_idx) {
            // A node-simple chain cannot revisit t, so stop extending here.
            Chain c;
            for (std::uint32_t idx : edges)
                c.edges.push_back(g.adapters()[idx].name);
            c.source = g.interfaces()[g.interface_index(g.adapters()[edges.front()].source)].name;
            c.target = g.interfaces()[t_idx].name;
            c.composed = extended;
            result.push_back(std::move(c));
        } else {
            visited[next] = true;
            enumerate_from(g, out_edges, next, t_idx, edges, visited, extended, result);
            visited[next] = false;
        }
        edges.pop_back();
    }
}

} // namespace

std::vector<Chain> enumerate_chains(const AdapterGraph& g, std::string_view s, std::string_view t) {
    if (g.interfaces().size() > kOracleMaxInterfaces)
        throw GuardExceeded("exhaustive chain enumeration refuses graphs with more than " +
                            std::to_string(kOracleMaxInterfaces) + " interfaces (got " +
                            std::to_string(g.interfaces().size()) + ")");
    const std::uint32_t s_idx = g.interface_index(s);
    const std::uint32_t t_idx = g.interface_index(t);

    std::vector<std::vector<std::uint32_t>> out_edges(g.interfaces().size());
    for (std::uint32_t e = 0; e < g.adapters().size(); ++e)
        out_edges[g.interface_index(g.adapters()[e].source)].push_back(e);

    std::vector<Chain> result;
    if (s_idx == t_idx) {
        Chain c;
        c.source = c.target = std::string(t);
        c.composed = identity(g.interfaces()[t_idx].dim());
        result.push_back(std::move(c));
        return result; // extensions would revisit t
    }
    std::vector<std::uint32_t> edges;
    std::vector<bool> visited(g.interfaces().size(), false);
    visited[s_idx] = true;
    enumerate_from(g, out_edges, s_idx, t_idx, edges, visited,
                   identity(g.interfaces()[s_idx].dim()), result);
    return result;
}

SearchOutcome oracle_best_chain(const AdapterGraph& g, std::string_view s, std::string_view t) {
    std::vector<Chain> all = enumerate_chains(g, s, t);
    const Chain* best = nullptr;
    std::uint32_t best_loss = 0;
    for (const Chain& c : all) {
        const std::uint32_t c_loss = loss(c);
        if (!best || c_loss < best_loss ||
            (c_loss == best_loss && (c.edges.size() < best->edges.size() ||
                                     (c.edges.size() == best->edges.size() && c.edges < best->edges)))) {
            best = &c;
            best_loss = c_loss;
        }
    }
    if (!best) {
        SearchOutcome out;
        out.source = std::string(s);
        return out;
    }
    SearchOutcome out;
    out.chain = *best;
    out.source = best->source;
    out.availability = apply(best->composed, full_availability(best->composed.cols()));
    out.loss = best_loss;
    return out;
}

bool decide_chain(const AdapterGraph& g, std::string_view s, std::string_view t, std::int64_t n) {
    SearchOutcome out = greedy_chain(g, s, t);
    return out.found() && static_cast<std::int64_t>(norm(*out.availability)) >= n;
}

} // namespace adchain
