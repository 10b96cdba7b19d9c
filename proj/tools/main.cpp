// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "adchain/graph.hpp"
#include "adchain/reduction.hpp"
#include "adchain/search.hpp"

namespace {

using json = nlohmann::json;
using namespace adchain;

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitNoChain = 3;
constexpr int kExitGuard = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InvalidInput("cannot read \"" + path + "\"");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw InvalidInput("cannot write \"" + tmp.string() + "\"");
        out << content;
        if (!out.flush())
            throw InvalidInput("failed writing \"" + tmp.string() + "\"");
    }
    fs::rename(tmp, target);
}

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i)
            out += ", ";
        out += parts[i];
    }
    return out;
}

std::string rational_str(const Rational& r) {
    std::ostringstream out;
    out << r;
    return out.str();
}

std::vector<std::string> available_methods(const InterfaceSpec& itf, const AvailabilityVector& p) {
    std::vector<std::string> names;
    for (std::uint32_t i = 1; i < p.dim(); ++i)
        if (p.test(i))
            names.push_back(itf.methods[i - 1]);
    return names;
}

std::vector<std::string> unavailable_methods(const InterfaceSpec& itf, const AvailabilityVector& p) {
    std::vector<std::string> names;
    for (std::uint32_t i = 1; i < p.dim(); ++i)
        if (!p.test(i))
            names.push_back(itf.methods[i - 1]);
    return names;
}

// Exact conversion of a JSON number; doubles carry their binary value.
Rational number_to_rational(const json& node, const std::string& key) {
    if (node.is_number_integer())
        return Rational(node.get<std::int64_t>());
    if (node.is_number_unsigned())
        return Rational(node.get<std::uint64_t>());
    if (node.is_number_float())
        return Rational(node.get<double>());
    throw InvalidInput("weight for \"" + key + "\" must be a number");
}

std::map<std::string, Rational> parse_weights_file(const std::string& path) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw InvalidInput("weights file: malformed JSON: " + std::string(e.what()));
    }
    if (!doc.is_object())
        throw InvalidInput("weights file must be a JSON object of method -> number");
    std::map<std::string, Rational> weights;
    for (const auto& [key, value] : doc.items())
        weights[key] = number_to_rational(value, key);
    return weights;
}

int report_found_chain(const AdapterGraph& g, const SearchOutcome& out, std::string_view target,
                       bool json_mode) {
    const InterfaceSpec* dst = g.find_interface(target);
    const auto avail = available_methods(*dst, *out.availability);
    const std::uint32_t lost = out.loss - 1; // dummy excluded from reports
    if (json_mode) {
        json doc;
        doc["chain"] = out.chain->edges;
        doc["available"] = avail;
        doc["lost"] = lost;
        std::cout << doc.dump() << "\n";
    } else {
        std::cout << "chain: " << (out.chain->edges.empty() ? "(identity)" : join(out.chain->edges))
                  << "\n";
        std::cout << "available: " << (avail.empty() ? "(none)" : join(avail)) << "\n";
        std::cout << "lost: " << lost << "\n";
    }
    return kExitOk;
}

int report_no_chain(std::string_view s, std::string_view t, bool json_mode) {
    if (json_mode) {
        std::cout << json{{"chain", nullptr}}.dump() << "\n";
    } else {
        std::cout << "no adapter chain from " << s << " to " << t << "\n";
    }
    return kExitNoChain;
}

int cmd_chain(const std::string& graph_path, const std::string& source, const std::string& target,
              bool json_mode, bool use_oracle) {
    const AdapterGraph g = parse_graph(read_file(graph_path));
    const SearchOutcome out =
        use_oracle ? oracle_best_chain(g, source, target) : greedy_chain(g, source, target);
    if (!out.found())
        return report_no_chain(source, target, json_mode);
    return report_found_chain(g, out, target, json_mode);
}

int cmd_discover(const std::string& graph_path, const std::vector<std::string>& sources,
                 const std::string& target, const std::string& weights_path, bool json_mode) {
    if (sources.empty())
        throw InvalidInput("the source set must be non-empty");
    const AdapterGraph g = parse_graph(read_file(graph_path));
    const InterfaceSpec* dst = g.find_interface(target);
    if (!dst)
        throw InvalidInput("unknown interface \"" + target + "\"");
    const WeightAssignment w =
        weights_path.empty() ? WeightAssignment::uniform(*dst)
                             : WeightAssignment::from_map(*dst, parse_weights_file(weights_path));
    const SearchOutcome out = greedy_chain_weighted(g, sources, target, w);
    if (!out.found())
        return report_no_chain(join(sources), target, json_mode);
    const auto avail = available_methods(*dst, *out.availability);
    if (json_mode) {
        json doc;
        doc["source"] = out.source;
        doc["chain"] = out.chain->edges;
        doc["available"] = avail;
        doc["weight"] = rational_str(out.weight);
        std::cout << doc.dump() << "\n";
    } else {
        std::cout << "source: " << out.source << "\n";
        std::cout << "chain: " << (out.chain->edges.empty() ? "(identity)" : join(out.chain->edges))
                  << "\n";
        std::cout << "available: " << (avail.empty() ? "(none)" : join(avail)) << "\n";
        std::cout << "weight: " << rational_str(out.weight) << "\n";
    }
    return kExitOk;
}

int cmd_apply(const std::string& graph_path, const std::vector<std::string>& chain, bool json_mode) {
    if (chain.empty())
        throw InvalidInput("the adapter list must be non-empty");
    const AdapterGraph g = parse_graph(read_file(graph_path));
    const AdapterSpec* prev = nullptr;
    MethodDependencyMatrix composed;
    for (const auto& name : chain) {
        const AdapterSpec* ad = g.find_adapter(name);
        if (!ad)
            throw InvalidInput("unknown adapter \"" + name + "\"");
        if (!prev) {
            composed = ad->matrix;
        } else {
            if (prev->target != ad->source)
                throw InvalidInput("broken link: \"" + prev->name + "\" targets \"" + prev->target +
                                   "\" but \"" + ad->name + "\" adapts from \"" + ad->source + "\"");
            composed = compose(ad->matrix, composed);
        }
        prev = ad;
    }
    const InterfaceSpec* dst = g.find_interface(prev->target);
    const AvailabilityVector avail = apply(composed, full_availability(composed.cols()));
    const auto yes = available_methods(*dst, avail);
    const auto no = unavailable_methods(*dst, avail);
    if (json_mode) {
        json doc;
        doc["target"] = dst->name;
        doc["available"] = yes;
        doc["unavailable"] = no;
        std::cout << doc.dump() << "\n";
    } else {
        std::cout << "target: " << dst->name << "\n";
        std::cout << "available: " << (yes.empty() ? "(none)" : join(yes)) << "\n";
        std::cout << "unavailable: " << (no.empty() ? "(none)" : join(no)) << "\n";
    }
    return kExitOk;
}

int cmd_reduce(const std::string& cnf_path, const std::string& out_path, bool json_mode) {
    const CnfFormula f = parse_dimacs(read_file(cnf_path));
    const ReductionOutput red = reduce_to_chain(f);
    const std::string sidecar_path = out_path + ".meta.json";
    write_file_atomic(out_path, serialize_graph(red.graph));
    json meta;
    meta["source"] = red.source;
    meta["target"] = red.target;
    meta["threshold"] = red.threshold;
    write_file_atomic(sidecar_path, meta.dump(2) + "\n");
    const auto nodes = red.graph.interfaces().size();
    const auto edges = red.graph.adapters().size();
    if (json_mode) {
        json doc;
        doc["nodes"] = nodes;
        doc["edges"] = edges;
        doc["graph"] = out_path;
        doc["sidecar"] = sidecar_path;
        std::cout << doc.dump() << "\n";
    } else {
        std::cout << nodes << " nodes, " << edges << " edges\n";
        std::cout << "wrote " << out_path << " and " << sidecar_path << "\n";
    }
    return kExitOk;
}

int cmd_solve_sat(const std::string& cnf_path, bool json_mode) {
    const CnfFormula f = parse_dimacs(read_file(cnf_path));
    const SatResult r = solve_sat_via_chain(f);
    if (json_mode) {
        json doc;
        doc["satisfiable"] = r.satisfiable;
        doc["assignment"] = r.assignment ? json(*r.assignment) : json(nullptr);
        std::cout << doc.dump() << "\n";
    } else if (r.satisfiable) {
        std::cout << "SAT\n";
        std::string parts;
        for (std::size_t k = 0; k < r.assignment->size(); ++k) {
            if (k)
                parts += " ";
            parts += "v" + std::to_string(k + 1) + "=" + ((*r.assignment)[k] ? "true" : "false");
        }
        std::cout << parts << "\n";
    } else {
        std::cout << "UNSAT\n";
    }
    return r.satisfiable ? kExitOk : kExitNoChain;
}

std::pair<std::uint32_t, std::uint32_t> parse_methods_range(const std::string& text) {
    const auto colon = text.find(':');
    try {
        if (colon == std::string::npos) {
            const auto n = static_cast<std::uint32_t>(std::stoul(text));
            return {n, n};
        }
        return {static_cast<std::uint32_t>(std::stoul(text.substr(0, colon))),
                static_cast<std::uint32_t>(std::stoul(text.substr(colon + 1)))};
    } catch (const std::exception&) {
        throw InvalidInput("--methods expects N or MIN:MAX, got \"" + text + "\"");
    }
}

int cmd_generate(std::uint32_t interfaces, const std::string& methods, std::uint32_t adapters,
                 double density, double never_rate, std::uint64_t seed, const std::string& out_path) {
    GenParams params;
    params.interfaces = interfaces;
    std::tie(params.methods_min, params.methods_max) = parse_methods_range(methods);
    params.adapters = adapters;
    params.dependency_density = density;
    params.never_implementable_rate = never_rate;
    params.seed = seed;
    const AdapterGraph g = gen_random_graph(params);
    write_file_atomic(out_path, serialize_graph(g));
    std::cout << "wrote " << out_path << "\n";
    return kExitOk;
}

int cmd_validate(const std::string& graph_path, bool json_mode) {
    parse_graph(read_file(graph_path));
    if (json_mode)
        std::cout << json{{"ok", true}}.dump() << "\n";
    else
        std::cout << "OK\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lossy interface adapter chain analysis"};
    app.require_subcommand(1);

    std::string graph_path, cnf_path, out_path, source, target, weights_path, methods = "0";
    std::vector<std::string> sources, chain_names;
    bool json_mode = false;
    std::uint32_t n_interfaces = 1, n_adapters = 0;
    double density = 0.0, never_rate = 0.0;
    std::uint64_t seed = 0;
    std::int64_t result = kExitOk;

    auto* chain = app.add_subcommand("chain", "find a minimum-loss adapter chain");
    chain->add_option("graph", graph_path)->required();
    chain->add_option("--source", source)->required();
    chain->add_option("--target", target)->required();
    chain->add_flag("--json", json_mode);
    chain->callback([&] { result = cmd_chain(graph_path, source, target, json_mode, false); });

    auto* oracle = app.add_subcommand("oracle", "exhaustive minimum-loss chain (small graphs)");
    oracle->add_option("graph", graph_path)->required();
    oracle->add_option("--source", source)->required();
    oracle->add_option("--target", target)->required();
    oracle->add_flag("--json", json_mode);
    oracle->callback([&] { result = cmd_chain(graph_path, source, target, json_mode, true); });

    auto* discover = app.add_subcommand("discover", "pick the best source by weighted adaptation");
    discover->add_option("graph", graph_path)->required();
    discover->add_option("--sources", sources)->required()->delimiter(',');
    discover->add_option("--target", target)->required();
    discover->add_option("--weights", weights_path);
    discover->add_flag("--json", json_mode);
    discover->callback(
        [&] { result = cmd_discover(graph_path, sources, target, weights_path, json_mode); });

    auto* apply = app.add_subcommand("apply", "evaluate a specific adapter sequence");
    apply->add_option("graph", graph_path)->required();
    apply->add_option("--chain", chain_names)->required()->delimiter(',');
    apply->add_flag("--json", json_mode);
    apply->callback([&] { result = cmd_apply(graph_path, chain_names, json_mode); });

    auto* reduce = app.add_subcommand("reduce", "encode a 3-CNF formula as an adapter graph");
    reduce->add_option("cnf", cnf_path)->required();
    reduce->add_option("-o,--output", out_path)->required();
    reduce->add_flag("--json", json_mode);
    reduce->callback([&] { result = cmd_reduce(cnf_path, out_path, json_mode); });

    auto* solve = app.add_subcommand("solve-sat", "decide satisfiability via the adapter encoding");
    solve->add_option("cnf", cnf_path)->required();
    solve->add_flag("--json", json_mode);
    solve->callback([&] { result = cmd_solve_sat(cnf_path, json_mode); });

    auto* generate = app.add_subcommand("generate", "write a seeded random adapter graph");
    generate->add_option("--interfaces", n_interfaces)->required();
    generate->add_option("--methods", methods, "method count per interface: N or MIN:MAX")
        ->required();
    generate->add_option("--adapters", n_adapters)->required();
    generate->add_option("--density", density);
    generate->add_option("--never-rate", never_rate);
    generate->add_option("--seed", seed);
    generate->add_option("-o,--output", out_path)->required();
    generate->callback([&] {
        result = cmd_generate(n_interfaces, methods, n_adapters, density, never_rate, seed, out_path);
    });

    auto* validate = app.add_subcommand("validate", "check a graph file against all invariants");
    validate->add_option("graph", graph_path)->required();
    validate->add_flag("--json", json_mode);
    validate->callback([&] { result = cmd_validate(graph_path, json_mode); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadInput;
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const GuardExceeded& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kExitGuard;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return static_cast<int>(result);
}
