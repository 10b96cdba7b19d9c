// SPDX-License-Identifier: Apache-2.0
#include "adchain/graph.hpp"

#include <algorithm>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace adchain {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw InvalidInput(path + ": " + message);
}

const json& expect(const json& node, const std::string& path, json::value_t type,
                   const char* type_name) {
    if (node.type() != type)
        fail(path, std::string("expected ") + type_name);
    return node;
}

std::string expect_name(const json& node, const std::string& path) {
    expect(node, path, json::value_t::string, "a string");
    auto s = node.get<std::string>();
    if (s.empty())
        fail(path, "name must be non-empty");
    return s;
}

void reject_unknown_keys(const json& obj, const std::string& path,
                         std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* k) { return key == k; }) == allowed.end())
            fail(path + "/" + key, "unknown key");
    }
}

const json& require_key(const json& obj, const std::string& path, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end())
        fail(path, std::string("missing key \"") + key + "\"");
    return *it;
}

} // namespace

AdapterGraph AdapterGraph::create(std::vector<InterfaceSpec> interfaces,
                                  std::vector<AdapterSpec> adapters) {
    std::unordered_map<std::string, const InterfaceSpec*> by_name;
    for (const auto& itf : interfaces) {
        if (itf.name.empty())
            throw InvalidInput("interface name must be non-empty");
        if (!by_name.emplace(itf.name, &itf).second)
            throw InvalidInput("duplicate interface name \"" + itf.name + "\"");
        std::unordered_set<std::string> methods;
        for (const auto& m : itf.methods) {
            if (m.empty())
                throw InvalidInput("interface \"" + itf.name + "\": method name must be non-empty");
            if (!methods.insert(m).second)
                throw InvalidInput("interface \"" + itf.name + "\": duplicate method \"" + m + "\"");
        }
        if (itf.dim() > kMaxDim)
            throw InvalidInput("interface \"" + itf.name + "\" exceeds the supported method ceiling");
    }
    std::unordered_set<std::string> adapter_names;
    for (const auto& ad : adapters) {
        if (ad.name.empty())
            throw InvalidInput("adapter name must be non-empty");
        if (!adapter_names.insert(ad.name).second)
            throw InvalidInput("duplicate adapter name \"" + ad.name + "\"");
        auto src = by_name.find(ad.source);
        if (src == by_name.end())
            throw InvalidInput("adapter \"" + ad.name + "\": unknown source interface \"" +
                               ad.source + "\"");
        auto dst = by_name.find(ad.target);
        if (dst == by_name.end())
            throw InvalidInput("adapter \"" + ad.name + "\": unknown target interface \"" +
                               ad.target + "\"");
        if (ad.matrix.rows() != dst->second->dim() || ad.matrix.cols() != src->second->dim())
            throw InvalidInput("adapter \"" + ad.name + "\": matrix is " +
                               std::to_string(ad.matrix.rows()) + "x" +
                               std::to_string(ad.matrix.cols()) + " but endpoints need " +
                               std::to_string(dst->second->dim()) + "x" +
                               std::to_string(src->second->dim()));
    }
    AdapterGraph g;
    g.interfaces_ = std::move(interfaces);
    g.adapters_ = std::move(adapters);
    std::sort(g.interfaces_.begin(), g.interfaces_.end(),
              [](const auto& a, const auto& b) { return a.name < b.name; });
    std::sort(g.adapters_.begin(), g.adapters_.end(),
              [](const auto& a, const auto& b) { return a.name < b.name; });
    return g;
}

const InterfaceSpec* AdapterGraph::find_interface(std::string_view name) const {
    auto it = std::lower_bound(interfaces_.begin(), interfaces_.end(), name,
                               [](const InterfaceSpec& a, std::string_view b) { return a.name < b; });
    if (it == interfaces_.end() || it->name != name)
        return nullptr;
    return &*it;
}

const AdapterSpec* AdapterGraph::find_adapter(std::string_view name) const {
    auto it = std::lower_bound(adapters_.begin(), adapters_.end(), name,
                               [](const AdapterSpec& a, std::string_view b) { return a.name < b; });
    if (it == adapters_.end() || it->name != name)
        return nullptr;
    return &*it;
}

std::uint32_t AdapterGraph::interface_index(std::string_view name) const {
    const InterfaceSpec* itf = find_interface(name);
    if (!itf)
        throw InvalidInput("unknown interface \"" + std::string(name) + "\"");
    return static_cast<std::uint32_t>(itf - interfaces_.data());
}

AdapterGraph parse_graph(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidInput(std::string("malformed JSON: ") + e.what());
    }
    expect(doc, "/", json::value_t::object, "an object");
    reject_unknown_keys(doc, "", {"interfaces", "adapters"});

    std::vector<InterfaceSpec> interfaces;
    std::unordered_map<std::string, std::unordered_map<std::string, std::uint32_t>> method_slots;

    const json& itf_array = require_key(doc, "/", "interfaces");
    expect(itf_array, "/interfaces", json::value_t::array, "an array");
    for (std::size_t n = 0; n < itf_array.size(); ++n) {
        const std::string path = "/interfaces/" + std::to_string(n);
        const json& node = expect(itf_array[n], path, json::value_t::object, "an object");
        reject_unknown_keys(node, path, {"name", "methods"});
        InterfaceSpec itf;
        itf.name = expect_name(require_key(node, path, "name"), path + "/name");
        if (method_slots.count(itf.name))
            fail(path + "/name", "duplicate interface name \"" + itf.name + "\"");
        const json& methods = require_key(node, path, "methods");
        expect(methods, path + "/methods", json::value_t::array, "an array");
        auto& slots = method_slots[itf.name];
        for (std::size_t k = 0; k < methods.size(); ++k) {
            const std::string mpath = path + "/methods/" + std::to_string(k);
            std::string m = expect_name(methods[k], mpath);
            if (!slots.emplace(m, static_cast<std::uint32_t>(k) + 1).second)
                fail(mpath, "duplicate method \"" + m + "\"");
            itf.methods.push_back(std::move(m));
        }
        interfaces.push_back(std::move(itf));
    }

    std::vector<AdapterSpec> adapters;
    std::unordered_set<std::string> adapter_names;

    const json& ad_array = require_key(doc, "/", "adapters");
    expect(ad_array, "/adapters", json::value_t::array, "an array");
    for (std::size_t n = 0; n < ad_array.size(); ++n) {
        const std::string path = "/adapters/" + std::to_string(n);
        const json& node = expect(ad_array[n], path, json::value_t::object, "an object");
        reject_unknown_keys(node, path, {"name", "source", "target", "provides"});
        AdapterSpec ad;
        ad.name = expect_name(require_key(node, path, "name"), path + "/name");
        if (!adapter_names.insert(ad.name).second)
            fail(path + "/name", "duplicate adapter name \"" + ad.name + "\"");
        ad.source = expect_name(require_key(node, path, "source"), path + "/source");
        ad.target = expect_name(require_key(node, path, "target"), path + "/target");
        auto src = method_slots.find(ad.source);
        if (src == method_slots.end())
            fail(path + "/source", "unknown interface \"" + ad.source + "\"");
        auto dst = method_slots.find(ad.target);
        if (dst == method_slots.end())
            fail(path + "/target", "unknown interface \"" + ad.target + "\"");

        const std::uint32_t rows = static_cast<std::uint32_t>(dst->second.size()) + 1;
        const std::uint32_t cols = static_cast<std::uint32_t>(src->second.size()) + 1;
        std::vector<std::vector<bool>> grid(rows, std::vector<bool>(cols, false));
        grid[0][0] = true;
        std::vector<bool> provided(rows, false);

        const json& provides = require_key(node, path, "provides");
        expect(provides, path + "/provides", json::value_t::object, "an object");
        for (const auto& [method, entry] : provides.items()) {
            const std::string ppath = path + "/provides/" + method;
            auto slot = dst->second.find(method);
            if (slot == dst->second.end())
                fail(ppath, "method \"" + method + "\" is not in target interface \"" +
                               ad.target + "\"");
            expect(entry, ppath, json::value_t::object, "an object");
            reject_unknown_keys(entry, ppath, {"requires"});
            const json& requires_list = require_key(entry, ppath, "requires");
            expect(requires_list, ppath + "/requires", json::value_t::array, "an array");
            provided[slot->second] = true;
            for (std::size_t k = 0; k < requires_list.size(); ++k) {
                const std::string rpath = ppath + "/requires/" + std::to_string(k);
                std::string req = expect_name(requires_list[k], rpath);
                auto col = src->second.find(req);
                if (col == src->second.end())
                    fail(rpath, "method \"" + req + "\" is not in source interface \"" +
                                    ad.source + "\"");
                if (grid[slot->second][col->second])
                    fail(rpath, "duplicate requirement \"" + req + "\"");
                grid[slot->second][col->second] = true;
            }
        }
        // Unmentioned target methods are never implementable.
        for (std::uint32_t j = 1; j < rows; ++j)
            if (!provided[j])
                grid[j][0] = true;
        ad.matrix = MethodDependencyMatrix::from_rows(grid);
        adapters.push_back(std::move(ad));
    }

    return AdapterGraph::create(std::move(interfaces), std::move(adapters));
}

std::string serialize_graph(const AdapterGraph& g) {
    json doc;
    doc["interfaces"] = json::array();
    for (const auto& itf : g.interfaces()) {
        json node;
        node["name"] = itf.name;
        node["methods"] = itf.methods;
        doc["interfaces"].push_back(std::move(node));
    }
    doc["adapters"] = json::array();
    for (const auto& ad : g.adapters()) {
        const InterfaceSpec* src = g.find_interface(ad.source);
        const InterfaceSpec* dst = g.find_interface(ad.target);
        json provides = json::object();
        for (std::uint32_t j = 1; j < ad.matrix.rows(); ++j) {
            if (ad.matrix.test(j, 0))
                continue; // never implementable: omitted
            json deps = json::array();
            for (std::uint32_t i = 1; i < ad.matrix.cols(); ++i)
                if (ad.matrix.test(j, i))
                    deps.push_back(src->methods[i - 1]);
            provides[dst->methods[j - 1]] = json{{"requires", std::move(deps)}};
        }
        json node;
        node["name"] = ad.name;
        node["source"] = ad.source;
        node["target"] = ad.target;
        node["provides"] = std::move(provides);
        doc["adapters"].push_back(std::move(node));
    }
    return doc.dump(2) + "\n";
}

const MethodDependencyMatrix& dependency_matrix_of(const AdapterGraph& g,
                                                   std::string_view adapter_name) {
    const AdapterSpec* ad = g.find_adapter(adapter_name);
    if (!ad)
        throw InvalidInput("unknown adapter \"" + std::string(adapter_name) + "\"");
    return ad->matrix;
}

namespace {

// mt19937_64 has a standardized output sequence; deriving bounded draws from
// it directly keeps generated graphs bitwise reproducible across platforms.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : eng_(seed) {}

    std::uint32_t below(std::uint32_t n) { return static_cast<std::uint32_t>(eng_() % n); }

    std::uint32_t between(std::uint32_t lo, std::uint32_t hi) {
        return lo + below(hi - lo + 1);
    }

    bool chance(double p) { return double(eng_() >> 11) * 0x1.0p-53 < p; }

private:
    std::mt19937_64 eng_;
};

} // namespace

AdapterGraph gen_random_graph(const GenParams& params) {
    if (params.interfaces == 0)
        throw InvalidInput("generator: need at least one interface");
    if (params.methods_min > params.methods_max)
        throw InvalidInput("generator: empty methods range");
    if (params.methods_max >= kMaxDim)
        throw InvalidInput("generator: methods_max exceeds the supported ceiling");
    if (!(params.dependency_density >= 0.0 && params.dependency_density <= 1.0))
        throw InvalidInput("generator: dependency_density must be in [0,1]");
    if (!(params.never_implementable_rate >= 0.0 && params.never_implementable_rate <= 1.0))
        throw InvalidInput("generator: never_implementable_rate must be in [0,1]");

    SeededRng rng(params.seed);
    std::vector<InterfaceSpec> interfaces(params.interfaces);
    for (std::uint32_t n = 0; n < params.interfaces; ++n) {
        interfaces[n].name = "I" + std::to_string(n + 1);
        const std::uint32_t count = rng.between(params.methods_min, params.methods_max);
        for (std::uint32_t m = 0; m < count; ++m)
            interfaces[n].methods.push_back("m" + std::to_string(m + 1));
    }

    std::vector<AdapterSpec> adapters(params.adapters);
    for (std::uint32_t n = 0; n < params.adapters; ++n) {
        AdapterSpec& ad = adapters[n];
        ad.name = "A" + std::to_string(n + 1);
        const InterfaceSpec& src = interfaces[rng.below(params.interfaces)];
        const InterfaceSpec& dst = interfaces[rng.below(params.interfaces)];
        ad.source = src.name;
        ad.target = dst.name;
        std::vector<std::vector<bool>> grid(dst.dim(), std::vector<bool>(src.dim(), false));
        grid[0][0] = true;
        for (std::uint32_t j = 1; j < dst.dim(); ++j) {
            if (rng.chance(params.never_implementable_rate)) {
                grid[j][0] = true;
            } else {
                for (std::uint32_t i = 1; i < src.dim(); ++i)
                    if (rng.chance(params.dependency_density))
                        grid[j][i] = true;
            }
        }
        ad.matrix = MethodDependencyMatrix::from_rows(grid);
    }

    return AdapterGraph::create(std::move(interfaces), std::move(adapters));
}

} // namespace adchain
