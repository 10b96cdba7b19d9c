// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "adchain/algebra.hpp"

namespace adchain {

/// A named interface: an ordered list of distinct real method names. The
/// dummy method occupies slot 0 implicitly and never appears in listings.
struct InterfaceSpec {
    std::string name;
    std::vector<std::string> methods;

    std::uint32_t dim() const { return static_cast<std::uint32_t>(methods.size()) + 1; }

    bool operator==(const InterfaceSpec&) const = default;
};

/// A named adapter edge from a source interface to a target interface,
/// carrying the dependency matrix (rows = target dim, cols = source dim).
struct AdapterSpec {
    std::string name;
    std::string source;
    std::string target;
    MethodDependencyMatrix matrix;

    bool operator==(const AdapterSpec&) const = default;
};

/// Directed multigraph of interfaces and adapters. Parallel edges and
/// self-loops are allowed; the graph may be disconnected. Immutable after
/// construction; interfaces and adapters are kept sorted by name.
class AdapterGraph {
public:
    AdapterGraph() = default;

    /// Validates names, endpoint resolution, and matrix dimensions.
    static AdapterGraph create(std::vector<InterfaceSpec> interfaces,
                               std::vector<AdapterSpec> adapters);

    const std::vector<InterfaceSpec>& interfaces() const { return interfaces_; }
    const std::vector<AdapterSpec>& adapters() const { return adapters_; }

    const InterfaceSpec* find_interface(std::string_view name) const;
    const AdapterSpec* find_adapter(std::string_view name) const;

    /// Index into interfaces(); throws InvalidInput for unknown names.
    std::uint32_t interface_index(std::string_view name) const;

    bool operator==(const AdapterGraph&) const = default;

private:
    std::vector<InterfaceSpec> interfaces_;
    std::vector<AdapterSpec> adapters_;
};

/// Parses the JSON graph format. Target methods omitted from an adapter's
/// "provides" become never-implementable rows; present methods with an empty
/// "requires" list become always-implementable rows. Errors carry a
/// path-to-offender diagnostic.
AdapterGraph parse_graph(std::string_view text);

/// Canonical serialization: object keys sorted, interfaces and adapters
/// sorted by name, two-space indent, trailing newline. parse ∘ serialize is
/// the identity on the model.
std::string serialize_graph(const AdapterGraph& g);

/// The matrix carried by the named adapter.
const MethodDependencyMatrix& dependency_matrix_of(const AdapterGraph& g,
                                                   std::string_view adapter_name);

struct GenParams {
    std::uint32_t interfaces = 1;
    std::uint32_t methods_min = 0;
    std::uint32_t methods_max = 0;
    std::uint32_t adapters = 0;
    double dependency_density = 0.0;
    double never_implementable_rate = 0.0;
    std::uint64_t seed = 0;
};

/// Seeded random instance generator; bitwise deterministic for fixed
/// parameters. Adapter endpoints are drawn uniformly over ordered interface
/// pairs (self-loops included). Each real target row is made never
/// implementable with probability never_implementable_rate, otherwise each
/// source method is required independently with probability
/// dependency_density (an all-false outcome is kept as always implementable).
AdapterGraph gen_random_graph(const GenParams& params);

} // namespace adchain
