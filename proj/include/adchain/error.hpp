// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace adchain {

/// Rejected input: malformed files, dimension mismatches, broken invariants.
class InvalidInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An operation refused an input that exceeds its documented size guard.
class GuardExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace adchain
