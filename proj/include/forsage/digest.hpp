#pragma once

#include "forsage/contract.hpp"

#include <string>

namespace forsage {

/// Canonical text serialization of the full state. Users appear in
/// registration order; every slot field is written, inactive slots
/// included, so any field difference changes the output.
std::string canonical_serialization(const ContractState& state);

/// SHA-256 of canonical_serialization(), as 64 lowercase hex chars.
std::string state_digest(const ContractState& state);

/// SHA-256 of arbitrary bytes, lowercase hex.
std::string sha256_hex(std::string_view bytes);

} // namespace forsage
