#pragma once

#include "forsage/contract.hpp"

#include <optional>
#include <string>

namespace forsage {

/// GraphViz rendering of the slot-referrer tree at one (matrix, level).
///
/// Without a focus every user with that slot open is drawn, with an edge
/// from each slot referrer to the slot holder. With a focus the graph is
/// restricted to the focus user's subtree and gains a row with the focus
/// user's twelve slots in that matrix: opened slots as boxes, unopened ones
/// as numbered dots. Node labels carry `reinvest=N`, the current referral
/// counts and a `blocked` marker.
///
/// Throws ContractError(UnregisteredUser) for an unknown focus.
std::string export_dot(const ContractState& state, const std::optional<Address>& focus, MatrixKind matrix, Level level);

} // namespace forsage
