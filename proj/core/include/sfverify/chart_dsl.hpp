#pragma once

#include <string>

#include "sfverify/chart.hpp"

namespace sfv::chart {

/// Parses a `.sfc` chart document.
///
/// Syntax errors stop at the first offending token. Name-resolution errors
/// (duplicate identifiers, unknown states, events or variables) and
/// unsupported features such as binding actions are all collected before
/// failing. See docs/chart-dsl.md for the grammar.
Parsed<ChartDef> parse_chart(const std::string& text);

/// Canonical rendering: per scope, states in child order, then junctions,
/// then transitions, each in declaration order.
std::string print_chart(const ChartDef& c);

/// Structural equality ignoring declaration-order bookkeeping.
bool same_chart(const ChartDef& a, const ChartDef& b);

}  // namespace sfv::chart
