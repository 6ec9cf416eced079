#pragma once

#include "sfverify/chart.hpp"

namespace sfv::chart {

/// Static well-formedness check. The result is empty iff the chart satisfies
/// every structural invariant; otherwise each entry names the violated rule
/// and the offending identifier, e.g. "missing default transition: Run".
/// The order of diagnostics depends only on the chart, never on addresses.
Diagnostics validate_chart(const ChartDef& c);

/// True if any action of the chart broadcasts a local event.
bool has_broadcast(const ChartDef& c);

}  // namespace sfv::chart
