#pragma once

#include <string>
#include <vector>

#include "sfverify/chart_sem.hpp"

namespace sfv::sem {

/// Parses a trace document: one step per line, e.g. `events=[E,F] u=5 x=-1.5`.
/// Blank lines and `#` comments are ignored; an empty `events=[]` or a
/// missing `events=` field means no active event.
Parsed<std::vector<StepInput>> parse_trace(const std::string& text);

std::string format_trace(const std::vector<StepInput>& trace);

/// One JSON object (no trailing newline) with a fixed key order:
/// step, events, outputs, status, history, vars, trace.
std::string step_result_json(std::size_t index, const StepInput& in, const StepResult& r);

}  // namespace sfv::sem
