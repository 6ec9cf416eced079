#include "sfverify/trace_io.hpp"

#include <cerrno>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

namespace sfv::sem {

namespace {

bool parse_number(const std::string& text, Value& out) {
  if (text.empty()) return false;
  char* end = nullptr;
  errno = 0;
  const bool looks_real = text.find_first_of(".eE") != std::string::npos;
  if (!looks_real) {
    const long long v = std::strtoll(text.c_str(), &end, 10);
    if (*end != '\0' || errno == ERANGE) return false;
    out = Value::integer(v);
    return true;
  }
  const double d = std::strtod(text.c_str(), &end);
  if (*end != '\0' || errno == ERANGE) return false;
  out = Value::real(d);
  return true;
}

nlohmann::ordered_json to_json(const Value& v) {
  if (v.is_float()) return v.as_double();
  return v.as_int();
}

}  // namespace

Parsed<std::vector<StepInput>> parse_trace(const std::string& text) {
  Parsed<std::vector<StepInput>> result;
  std::vector<StepInput> steps;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::string w;
    StepInput st;
    bool any = false;
    int col = 1;
    while (words >> w) {
      any = true;
      col = static_cast<int>(line.find(w)) + 1;
      const auto eq = w.find('=');
      if (eq == std::string::npos || eq == 0) {
        result.diagnostics.push_back({{lineno, col}, "expected name=value but found '" + w + "'"});
        continue;
      }
      const std::string key = w.substr(0, eq);
      const std::string val = w.substr(eq + 1);
      if (key == "events") {
        if (val.size() < 2 || val.front() != '[' || val.back() != ']') {
          result.diagnostics.push_back({{lineno, col}, "events must be written as [E1,E2]"});
          continue;
        }
        std::istringstream names(val.substr(1, val.size() - 2));
        std::string ev;
        while (std::getline(names, ev, ','))
          if (!ev.empty()) st.active_events.push_back(ev);
        continue;
      }
      Value v;
      if (!parse_number(val, v)) {
        result.diagnostics.push_back({{lineno, col}, "malformed value for '" + key + "': '" + val + "'"});
        continue;
      }
      if (st.inputs.count(key)) result.diagnostics.push_back({{lineno, col}, "input '" + key + "' given twice"});
      st.inputs[key] = v;
    }
    if (any) steps.push_back(std::move(st));
  }
  if (result.diagnostics.empty()) result.value = std::move(steps);
  return result;
}

std::string format_trace(const std::vector<StepInput>& trace) {
  std::ostringstream out;
  for (const auto& st : trace) {
    out << "events=[";
    for (std::size_t i = 0; i < st.active_events.size(); ++i) out << (i ? "," : "") << st.active_events[i];
    out << ']';
    for (const auto& [k, v] : st.inputs) out << ' ' << k << '=' << v.str();
    out << '\n';
  }
  return out.str();
}

std::string step_result_json(std::size_t index, const StepInput& in, const StepResult& r) {
  nlohmann::ordered_json j;
  j["step"] = index;
  j["events"] = in.active_events;
  auto& outs = j["outputs"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.outputs) outs[k] = to_json(v);
  auto& status = j["status"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.state.state_status) status[k] = v;
  auto& hist = j["history"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.state.state_history) hist[k] = v;
  auto& vars = j["vars"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.state.vars) vars[k] = to_json(v);
  auto& tr = j["trace"] = nlohmann::ordered_json::array();
  for (const auto& e : r.trace) tr.push_back(e.str());
  return j.dump();
}

}  // namespace sfv::sem
