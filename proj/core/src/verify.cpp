#include "sfverify/verify.hpp"

#include <json.hpp>
#include <sstream>

#include "sfverify/chart_validate.hpp"
#include "sfverify/simplify.hpp"
#include "sfverify/trace_io.hpp"

namespace sfv::refine {

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Pass: return "PASS";
    case Outcome::Fail: return "FAIL";
    case Outcome::Nonconformant: return "NONCONFORMANT";
  }
  return "?";
}

namespace {

std::vector<std::string> texts(const Diagnostics& ds) {
  std::vector<std::string> out;
  for (const auto& d : ds) out.push_back(d.str());
  return out;
}

const char* mode_name(MatchMode m) { return m == MatchMode::Exact ? "exact" : "normalized"; }

}  // namespace

Verdict nonconformant(const chart::ChartDef& c, const std::string& implementation, const std::string& phase,
                      std::vector<std::string> diagnostics) {
  Verdict v;
  v.outcome = Outcome::Nonconformant;
  v.chart = c.identifier;
  v.implementation = implementation;
  v.phase = phase;
  v.diagnostics = std::move(diagnostics);
  return v;
}

Verdict verify(const chart::ChartDef& c, const ir::ImplProgram& p, const VerifyOptions& opt) {
  if (auto ds = chart::validate_chart(c); !ds.empty()) return nonconformant(c, p.name, "validate", texts(ds));
  if (auto ds = ir::check_program(p); !ds.empty()) return nonconformant(c, p.name, "read", texts(ds));
  const auto rel = retrieve::synthesize(c, p);
  if (!rel.ok()) return nonconformant(c, p.name, "retrieve", texts(rel.diagnostics));

  Verdict v;
  v.chart = c.identifier;
  v.implementation = p.name;
  v.mode = opt.mode;
  DerivedProgram d;
  try {
    d = simplify(derive_step(c, *rel, p, opt.broadcast_depth), c, *rel);
  } catch (const DeriveError& e) {
    return nonconformant(c, p.name, "derive", {e.what()});
  }
  v.phase_log = d.phase_log;

  MatchResult m;
  try {
    m = structure_match(d, p, c, *rel, opt.mode);
  } catch (const PatternError& e) {
    auto out = nonconformant(c, p.name, "match", {e.what()});
    out.phase_log = d.phase_log;
    return out;
  }
  v.matched = m.matched;
  v.matched_functions = m.matched_functions;
  v.first_divergence = m.divergence;
  v.reorders = m.reorders;
  v.derived_normal = m.derived_normal;
  v.impl_normal = m.impl_normal;
  v.phase_log.push_back({5, m.matched ? "structure match total" : "structure match failed", digest(d.step_body),
                         m.matched ? m.matched_functions.at(p.output_function()) : std::string("-")});

  if (opt.cosimulate) v.cosim = cosimulate(c, p, *rel, opt.traces);

  const bool clean = !v.cosim || v.cosim->clean();
  if (m.matched && clean) {
    v.outcome = Outcome::Pass;
  } else {
    v.outcome = Outcome::Fail;
    v.phase = m.matched ? "cosim" : "match";
  }
  return v;
}

std::string to_json(const Verdict& v, const VerifyOptions& opt) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["schema"] = "sfverify/1";
  j["chart"] = v.chart;
  j["implementation"] = v.implementation;
  j["outcome"] = to_string(v.outcome);
  j["phase"] = v.phase.empty() ? ordered_json() : ordered_json(v.phase);
  j["diagnostics"] = v.diagnostics;
  j["normalization_log"] = v.normalization_log;

  ordered_json match;
  match["mode"] = mode_name(v.mode);
  match["matched"] = v.matched;
  match["matched_functions"] = ordered_json::object();
  for (const auto& [fn, dg] : v.matched_functions) match["matched_functions"][fn] = dg;
  match["reorders"] = v.reorders;
  if (v.first_divergence) {
    const auto& dv = *v.first_divergence;
    match["first_divergence"] = {{"path", dv.path},
                                 {"reason", dv.reason},
                                 {"derived", dv.derived},
                                 {"implementation", dv.implementation}};
  } else {
    match["first_divergence"] = nullptr;
  }
  j["match"] = match;

  if (v.cosim) {
    const auto& cr = *v.cosim;
    ordered_json cj;
    cj["seed"] = opt.traces.seed;
    cj["traces"] = cr.traces;
    cj["max_length"] = opt.traces.max_len;
    cj["domain"] = {opt.traces.lo, opt.traces.hi};
    cj["steps"] = cr.steps;
    cj["violations"] = cr.violations;
    if (cr.counterexample) {
      const auto& ce = *cr.counterexample;
      ordered_json steps = ordered_json::array();
      for (const auto& st : ce.trace) {
        ordered_json s;
        s["events"] = st.active_events;
        s["inputs"] = ordered_json::object();
        for (const auto& [k, val] : st.inputs) s["inputs"][k] = val.is_float() ? ordered_json(val.as_double()) : ordered_json(val.as_int());
        steps.push_back(s);
      }
      cj["counterexample"] = {{"trace_index", ce.trace_index},
                              {"original_length", ce.original_length},
                              {"length", ce.trace.size()},
                              {"failing_step", ce.mismatch.step},
                              {"mismatch", ce.mismatch.what},
                              {"trace", steps}};
    } else {
      cj["counterexample"] = nullptr;
    }
    j["cosim"] = cj;
  } else {
    j["cosim"] = nullptr;
  }

  ordered_json log = ordered_json::array();
  for (const auto& e : v.phase_log)
    log.push_back({{"phase", e.phase}, {"transformation", e.transformation}, {"before", e.before}, {"after", e.after}});
  j["phase_log"] = log;
  return j.dump(2) + "\n";
}

std::string render_text(const Verdict& v, const VerifyOptions& opt) {
  std::ostringstream out;
  out << "chart " << v.chart << " against " << (v.implementation.empty() ? "(unnamed)" : v.implementation) << "\n";
  out << "outcome: " << to_string(v.outcome);
  if (!v.phase.empty()) out << " (" << v.phase << ")";
  out << "\n";
  for (const auto& d : v.diagnostics) out << "  " << d << "\n";
  if (!v.normalization_log.empty()) {
    out << "\nC normalization:\n";
    for (const auto& l : v.normalization_log) out << "  " << l << "\n";
  }

  static const char* const titles[] = {"", "data refinement", "normalisation", "parallelism elimination",
                                       "simplification", "structuring"};
  int current = 0;
  for (const auto& e : v.phase_log) {
    if (e.phase != current) {
      current = e.phase;
      out << "\nphase " << current << ", " << (current >= 1 && current <= 5 ? titles[current] : "?") << "\n";
    }
    out << "  " << e.transformation << "  [" << e.before << " -> " << e.after << "]\n";
  }

  if (v.outcome != Outcome::Nonconformant) {
    out << "\nmatching (" << mode_name(v.mode) << "): " << (v.matched ? "total" : "diverged") << "\n";
    for (const auto& [fn, dg] : v.matched_functions) out << "  " << fn << " = " << dg << "\n";
    for (const auto& r : v.reorders) out << "  reordered " << r << "\n";
    if (v.first_divergence) {
      const auto& dv = *v.first_divergence;
      out << "  first divergence at " << dv.path_str() << ": " << dv.reason << "\n";
      out << "  derived:\n";
      std::istringstream a(dv.derived);
      for (std::string line; std::getline(a, line);) out << "    " << line << "\n";
      out << "  implementation:\n";
      std::istringstream b(dv.implementation);
      for (std::string line; std::getline(b, line);) out << "    " << line << "\n";
    }
  }

  if (v.cosim) {
    const auto& cr = *v.cosim;
    out << "\nco-simulation: " << cr.traces << " traces (seed " << opt.traces.seed << "), " << cr.steps << " steps, "
        << cr.violations << " violations\n";
    if (cr.counterexample) {
      const auto& ce = *cr.counterexample;
      out << "  trace " << ce.trace_index << " shrunk from " << ce.original_length << " to " << ce.trace.size()
          << " steps, fails after step " << ce.mismatch.step << ": " << ce.mismatch.what << "\n";
      std::istringstream t(sem::format_trace(ce.trace));
      for (std::string line; std::getline(t, line);) out << "    " << line << "\n";
    }
  }
  return out.str();
}

}  // namespace sfv::refine
