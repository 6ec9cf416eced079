#include "sfverify/cosim.hpp"

#include <algorithm>
#include <random>
#include <cmath>
#include <set>
#include <thread>
#include <variant>

namespace sfv::refine {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::int64_t pick_value(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  // Guards in charts are mostly sign tests, so favour the boundary values.
  if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) {
    std::vector<std::int64_t> edges{lo, hi};
    for (std::int64_t v : {std::int64_t{0}, std::int64_t{1}, std::int64_t{-1}})
      if (v >= lo && v <= hi) edges.push_back(v);
    return edges[std::uniform_int_distribution<std::size_t>(0, edges.size() - 1)(rng)];
  }
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

std::string describe(const std::map<std::string, Value>& m) {
  std::string out;
  for (const auto& [k, v] : m) out += (out.empty() ? "" : " ") + k + "=" + v.str();
  return out;
}

std::optional<std::string> compare(const sem::ChartDynState& chart_state, const sem::ChartDynState& abs,
                                   const retrieve::RetrieveRelation& r) {
  std::set<std::string> ids;
  for (const auto& [id, on] : chart_state.state_status) ids.insert(id);
  for (const auto& [id, on] : abs.state_status) ids.insert(id);
  for (const auto& id : ids) {
    const bool a = chart_state.active(id), b = abs.active(id);
    if (a != b)
      return "status of " + id + ": chart " + (a ? "active" : "inactive") + ", implementation " +
             (b ? "active" : "inactive");
  }
  for (const auto& [h, enc] : r.history_map) {
    auto x = chart_state.state_history.find(h);
    auto y = abs.state_history.find(h);
    const std::string hx = x == chart_state.state_history.end() ? "none" : x->second;
    const std::string hy = y == abs.state_history.end() ? "none" : y->second;
    if (hx != hy) return "history of " + h + ": chart " + hx + ", implementation " + hy;
  }
  for (const auto& [name, v] : abs.vars) {
    auto it = chart_state.vars.find(name);
    if (it == chart_state.vars.end()) continue;
    if (it->second != v) return "variable " + name + ": chart " + it->second.str() + ", implementation " + v.str();
  }
  return std::nullopt;
}

}  // namespace

std::vector<sem::StepInput> generate_trace(const chart::ChartDef& c, const TraceConfig& cfg, std::size_t index) {
  std::mt19937_64 rng(splitmix(cfg.seed ^ splitmix(index)));
  const std::size_t len = cfg.max_len == 0 ? 0 : std::uniform_int_distribution<std::size_t>(1, cfg.max_len)(rng);
  std::vector<sem::StepInput> trace(len);
  const auto inputs = c.data_of(chart::DataKind::Input);
  for (auto& st : trace) {
    for (const auto& ev : c.events)
      if (ev.kind == chart::EventKind::Input && std::bernoulli_distribution(0.5)(rng))
        st.active_events.push_back(ev.name);
    for (const auto* d : inputs) st.inputs[d->name] = Value::integer(pick_value(rng, cfg.lo, cfg.hi)).coerce(d->sort);
  }
  return trace;
}

std::optional<Mismatch> check_trace(const chart::ChartDef& c, const ir::ImplProgram& p,
                                    const retrieve::RetrieveRelation& r, const std::vector<sem::StepInput>& trace) {
  sem::SemOptions opt;
  opt.record_trace = false;
  sem::ChartDynState cs = sem::init_state(c);
  ir::ImplState is;
  try {
    is = ir::Interpreter(p).initial();
  } catch (const ir::ImplError& e) {
    return Mismatch{0, std::string("implementation initialize failed: ") + e.what()};
  }
  auto abstract_at = [&](std::size_t n) -> std::variant<sem::ChartDynState, Mismatch> {
    try {
      return retrieve::abstract(r, is);
    } catch (const retrieve::AbstractionError& e) {
      return Mismatch{n, std::string("implementation state outside the relation: ") + e.what()};
    }
  };
  {
    auto a = abstract_at(0);
    if (auto* m = std::get_if<Mismatch>(&a)) return *m;
    if (auto d = compare(cs, std::get<sem::ChartDynState>(a), r)) return Mismatch{0, "initial state, " + *d};
  }
  for (std::size_t n = 0; n < trace.size(); ++n) {
    sem::StepResult sr;
    try {
      sr = sem::step(c, cs, trace[n], opt);
    } catch (const sem::SemError& e) {
      return Mismatch{n + 1, std::string("chart step failed: ") + e.what()};
    }
    ir::ImplStepResult ir;
    try {
      ir = ir::impl_step(p, is, trace[n]);
    } catch (const ir::ImplError& e) {
      return Mismatch{n + 1, std::string("implementation step failed: ") + e.what()};
    }
    cs = std::move(sr.state);
    is = std::move(ir.state);
    auto a = abstract_at(n + 1);
    if (auto* m = std::get_if<Mismatch>(&a)) return *m;
    if (auto d = compare(cs, std::get<sem::ChartDynState>(a), r)) return Mismatch{n + 1, *d};
    if (sr.outputs != ir.outputs)
      return Mismatch{n + 1, "outputs: chart " + describe(sr.outputs) + ", implementation " + describe(ir.outputs)};
  }
  return std::nullopt;
}

std::vector<sem::StepInput> shrink_trace(const chart::ChartDef& c, const ir::ImplProgram& p,
                                         const retrieve::RetrieveRelation& r, std::vector<sem::StepInput> trace) {
  auto fails = [&](const std::vector<sem::StepInput>& t) { return check_trace(c, p, r, t).has_value(); };
  auto m = check_trace(c, p, r, trace);
  if (!m) return trace;
  trace.resize(std::min(trace.size(), m->step));

  for (std::size_t i = 0; i < trace.size();) {
    auto t = trace;
    t.erase(t.begin() + static_cast<long>(i));
    if (fails(t)) trace = std::move(t);
    else ++i;
  }

  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t i = 0; i < trace.size(); ++i) {
      for (std::size_t e = trace[i].active_events.size(); e-- > 0;) {
        auto t = trace;
        t[i].active_events.erase(t[i].active_events.begin() + static_cast<long>(e));
        if (fails(t)) {
          trace = std::move(t);
          progress = true;
        }
      }
      std::vector<std::string> names;
      for (const auto& [name, v] : trace[i].inputs) names.push_back(name);
      for (const auto& name : names) {
        const Value v = trace[i].inputs.at(name);
        const double x = v.as_double();
        if (x == 0) continue;
        std::vector<Value> candidates{Value::integer(0)};
        if (!v.is_float()) {
          const std::int64_t n = v.as_int();
          candidates.push_back(Value::integer(n / 2));
          candidates.push_back(Value::integer(n > 0 ? n - 1 : n + 1));
        } else {
          candidates.push_back(Value::real(x / 2));
        }
        for (const Value& cand : candidates) {
          if (std::abs(cand.as_double()) >= std::abs(x)) continue;
          auto t = trace;
          t[i].inputs[name] = cand;
          if (fails(t)) {
            trace = std::move(t);
            progress = true;
            break;
          }
        }
      }
    }
  }
  return trace;
}

CosimReport cosimulate(const chart::ChartDef& c, const ir::ImplProgram& p, const retrieve::RetrieveRelation& r,
                       const TraceConfig& cfg) {
  struct Outcome {
    std::size_t steps = 0;
    std::optional<Mismatch> mismatch;
  };
  std::vector<Outcome> results(cfg.count);
  auto run = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < cfg.count; i += stride) {
      const auto t = generate_trace(c, cfg, i);
      results[i] = {t.size(), check_trace(c, p, r, t)};
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(cfg.count)));
  if (workers <= 1) {
    run(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w, workers);
  }

  CosimReport rep;
  rep.traces = cfg.count;
  for (std::size_t i = 0; i < results.size(); ++i) {
    rep.steps += results[i].steps;
    if (!results[i].mismatch) continue;
    ++rep.violations;
    if (rep.counterexample) continue;
    Counterexample ce;
    ce.trace_index = i;
    ce.trace = generate_trace(c, cfg, i);
    ce.original_length = ce.trace.size();
    if (cfg.shrink) ce.trace = shrink_trace(c, p, r, ce.trace);
    ce.mismatch = *check_trace(c, p, r, ce.trace);
    rep.counterexample = std::move(ce);
  }
  return rep;
}

}  // namespace sfv::refine
