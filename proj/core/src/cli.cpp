#include "sfverify/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "sfverify/c_reader.hpp"
#include "sfverify/chart_dsl.hpp"
#include "sfverify/chart_validate.hpp"
#include "sfverify/impl_text.hpp"
#include "sfverify/reference_gen.hpp"
#include "sfverify/retrieve.hpp"
#include "sfverify/trace_io.hpp"
#include "sfverify/verify.hpp"

namespace sfv::cli {

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return ss.str();
}

std::string RunConfig::check() const {
  if (domain_lo > domain_hi) return "data domain bounds out of order";
  if (broadcast_depth_limit < 1) return "broadcast depth limit must be positive";
  if (workers == 0) return "worker count must be positive";
  if (trace_count == 0) return "trace count must be positive";
  if (trace_len_max == 0) return "trace length must be positive";
  return {};
}

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

/// Loads and parses the chart; on failure reports and sets `code`.
std::optional<chart::ChartDef> load_chart(const std::string& path, std::ostream& err, int& code) {
  auto text = read_file(path);
  if (!text) {
    err << path << ": cannot read file\n";
    code = kIo;
    return std::nullopt;
  }
  auto c = chart::parse_chart(*text);
  if (!c.ok()) {
    for (const auto& d : c.diagnostics) err << path << ":" << d.str() << "\n";
    code = kInvalid;
    return std::nullopt;
  }
  return *c.value;
}

struct LoadedImpl {
  std::optional<ir::ImplProgram> program;
  bool nonconformant = false;
  std::vector<std::string> diagnostics;
  std::vector<std::string> normalization_log;
};

LoadedImpl load_impl(const std::string& path, const std::string& text) {
  LoadedImpl li;
  if (ends_with(path, ".c") || ends_with(path, ".h")) {
    auto r = ir::read_c_subset(text);
    li.nonconformant = r.nonconformant;
    li.normalization_log = r.normalization_log;
    for (const auto& d : r.program.diagnostics) li.diagnostics.push_back(path + ":" + d.str());
    if (r.program.ok()) li.program = *r.program.value;
  } else {
    auto r = ir::parse_impl(text);
    for (const auto& d : r.diagnostics) li.diagnostics.push_back(path + ":" + d.str());
    if (r.ok()) li.program = *r.value;
  }
  return li;
}

class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) file_.open(path, std::ios::binary);
    out_ = path.empty() ? &fallback : &file_;
    ok_ = path.empty() || file_.is_open();
  }
  bool ok() const { return ok_; }
  std::ostream& stream() { return *out_; }
  bool flush() {
    out_->flush();
    return !out_->fail();
  }

 private:
  std::ofstream file_;
  std::ostream* out_;
  bool ok_;
};

int write_out(const RunConfig& cfg, std::ostream& out, std::ostream& err, const std::string& text) {
  Sink sink(cfg.output, out);
  if (!sink.ok()) {
    err << cfg.output << ": cannot open for writing\n";
    return kIo;
  }
  sink.stream() << text;
  if (!sink.flush()) {
    err << cfg.output << ": write failed\n";
    return kIo;
  }
  return kOk;
}

refine::VerifyOptions verify_options(const RunConfig& cfg) {
  refine::VerifyOptions o;
  o.traces.seed = cfg.seed;
  o.traces.count = cfg.trace_count;
  o.traces.max_len = cfg.trace_len_max;
  o.traces.lo = cfg.domain_lo;
  o.traces.hi = cfg.domain_hi;
  o.traces.workers = cfg.workers;
  o.mode = cfg.match_mode;
  o.broadcast_depth = cfg.broadcast_depth_limit;
  o.cosimulate = cfg.cosimulate;
  return o;
}

}  // namespace

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  int code = kOk;
  auto c = load_chart(cfg.chart, err, code);
  if (!c) return code;
  const auto ds = chart::validate_chart(*c);
  for (const auto& d : ds) err << cfg.chart << ": " << d.str() << "\n";
  if (!ds.empty()) return kInvalid;
  out << cfg.chart << ": valid\n";
  return kOk;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  int code = kOk;
  auto c = load_chart(cfg.chart, err, code);
  if (!c) return code;
  if (auto ds = chart::validate_chart(*c); !ds.empty()) {
    for (const auto& d : ds) err << cfg.chart << ": " << d.str() << "\n";
    return kInvalid;
  }
  auto text = read_file(cfg.trace);
  if (!text) {
    err << cfg.trace << ": cannot read file\n";
    return kIo;
  }
  auto trace = sem::parse_trace(*text);
  if (!trace.ok()) {
    for (const auto& d : trace.diagnostics) err << cfg.trace << ":" << d.str() << "\n";
    return kInvalid;
  }
  Sink sink(cfg.output, out);
  if (!sink.ok()) {
    err << cfg.output << ": cannot open for writing\n";
    return kIo;
  }
  sem::SemOptions opt;
  opt.broadcast_depth_limit = std::max(opt.broadcast_depth_limit, cfg.broadcast_depth_limit);
  sem::ChartDynState s = sem::init_state(*c);
  for (std::size_t i = 0; i < trace->size(); ++i) {
    try {
      auto r = sem::step(*c, s, (*trace)[i], opt);
      sink.stream() << sem::step_result_json(i, (*trace)[i], r) << "\n";
      s = std::move(r.state);
    } catch (const sem::SemError& e) {
      sink.flush();
      err << "step " << i << ": " << e.what() << "\n";
      return kInvalid;
    }
  }
  return sink.flush() ? kOk : kIo;
}

int cmd_generate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  int code = kOk;
  auto c = load_chart(cfg.chart, err, code);
  if (!c) return code;
  auto p = ir::generate_reference(*c);
  if (!p.ok()) {
    for (const auto& d : p.diagnostics) err << cfg.chart << ": " << d.str() << "\n";
    return kInvalid;
  }
  return write_out(cfg, out, err, cfg.emit_c ? ir::render_c(*p) : ir::print_impl(*p));
}

int cmd_retrieve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  int code = kOk;
  auto c = load_chart(cfg.chart, err, code);
  if (!c) return code;
  ir::ImplProgram p;
  if (cfg.implementation.empty()) {
    auto g = ir::generate_reference(*c);
    if (!g.ok()) {
      for (const auto& d : g.diagnostics) err << cfg.chart << ": " << d.str() << "\n";
      return kInvalid;
    }
    p = *g.value;
  } else {
    auto text = read_file(cfg.implementation);
    if (!text) {
      err << cfg.implementation << ": cannot read file\n";
      return kIo;
    }
    auto li = load_impl(cfg.implementation, *text);
    for (const auto& d : li.diagnostics) err << d << "\n";
    if (!li.program) return li.nonconformant ? kNonconformant : kInvalid;
    p = *li.program;
  }
  auto r = retrieve::synthesize(*c, p);
  if (!r.ok()) {
    for (const auto& d : r.diagnostics) err << d.str() << "\n";
    return kNonconformant;
  }
  std::vector<Value> domain;
  const std::int64_t lo = std::max<std::int64_t>(cfg.domain_lo, -3), hi = std::min<std::int64_t>(cfg.domain_hi, 3);
  for (std::int64_t v = lo; v <= hi; ++v) domain.push_back(Value::integer(v));
  const auto rep = retrieve::check_functional_total_surjective(*r, *c, p, domain);
  std::string text;
  if (cfg.report_format == ReportFormat::Json) {
    text = retrieve::to_json(*r);
  } else {
    text = retrieve::render(*r) + "\n" + rep.str() + "\n";
  }
  if (int w = write_out(cfg, out, err, text); w != kOk) return w;
  if (!rep.ok()) {
    for (const auto& ce : rep.counterexamples) err << ce << "\n";
    return kInvalid;
  }
  return kOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  int code = kOk;
  auto c = load_chart(cfg.chart, err, code);
  if (!c) return code;
  auto text = read_file(cfg.implementation);
  if (!text) {
    err << cfg.implementation << ": cannot read file\n";
    return kIo;
  }
  const auto opt = verify_options(cfg);
  auto li = load_impl(cfg.implementation, *text);
  refine::Verdict v;
  if (!li.program) {
    v = refine::nonconformant(*c, cfg.implementation, "read", li.diagnostics);
    if (!li.nonconformant) {
      for (const auto& d : li.diagnostics) err << d << "\n";
      return kInvalid;
    }
  } else {
    v = refine::verify(*c, *li.program, opt);
  }
  v.normalization_log = li.normalization_log;
  const std::string report =
      cfg.report_format == ReportFormat::Json ? refine::to_json(v, opt) : refine::render_text(v, opt);
  if (int w = write_out(cfg, out, err, report); w != kOk) return w;
  switch (v.outcome) {
    case refine::Outcome::Pass: return kOk;
    case refine::Outcome::Fail: return kInvalid;
    case refine::Outcome::Nonconformant: return kNonconformant;
  }
  return kInvalid;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (auto problem = cfg.check(); !problem.empty()) {
    err << problem << "\n";
    return kInvalid;
  }
  if (cfg.command == "validate") return cmd_validate(cfg, out, err);
  if (cfg.command == "simulate") return cmd_simulate(cfg, out, err);
  if (cfg.command == "generate") return cmd_generate(cfg, out, err);
  if (cfg.command == "retrieve") return cmd_retrieve(cfg, out, err);
  if (cfg.command == "verify") return cmd_verify(cfg, out, err);
  err << "unknown command " << cfg.command << "\n";
  return kInvalid;
}

}  // namespace sfv::cli
