#pragma once

#include <stdexcept>
#include <string>

#include "sfverify/c_reader.hpp"
#include "sfverify/chart_dsl.hpp"
#include "sfverify/cli.hpp"
#include "sfverify/impl_text.hpp"

namespace sfv::testing {

inline const std::string kCorpus = SFVERIFY_CORPUS_DIR;

inline const char* const kCorpusCharts[] = {"AbsoluteValue", "Parallel", "Hierarchy", "History", "Broadcast"};

inline std::string corpus_file(const std::string& rel) {
  auto text = cli::read_file(kCorpus + "/" + rel);
  if (!text) throw std::runtime_error("missing corpus file " + rel);
  return *text;
}

inline chart::ChartDef corpus_chart(const std::string& name) {
  return chart::parse_chart(corpus_file("charts/" + name + ".sfc")).get();
}

inline ir::ImplProgram corpus_c(const std::string& name) {
  return ir::read_c_subset(corpus_file("impl/" + name + ".c")).program.get();
}

inline chart::ChartDef chart_from(const std::string& text) { return chart::parse_chart(text).get(); }

inline ir::ImplProgram program_from(const std::string& text) { return ir::parse_impl(text).get(); }

}  // namespace sfv::testing
