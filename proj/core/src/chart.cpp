#include "sfverify/chart.hpp"

#include <algorithm>
#include <stdexcept>

namespace sfv::chart {

namespace {

void by_order(std::vector<const TransitionDef*>& ts) {
  std::stable_sort(ts.begin(), ts.end(), [](const TransitionDef* a, const TransitionDef* b) { return a->order < b->order; });
}

}  // namespace

const StateDef& ChartDef::state(const StateId& id) const {
  auto it = states.find(id);
  if (it == states.end()) throw std::out_of_range("unknown state '" + id + "'");
  return it->second;
}

const DataDecl* ChartDef::find_data(const std::string& name) const {
  for (const auto& d : data)
    if (d.name == name) return &d;
  return nullptr;
}

const EventDecl* ChartDef::find_event(const std::string& name) const {
  for (const auto& e : events)
    if (e.name == name) return &e;
  return nullptr;
}

int ChartDef::event_index(const std::string& name) const {
  for (std::size_t i = 0; i < events.size(); ++i)
    if (events[i].name == name) return static_cast<int>(i) + 1;
  return 0;
}

const std::vector<StateId>& ChartDef::children(const std::string& scope) const {
  if (is_chart(scope)) return child_order;
  return state(scope).child_order;
}

Decomposition ChartDef::decomposition_of(const std::string& scope) const {
  if (is_chart(scope)) return decomposition;
  return state(scope).decomposition;
}

std::string ChartDef::parent_of(const StateId& id) const {
  if (auto it = states.find(id); it != states.end()) return it->second.parent;
  if (auto it = junctions.find(id); it != junctions.end()) return it->second.parent;
  return {};
}

bool ChartDef::is_descendant_or_self(const std::string& desc, const std::string& anc) const {
  if (desc == anc || is_chart(anc)) return true;
  std::string cur = desc;
  for (int guard = 0; guard < 10000 && !cur.empty() && !is_chart(cur); ++guard) {
    if (cur == anc) return true;
    cur = parent_of(cur);
  }
  return false;
}

std::vector<StateId> ChartDef::chain_below(const std::string& scope, const StateId& target) const {
  std::vector<StateId> chain;
  std::string cur = target;
  for (int guard = 0; guard < 10000 && cur != scope && !cur.empty() && !is_chart(cur); ++guard) {
    chain.push_back(cur);
    cur = parent_of(cur);
  }
  std::reverse(chain.begin(), chain.end());
  return chain;
}

std::vector<const TransitionDef*> ChartDef::outgoing(const std::string& source, const std::string& scope) const {
  std::vector<const TransitionDef*> out;
  for (const auto& id : transition_order) {
    const auto& t = transitions.at(id);
    if (t.source && *t.source == source && t.scope == scope) out.push_back(&t);
  }
  by_order(out);
  return out;
}

std::vector<const TransitionDef*> ChartDef::defaults(const std::string& scope) const {
  std::vector<const TransitionDef*> out;
  for (const auto& id : transition_order) {
    const auto& t = transitions.at(id);
    if (!t.source && t.scope == scope) out.push_back(&t);
  }
  by_order(out);
  return out;
}

std::vector<const TransitionDef*> ChartDef::from_junction(const std::string& junction) const {
  std::vector<const TransitionDef*> out;
  for (const auto& id : transition_order) {
    const auto& t = transitions.at(id);
    if (t.source && *t.source == junction) out.push_back(&t);
  }
  by_order(out);
  return out;
}

std::vector<const DataDecl*> ChartDef::data_of(DataKind kind) const {
  std::vector<const DataDecl*> out;
  for (const auto& d : data)
    if (d.kind == kind) out.push_back(&d);
  return out;
}

std::string to_string(Decomposition d) { return d == Decomposition::Parallel ? "parallel" : "sequential"; }

std::string to_string(DataKind k) {
  switch (k) {
    case DataKind::Input: return "input";
    case DataKind::Output: return "output";
    case DataKind::Local: return "local";
  }
  return "?";
}

std::string to_string(EventKind k) { return k == EventKind::Input ? "input" : "local"; }

}  // namespace sfv::chart
