#include "tstar/buchi.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include <json.hpp>

namespace tstar {

bool BuchiAutomaton::is_accepting(int state) const {
  return std::binary_search(accepting.begin(), accepting.end(), state);
}

void BuchiAutomaton::validate() const {
  const int n = static_cast<int>(states.size());
  if (n == 0) throw std::invalid_argument("automaton has no states");
  if (initial < 0 || initial >= n) throw std::invalid_argument("initial state out of range");
  if (!std::is_sorted(accepting.begin(), accepting.end()) ||
      std::adjacent_find(accepting.begin(), accepting.end()) != accepting.end())
    throw std::invalid_argument("accepting set must be sorted and unique");
  for (int a : accepting)
    if (a < 0 || a >= n) throw std::invalid_argument("accepting state out of range");
  std::set<std::string> universe(propositions.begin(), propositions.end());
  if (universe.size() != propositions.size())
    throw std::invalid_argument("duplicate proposition in universe");
  for (const auto& t : transitions) {
    if (t.from < 0 || t.from >= n || t.to < 0 || t.to >= n)
      throw std::invalid_argument("transition endpoint out of range");
    for (const auto& p : t.clause.mentioned())
      if (!universe.count(p))
        throw std::invalid_argument("clause proposition '" + p + "' not in universe");
  }
}

BuchiAutomaton import_automaton(std::string_view document) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("automaton document is not valid JSON: ") +
                                e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("automaton document must be one object");

  static const std::set<std::string> known = {"propositions", "states", "initial",
                                              "accepting", "transitions"};
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (!known.count(it.key()))
      throw std::invalid_argument("unknown field '" + it.key() + "' in automaton document");
  for (const auto& field : known)
    if (!doc.contains(field))
      throw std::invalid_argument("missing field '" + field + "' in automaton document");

  BuchiAutomaton b;
  b.propositions = doc["propositions"].get<std::vector<std::string>>();
  b.states = doc["states"].get<std::vector<std::string>>();

  std::map<std::string, int> id_of;
  for (std::size_t i = 0; i < b.states.size(); ++i) {
    if (!id_of.emplace(b.states[i], static_cast<int>(i)).second)
      throw std::invalid_argument("duplicate state '" + b.states[i] + "'");
  }
  auto lookup = [&](const std::string& name) {
    auto it = id_of.find(name);
    if (it == id_of.end())
      throw std::invalid_argument("undeclared state '" + name + "' referenced");
    return it->second;
  };

  b.initial = lookup(doc["initial"].get<std::string>());
  for (const auto& name : doc["accepting"].get<std::vector<std::string>>())
    b.accepting.push_back(lookup(name));
  std::sort(b.accepting.begin(), b.accepting.end());
  b.accepting.erase(std::unique(b.accepting.begin(), b.accepting.end()), b.accepting.end());

  for (const auto& jt : doc["transitions"]) {
    if (!jt.is_object() || jt.size() != 3 || !jt.contains("from") || !jt.contains("to") ||
        !jt.contains("clause"))
      throw std::invalid_argument("transition must be an object {from, to, clause}");
    BuchiTransition t;
    t.from = lookup(jt["from"].get<std::string>());
    t.to = lookup(jt["to"].get<std::string>());
    t.clause = LiteralClause::parse(jt["clause"].get<std::string>());
    b.transitions.push_back(std::move(t));
  }
  b.validate();
  return b;
}

std::string export_automaton(const BuchiAutomaton& b) {
  nlohmann::ordered_json doc;
  doc["propositions"] = b.propositions;
  doc["states"] = b.states;
  doc["initial"] = b.states.at(static_cast<std::size_t>(b.initial));
  std::vector<std::string> acc;
  for (int a : b.accepting) acc.push_back(b.states.at(static_cast<std::size_t>(a)));
  doc["accepting"] = acc;
  auto& ts = doc["transitions"] = nlohmann::ordered_json::array();
  for (const auto& t : b.transitions) {
    nlohmann::ordered_json jt;
    jt["from"] = b.states.at(static_cast<std::size_t>(t.from));
    jt["to"] = b.states.at(static_cast<std::size_t>(t.to));
    jt["clause"] = t.clause.str();
    ts.push_back(std::move(jt));
  }
  return doc.dump(2) + "\n";
}

}  // namespace tstar
