#include "tstar/clause.hpp"

#include <algorithm>
#include <stdexcept>

namespace tstar {

namespace {

void sort_unique(std::vector<std::string>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::optional<LiteralClause> LiteralClause::make(std::vector<std::string> pos,
                                                 std::vector<std::string> neg) {
  sort_unique(pos);
  sort_unique(neg);
  for (const auto& p : pos)
    if (std::binary_search(neg.begin(), neg.end(), p)) return std::nullopt;
  return LiteralClause{std::move(pos), std::move(neg)};
}

LiteralClause LiteralClause::parse(std::string_view text) {
  std::vector<std::string> pos, neg;
  std::size_t start = 0;
  bool saw_true = false;
  std::size_t n_terms = 0;
  while (start <= text.size()) {
    std::size_t amp = text.find('&', start);
    std::string term = trim(text.substr(start, amp == std::string_view::npos
                                                   ? std::string_view::npos
                                                   : amp - start));
    start = amp == std::string_view::npos ? text.size() + 1 : amp + 1;
    if (term.empty()) {
      if (n_terms == 0 && start > text.size()) break;
      throw std::invalid_argument("empty term in clause '" + std::string(text) + "'");
    }
    ++n_terms;
    if (term == "true") {
      saw_true = true;
      continue;
    }
    bool negated = term[0] == '!';
    std::string name = negated ? trim(term.substr(1)) : term;
    if (name.empty() || name == "true" || name == "false" ||
        name.find_first_of(" \t!&|") != std::string::npos)
      throw std::invalid_argument("bad literal '" + term + "' in clause");
    (negated ? neg : pos).push_back(std::move(name));
  }
  if (n_terms == 0 && !saw_true)
    throw std::invalid_argument("empty clause string");
  auto c = make(std::move(pos), std::move(neg));
  if (!c)
    throw std::invalid_argument("unsatisfiable clause '" + std::string(text) +
                                "' (p and !p together)");
  return *std::move(c);
}

bool LiteralClause::satisfied_by(const PropSet& labels) const {
  for (const auto& p : positive)
    if (!labels.count(p)) return false;
  for (const auto& p : negative)
    if (labels.count(p)) return false;
  return true;
}

std::vector<std::string> LiteralClause::mentioned() const {
  std::vector<std::string> out = positive;
  out.insert(out.end(), negative.begin(), negative.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::string LiteralClause::str() const {
  if (positive.empty() && negative.empty()) return "true";
  std::string out;
  for (const auto& p : positive) {
    if (!out.empty()) out += " & ";
    out += p;
  }
  for (const auto& p : negative) {
    if (!out.empty()) out += " & ";
    out += "!" + p;
  }
  return out;
}

}  // namespace tstar
