#include "tstar/translate.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace tstar {

using ltl::Formula;
using ltl::FormulaPtr;
using ltl::Op;

namespace {

constexpr int kMaxAtoms = 64;
constexpr int kMaxUntils = 32;

// One symbolic transition choice: read a letter satisfying (pos, neg),
// owe `next` afterwards. `pending` records which Until obligations chose
// their waiting branch here (their acceptance mark is withheld).
struct Branch {
  std::uint64_t pos = 0, neg = 0;
  std::vector<FormulaPtr> next;
  std::uint32_t pending = 0;
};

struct TgbaTransition {
  std::uint64_t pos = 0, neg = 0;
  int to = 0;
  std::uint32_t pending = 0;
};

class Translator {
 public:
  explicit Translator(FormulaPtr f) : root_(std::move(f)) {
    for (auto& name : ltl::atoms_of(root_)) {
      if (static_cast<int>(atom_names_.size()) >= kMaxAtoms)
        throw std::invalid_argument("too many distinct propositions (limit 64)");
      atom_bit_.emplace(name, atom_names_.size());
      atom_names_.push_back(std::move(name));
    }
  }

  BuchiAutomaton run() {
    build_tgba();
    degeneralize();
    prune_dead_states();
    merge_equal_states();
    drop_dominated_transitions();
    return export_automaton();
  }

 private:
  // ---- generalized automaton over canonical obligation formulas ----

  int state_id(const FormulaPtr& f) {
    std::string key = ltl::to_string(f);
    auto it = tgba_id_.find(key);
    if (it != tgba_id_.end()) return it->second;
    int id = static_cast<int>(tgba_states_.size());
    tgba_id_.emplace(std::move(key), id);
    tgba_states_.push_back(f);
    worklist_.push_back(id);
    return id;
  }

  int until_index(const FormulaPtr& u) {
    std::string key = ltl::to_string(u);
    auto it = until_id_.find(key);
    if (it != until_id_.end()) return it->second;
    int id = static_cast<int>(until_id_.size());
    if (id >= kMaxUntils)
      throw std::invalid_argument("too many Until subformulas (limit 32)");
    until_id_.emplace(std::move(key), id);
    return id;
  }

  static std::vector<Branch> cross(const std::vector<Branch>& a, const std::vector<Branch>& b) {
    std::vector<Branch> out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a) {
      for (const auto& y : b) {
        if ((x.pos & y.neg) || (x.neg & y.pos)) continue;  // contradictory letter
        Branch m;
        m.pos = x.pos | y.pos;
        m.neg = x.neg | y.neg;
        m.pending = x.pending | y.pending;
        m.next = x.next;
        m.next.insert(m.next.end(), y.next.begin(), y.next.end());
        out.push_back(std::move(m));
      }
    }
    return out;
  }

  // Letter masks of f when it is a pure conjunction of literals.
  std::optional<std::pair<std::uint64_t, std::uint64_t>> literal_conj(const FormulaPtr& f) {
    switch (f->op()) {
      case Op::True: return std::make_pair(std::uint64_t{0}, std::uint64_t{0});
      case Op::Atom:
        return std::make_pair(std::uint64_t{1} << atom_bit_.at(f->atom_name()),
                              std::uint64_t{0});
      case Op::Not:
        return std::make_pair(std::uint64_t{0},
                              std::uint64_t{1} << atom_bit_.at(f->left()->atom_name()));
      case Op::And: {
        auto l = literal_conj(f->left());
        auto r = literal_conj(f->right());
        if (!l || !r) return std::nullopt;
        if ((l->first & r->second) || (l->second & r->first)) return std::nullopt;
        return std::make_pair(l->first | r->first, l->second | r->second);
      }
      default: return std::nullopt;
    }
  }

  // Disjoint cover of the complement of a literal clause: one branch per
  // literal, each flipping it with all earlier literals kept.
  static std::vector<Branch> complement_of(std::uint64_t pos, std::uint64_t neg) {
    std::vector<Branch> out;
    std::uint64_t keep_pos = 0, keep_neg = 0;
    for (int i = 0; i < kMaxAtoms; ++i) {
      std::uint64_t bit = std::uint64_t{1} << i;
      if (pos & bit) {
        out.push_back({keep_pos, keep_neg | bit, {}, 0});
        keep_pos |= bit;
      } else if (neg & bit) {
        out.push_back({keep_pos | bit, keep_neg, {}, 0});
        keep_neg |= bit;
      }
    }
    return out;
  }

  std::vector<Branch> expand(const FormulaPtr& f) {
    switch (f->op()) {
      case Op::True: return {Branch{}};
      case Op::False: return {};
      case Op::Atom:
        return {Branch{std::uint64_t{1} << atom_bit_.at(f->atom_name()), 0, {}, 0}};
      case Op::Not:
        return {Branch{0, std::uint64_t{1} << atom_bit_.at(f->left()->atom_name()), {}, 0}};
      case Op::Next: return {Branch{0, 0, {f->left()}, 0}};
      case Op::And: return cross(expand(f->left()), expand(f->right()));
      case Op::Or: {
        // When one side is a plain letter test, restrict the other side's
        // branches to the letters where the test fails. This keeps the
        // "adopt the obligation although the easy case held" transitions
        // out of the automaton, which matters downstream: such transitions
        // carry no positive literal and would spoil the negative-self-loop
        // structure the reduced graph keys on.
        auto lit_l = literal_conj(f->left());
        auto lit_r = literal_conj(f->right());
        auto disjoint_union = [&](std::vector<Branch> lits, const FormulaPtr& other,
                                  std::uint64_t pos, std::uint64_t neg) {
          auto rest = cross(expand(other), complement_of(pos, neg));
          lits.insert(lits.end(), std::make_move_iterator(rest.begin()),
                      std::make_move_iterator(rest.end()));
          return lits;
        };
        if (lit_l && !lit_r)
          return disjoint_union(expand(f->left()), f->right(), lit_l->first, lit_l->second);
        if (lit_r && !lit_l)
          return disjoint_union(expand(f->right()), f->left(), lit_r->first, lit_r->second);
        auto out = expand(f->left());
        auto r = expand(f->right());
        out.insert(out.end(), std::make_move_iterator(r.begin()),
                   std::make_move_iterator(r.end()));
        return out;
      }
      case Op::Until: {
        // a U b == b or (a and X(a U b)); the waiting branch withholds
        // this Until's acceptance mark.
        auto out = expand(f->right());
        Branch wait;
        wait.next = {f};
        wait.pending = std::uint32_t{1} << until_index(f);
        auto waiting = cross(expand(f->left()), {std::move(wait)});
        out.insert(out.end(), std::make_move_iterator(waiting.begin()),
                   std::make_move_iterator(waiting.end()));
        return out;
      }
      case Op::Release: {
        // a R b == b and (a or X(a R b))
        std::vector<Branch> hold = expand(f->left());
        Branch keep;
        keep.next = {f};
        hold.push_back(std::move(keep));
        return cross(expand(f->right()), hold);
      }
      case Op::Always:
      case Op::Eventually: break;  // removed by to_nnf
    }
    throw std::logic_error("expand: non-NNF node");
  }

  void build_tgba() {
    state_id(root_);
    while (!worklist_.empty()) {
      int src = worklist_.back();
      worklist_.pop_back();
      if (static_cast<int>(tgba_out_.size()) <= src) tgba_out_.resize(src + 1);

      // Deduplicate by (letter clause, successor); parallel choices merge
      // by intersecting pendings, since a run may take whichever copy
      // suits the awaited mark.
      std::map<std::tuple<std::uint64_t, std::uint64_t, int>, std::uint32_t> merged;
      for (auto& br : expand(tgba_states_[static_cast<std::size_t>(src)])) {
        FormulaPtr next = ltl::conj_of(std::move(br.next));
        if (next->op() == Op::False) continue;
        int dst = state_id(next);
        auto [it, fresh] = merged.emplace(std::make_tuple(br.pos, br.neg, dst), br.pending);
        if (!fresh) it->second &= br.pending;
      }
      auto& out = tgba_out_[static_cast<std::size_t>(src)];
      for (const auto& [key, pending] : merged)
        out.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), pending});
      // Drop transitions dominated by a weaker-or-equal clause with no
      // worse marks toward the same successor.
      auto dominated = [&](const TgbaTransition& t) {
        for (const auto& o : out) {
          if (&o == &t || o.to != t.to) continue;
          bool weaker_clause = (o.pos & ~t.pos) == 0 && (o.neg & ~t.neg) == 0;
          bool better_marks = (o.pending & ~t.pending) == 0;
          if (weaker_clause && better_marks &&
              (o.pos != t.pos || o.neg != t.neg || o.pending != t.pending))
            return true;
        }
        return false;
      };
      std::vector<TgbaTransition> kept;
      for (const auto& t : out)
        if (!dominated(t)) kept.push_back(t);
      out = std::move(kept);
    }
    if (tgba_out_.size() < tgba_states_.size()) tgba_out_.resize(tgba_states_.size());
  }

  // ---- counter degeneralization over reachable (state, level) pairs ----

  void degeneralize() {
    const int k = static_cast<int>(until_id_.size());
    auto ba_id = [&](int q, int level) {
      auto [it, fresh] = ba_id_.emplace(std::make_pair(q, level), static_cast<int>(ba_key_.size()));
      if (fresh) {
        ba_key_.emplace_back(q, level);
        ba_worklist_.push_back(it->second);
      }
      return it->second;
    };

    ba_id(0, 0);
    while (!ba_worklist_.empty()) {
      int src = ba_worklist_.back();
      ba_worklist_.pop_back();
      if (static_cast<int>(ba_out_.size()) <= src) ba_out_.resize(src + 1);
      auto [q, level] = ba_key_[static_cast<std::size_t>(src)];
      for (const auto& t : tgba_out_[static_cast<std::size_t>(q)]) {
        int j = level == k ? 0 : level;
        while (j < k && !(t.pending & (std::uint32_t{1} << j))) ++j;
        ba_out_[static_cast<std::size_t>(src)].push_back(
            {t.pos, t.neg, ba_id(t.to, j), t.pending});
      }
    }
    if (ba_out_.size() < ba_key_.size()) ba_out_.resize(ba_key_.size());
    ba_accepting_.assign(ba_key_.size(), 0);
    for (std::size_t i = 0; i < ba_key_.size(); ++i)
      ba_accepting_[i] = ba_key_[i].second == k ? 1 : 0;
  }

  // Keep only states from which an accepting cycle is reachable (plus the
  // initial state); everything else contributes no accepted word.
  void prune_dead_states() {
    const std::size_t n = ba_key_.size();
    std::vector<char> live(n, 0);
    for (std::size_t a = 0; a < n; ++a) {
      if (!ba_accepting_[a]) continue;
      // Cycle through a?
      std::vector<char> seen(n, 0);
      std::vector<int> stack;
      for (const auto& t : ba_out_[a]) stack.push_back(t.to);
      bool closes = false;
      while (!stack.empty() && !closes) {
        int v = stack.back();
        stack.pop_back();
        if (v == static_cast<int>(a)) { closes = true; break; }
        if (seen[static_cast<std::size_t>(v)]) continue;
        seen[static_cast<std::size_t>(v)] = 1;
        for (const auto& t : ba_out_[static_cast<std::size_t>(v)]) stack.push_back(t.to);
      }
      if (closes) live[a] = 1;
    }
    // Propagate liveness backwards.
    std::vector<std::vector<int>> rev(n);
    for (std::size_t v = 0; v < n; ++v)
      for (const auto& t : ba_out_[v]) rev[static_cast<std::size_t>(t.to)].push_back(static_cast<int>(v));
    std::vector<int> stack;
    for (std::size_t v = 0; v < n; ++v)
      if (live[v]) stack.push_back(static_cast<int>(v));
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int u : rev[static_cast<std::size_t>(v)])
        if (!live[static_cast<std::size_t>(u)]) {
          live[static_cast<std::size_t>(u)] = 1;
          stack.push_back(u);
        }
    }
    live[0] = 1;  // the initial state always survives, even with empty language
    remap_ba(live);
  }

  void remap_ba(const std::vector<char>& live) {
    std::vector<int> new_id(ba_key_.size(), -1);
    std::vector<std::pair<int, int>> keys;
    std::vector<std::vector<TgbaTransition>> outs;
    std::vector<char> acc;
    for (std::size_t v = 0; v < ba_key_.size(); ++v) {
      if (!live[v]) continue;
      new_id[v] = static_cast<int>(keys.size());
      keys.push_back(ba_key_[v]);
      outs.emplace_back();
      acc.push_back(ba_accepting_[v]);
    }
    for (std::size_t v = 0; v < ba_key_.size(); ++v) {
      if (!live[v]) continue;
      for (const auto& t : ba_out_[v])
        if (new_id[static_cast<std::size_t>(t.to)] >= 0)
          outs[static_cast<std::size_t>(new_id[v])].push_back(
              {t.pos, t.neg, new_id[static_cast<std::size_t>(t.to)], t.pending});
    }
    ba_key_ = std::move(keys);
    ba_out_ = std::move(outs);
    ba_accepting_ = std::move(acc);
  }

  // Partition refinement on (acceptance, outgoing signature); states in the
  // same class behave identically and are merged.
  void merge_equal_states() {
    const std::size_t n = ba_key_.size();
    std::vector<int> cls(n);
    for (std::size_t v = 0; v < n; ++v) cls[v] = ba_accepting_[v];
    for (bool changed = true; changed;) {
      changed = false;
      std::map<std::pair<int, std::vector<std::tuple<std::uint64_t, std::uint64_t, int>>>, int>
          sig_to_class;
      std::vector<int> next_cls(n);
      for (std::size_t v = 0; v < n; ++v) {
        std::vector<std::tuple<std::uint64_t, std::uint64_t, int>> sig;
        for (const auto& t : ba_out_[v])
          sig.emplace_back(t.pos, t.neg, cls[static_cast<std::size_t>(t.to)]);
        std::sort(sig.begin(), sig.end());
        sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
        auto key = std::make_pair(cls[v], std::move(sig));
        auto [it, fresh] = sig_to_class.emplace(std::move(key), static_cast<int>(sig_to_class.size()));
        next_cls[v] = it->second;
        (void)fresh;
      }
      if (next_cls != cls) {
        cls = std::move(next_cls);
        changed = true;
      }
    }
    // Keep the lowest-numbered representative per class.
    std::vector<int> rep_of_class(n, -1);
    std::vector<char> live(n, 0);
    std::vector<int> target(n);
    for (std::size_t v = 0; v < n; ++v) {
      int c = cls[v];
      if (rep_of_class[static_cast<std::size_t>(c)] < 0) {
        rep_of_class[static_cast<std::size_t>(c)] = static_cast<int>(v);
        live[v] = 1;
      }
      target[v] = rep_of_class[static_cast<std::size_t>(c)];
    }
    live[0] = 1;
    for (auto& out : ba_out_)
      for (auto& t : out) t.to = target[static_cast<std::size_t>(t.to)];
    remap_ba(live);
  }

  void drop_dominated_transitions() {
    for (auto& out : ba_out_) {
      std::sort(out.begin(), out.end(), [](const TgbaTransition& a, const TgbaTransition& b) {
        return std::tie(a.to, a.pos, a.neg) < std::tie(b.to, b.pos, b.neg);
      });
      std::vector<TgbaTransition> kept;
      for (const auto& t : out) {
        bool dominated = false;
        for (const auto& o : out) {
          if (o.to != t.to) continue;
          bool weaker = (o.pos & ~t.pos) == 0 && (o.neg & ~t.neg) == 0;
          if (weaker && (o.pos != t.pos || o.neg != t.neg)) {
            dominated = true;
            break;
          }
        }
        if (!dominated && (kept.empty() || std::tie(kept.back().to, kept.back().pos, kept.back().neg) !=
                                               std::tie(t.to, t.pos, t.neg)))
          kept.push_back(t);
      }
      out = std::move(kept);
    }
  }

  BuchiAutomaton export_automaton() const {
    BuchiAutomaton b;
    b.propositions = atom_names_;
    for (std::size_t v = 0; v < ba_key_.size(); ++v) b.states.push_back("q" + std::to_string(v));
    b.initial = 0;
    for (std::size_t v = 0; v < ba_key_.size(); ++v)
      if (ba_accepting_[v]) b.accepting.push_back(static_cast<int>(v));
    for (std::size_t v = 0; v < ba_key_.size(); ++v) {
      for (const auto& t : ba_out_[v]) {
        std::vector<std::string> pos, neg;
        for (int i = 0; i < kMaxAtoms && i < static_cast<int>(atom_names_.size()); ++i) {
          if (t.pos & (std::uint64_t{1} << i)) pos.push_back(atom_names_[static_cast<std::size_t>(i)]);
          if (t.neg & (std::uint64_t{1} << i)) neg.push_back(atom_names_[static_cast<std::size_t>(i)]);
        }
        auto clause = LiteralClause::make(std::move(pos), std::move(neg));
        b.transitions.push_back({static_cast<int>(v), t.to, *std::move(clause)});
      }
    }
    b.validate();
    return b;
  }

  FormulaPtr root_;
  std::vector<std::string> atom_names_;
  std::map<std::string, int> atom_bit_;
  std::map<std::string, int> until_id_;

  std::vector<FormulaPtr> tgba_states_;
  std::map<std::string, int> tgba_id_;
  std::vector<int> worklist_;
  std::vector<std::vector<TgbaTransition>> tgba_out_;

  std::vector<std::pair<int, int>> ba_key_;  // (tgba state, counter level)
  std::map<std::pair<int, int>, int> ba_id_;
  std::vector<int> ba_worklist_;
  std::vector<std::vector<TgbaTransition>> ba_out_;
  std::vector<char> ba_accepting_;
};

}  // namespace

BuchiAutomaton translate_to_buchi(const FormulaPtr& f) {
  return Translator(ltl::simplify(ltl::to_nnf(f))).run();
}

}  // namespace tstar
