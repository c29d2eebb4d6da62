#include "deepregex/automata.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <unordered_map>
#include <utility>

namespace deepregex {

// ---------------------------------------------------------------------------
// Alphabet

Alphabet::Alphabet(std::vector<CharSet> minterms) : minterms_(std::move(minterms)) {
  symbol_of_.fill(-1);
  CharSet seen;
  for (std::size_t i = 0; i < minterms_.size(); ++i) {
    const CharSet& m = minterms_[i];
    if (m.empty()) throw std::invalid_argument("alphabet minterm " + std::to_string(i) + " is empty");
    if (seen.intersects(m)) throw std::invalid_argument("alphabet minterms overlap");
    seen = seen | m;
    for (char c : m.members()) symbol_of_[static_cast<unsigned char>(c)] = static_cast<std::int16_t>(i);
  }
  if (!seen.is_universe()) throw std::invalid_argument("alphabet minterms do not cover printable ASCII");
}

bool Alphabet::refines(const CharSet& set) const {
  for (const auto& m : minterms_) {
    if (m.intersects(set) && !m.is_subset_of(set)) return false;
  }
  return true;
}

std::vector<int> Alphabet::symbols_in(const CharSet& set) const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i) {
    if (minterms_[i].intersects(set)) out.push_back(i);
  }
  return out;
}

Alphabet minterm_alphabet(std::span<const CharSet> classes) {
  std::vector<CharSet> cells{CharSet::universe()};
  for (const auto& cls : classes) {
    if (cls.empty()) throw std::invalid_argument("minterm_alphabet: empty character class");
    std::vector<CharSet> refined;
    refined.reserve(cells.size() + 1);
    for (const auto& cell : cells) {
      CharSet in = cell & cls;
      CharSet out = cell - cls;
      if (!in.empty()) refined.push_back(in);
      if (!out.empty()) refined.push_back(out);
    }
    cells = std::move(refined);
  }
  std::sort(cells.begin(), cells.end());
  return Alphabet(std::move(cells));
}

void Budget::check(std::size_t states_so_far) const {
  if (states_so_far > max_states) {
    throw BudgetExceededError("automaton exceeded " + std::to_string(max_states) + " states");
  }
  if (deadline && std::chrono::steady_clock::now() > *deadline) {
    throw BudgetExceededError("automaton construction ran past its deadline");
  }
}

// ---------------------------------------------------------------------------
// Thompson fragments

namespace {

struct Nfa {
  struct State {
    std::vector<int> eps;
    std::vector<std::pair<int, int>> moves;  // (symbol, target)
  };
  std::vector<State> states;

  int add() {
    states.emplace_back();
    return static_cast<int>(states.size()) - 1;
  }
  void link(int from, int to) { states[from].eps.push_back(to); }
};

struct Fragment {
  int start;
  int accept;
};

Fragment symbols_fragment(Nfa& nfa, const std::vector<int>& symbols) {
  Fragment f{nfa.add(), nfa.add()};
  for (int s : symbols) nfa.states[f.start].moves.emplace_back(s, f.accept);
  return f;
}

Fragment chain(Nfa& nfa, const std::vector<Fragment>& parts) {
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) nfa.link(parts[i].accept, parts[i + 1].start);
  return {parts.front().start, parts.back().accept};
}

Fragment either(Nfa& nfa, const std::vector<Fragment>& parts) {
  Fragment f{nfa.add(), nfa.add()};
  for (const auto& p : parts) {
    nfa.link(f.start, p.start);
    nfa.link(p.accept, f.accept);
  }
  return f;
}

Fragment kleene(Nfa& nfa, Fragment inner) {
  Fragment f{nfa.add(), nfa.add()};
  nfa.link(f.start, inner.start);
  nfa.link(f.start, f.accept);
  nfa.link(inner.accept, inner.start);
  nfa.link(inner.accept, f.accept);
  return f;
}

Fragment optional(Nfa& nfa, Fragment inner) {
  Fragment f{nfa.add(), nfa.add()};
  nfa.link(f.start, inner.start);
  nfa.link(f.start, f.accept);
  nfa.link(inner.accept, f.accept);
  return f;
}

std::vector<bool> live_states(const Dfa& d) {
  // Reverse reachability from accepting states.
  std::vector<std::vector<int>> preds(d.state_count);
  for (int s = 0; s < d.state_count; ++s)
    for (int a = 0; a < d.symbol_count; ++a) preds[d.next(s, a)].push_back(s);
  std::vector<bool> live(d.state_count, false);
  std::vector<int> stack;
  for (int s = 0; s < d.state_count; ++s) {
    if (d.accepting[s]) {
      live[s] = true;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    for (int p : preds[s]) {
      if (!live[p]) {
        live[p] = true;
        stack.push_back(p);
      }
    }
  }
  return live;
}

/// Copy the live part of a DFA into the NFA as a single-entry, single-exit fragment.
Fragment embed(Nfa& nfa, const Dfa& d) {
  std::vector<bool> live = live_states(d);
  std::vector<int> id(d.state_count, -1);
  for (int s = 0; s < d.state_count; ++s)
    if (live[s]) id[s] = nfa.add();
  Fragment f{nfa.add(), nfa.add()};
  if (live[d.start]) nfa.link(f.start, id[d.start]);
  for (int s = 0; s < d.state_count; ++s) {
    if (!live[s]) continue;
    for (int a = 0; a < d.symbol_count; ++a) {
      int t = d.next(s, a);
      if (live[t]) nfa.states[id[s]].moves.emplace_back(a, id[t]);
    }
    if (d.accepting[s]) nfa.link(id[s], f.accept);
  }
  return f;
}

Dfa determinize(const Nfa& nfa, Fragment frag, int symbol_count, const Budget& budget) {
  std::vector<int> stamp(nfa.states.size(), -1);
  int epoch = 0;
  auto closure = [&](std::vector<int> seeds) {
    ++epoch;
    std::vector<int> out;
    std::vector<int> stack;
    for (int s : seeds) {
      if (stamp[s] != epoch) {
        stamp[s] = epoch;
        stack.push_back(s);
      }
    }
    while (!stack.empty()) {
      int s = stack.back();
      stack.pop_back();
      out.push_back(s);
      for (int t : nfa.states[s].eps) {
        if (stamp[t] != epoch) {
          stamp[t] = epoch;
          stack.push_back(t);
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  };

  std::map<std::vector<int>, int> index;
  std::vector<std::vector<int>> sets;
  auto intern = [&](std::vector<int> set) {
    auto [it, fresh] = index.emplace(set, static_cast<int>(sets.size()));
    if (fresh) {
      sets.push_back(std::move(set));
      budget.check(sets.size());
    }
    return it->second;
  };

  Dfa d;
  d.symbol_count = symbol_count;
  d.start = intern(closure({frag.start}));
  std::vector<std::vector<int>> buckets(symbol_count);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (auto& b : buckets) b.clear();
    for (int s : sets[i])
      for (auto [sym, t] : nfa.states[s].moves) buckets[sym].push_back(t);
    d.accepting.push_back(std::binary_search(sets[i].begin(), sets[i].end(), frag.accept));
    for (int a = 0; a < symbol_count; ++a) d.transitions.push_back(intern(closure(buckets[a])));
  }
  d.state_count = static_cast<int>(sets.size());
  return d;
}

Dfa product(const Dfa& x, const Dfa& y, const Budget& budget) {
  std::map<std::pair<int, int>, int> index;
  std::vector<std::pair<int, int>> pairs;
  auto intern = [&](int p, int q) {
    auto [it, fresh] = index.emplace(std::make_pair(p, q), static_cast<int>(pairs.size()));
    if (fresh) {
      pairs.emplace_back(p, q);
      budget.check(pairs.size());
    }
    return it->second;
  };
  Dfa d;
  d.symbol_count = x.symbol_count;
  d.start = intern(x.start, y.start);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [p, q] = pairs[i];
    d.accepting.push_back(x.accepting[p] && y.accepting[q]);
    for (int a = 0; a < d.symbol_count; ++a) d.transitions.push_back(intern(x.next(p, a), y.next(q, a)));
  }
  d.state_count = static_cast<int>(pairs.size());
  return d;
}

class Compiler {
 public:
  Compiler(const Alphabet& alphabet, const Budget& budget) : alphabet_(alphabet), budget_(budget) {}

  Dfa compile(const Regex& r) {
    budget_.check(0);
    switch (r.kind()) {
      case RegexKind::And: {
        Dfa acc = compile(r.children()[0]);
        for (std::size_t k = 1; k < r.children().size(); ++k) {
          acc = minimize_dfa(product(acc, compile(r.children()[k]), budget_));
        }
        return acc;
      }
      case RegexKind::Not:
        return minimize_dfa(complement_dfa(compile(r.child())));
      default:
        break;
    }
    Nfa nfa;
    Fragment f = build(nfa, r);
    return minimize_dfa(determinize(nfa, f, alphabet_.size(), budget_));
  }

 private:
  std::vector<int> symbols(const CharSet& set) const {
    if (!alphabet_.refines(set)) {
      throw AlphabetMismatchError("alphabet does not refine class [" + set.members() + "]");
    }
    return alphabet_.symbols_in(set);
  }

  Fragment sub(Nfa& nfa, const Regex& child) { return embed(nfa, compile(child)); }

  Fragment build(Nfa& nfa, const Regex& r) {
    switch (r.kind()) {
      case RegexKind::Literal: {
        std::vector<Fragment> parts;
        for (char c : r.text()) parts.push_back(symbols_fragment(nfa, symbols(CharSet::single(c))));
        return chain(nfa, parts);
      }
      case RegexKind::Class:
        return symbols_fragment(nfa, symbols(r.chars()));
      case RegexKind::Concat: {
        std::vector<Fragment> parts;
        for (const auto& c : r.children()) parts.push_back(sub(nfa, c));
        return chain(nfa, parts);
      }
      case RegexKind::Or: {
        std::vector<Fragment> parts;
        for (const auto& c : r.children()) parts.push_back(sub(nfa, c));
        return either(nfa, parts);
      }
      case RegexKind::Star:
        return kleene(nfa, sub(nfa, r.child()));
      case RegexKind::Plus: {
        Dfa body = compile(r.child());
        return chain(nfa, {embed(nfa, body), kleene(nfa, embed(nfa, body))});
      }
      case RegexKind::RepeatAtLeast: {
        Dfa body = compile(r.child());
        std::vector<Fragment> parts;
        for (int k = 0; k < r.count(); ++k) parts.push_back(embed(nfa, body));
        parts.push_back(kleene(nfa, embed(nfa, body)));
        return chain(nfa, parts);
      }
      case RegexKind::RepeatAtMost: {
        Dfa body = compile(r.child());
        std::vector<Fragment> parts{embed(nfa, body)};
        for (int k = 1; k < r.count(); ++k) parts.push_back(optional(nfa, embed(nfa, body)));
        return chain(nfa, parts);
      }
      case RegexKind::WordBounded: {
        // (e | .* NW) body (NW .* | e)
        std::vector<int> nw = symbols(CharSet::non_word_chars());
        std::vector<int> any = symbols(CharSet::universe());
        Fragment before = chain(nfa, {kleene(nfa, symbols_fragment(nfa, any)), symbols_fragment(nfa, nw)});
        Fragment body = sub(nfa, r.child());
        Fragment after = chain(nfa, {symbols_fragment(nfa, nw), kleene(nfa, symbols_fragment(nfa, any))});
        return chain(nfa, {optional(nfa, before), body, optional(nfa, after)});
      }
      case RegexKind::And:
      case RegexKind::Not:
        return sub(nfa, r);
    }
    throw std::logic_error("unhandled regex kind");
  }

  const Alphabet& alphabet_;
  const Budget& budget_;
};

/// Breadth-first renumbering from the start state; drops unreachable states.
Dfa canonicalize(const Dfa& d) {
  std::vector<int> id(d.state_count, -1);
  std::vector<int> order{d.start};
  id[d.start] = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (int a = 0; a < d.symbol_count; ++a) {
      int t = d.next(order[i], a);
      if (id[t] < 0) {
        id[t] = static_cast<int>(order.size());
        order.push_back(t);
      }
    }
  }
  Dfa out;
  out.state_count = static_cast<int>(order.size());
  out.symbol_count = d.symbol_count;
  out.start = 0;
  for (int s : order) {
    out.accepting.push_back(d.accepting[s]);
    for (int a = 0; a < d.symbol_count; ++a) out.transitions.push_back(id[d.next(s, a)]);
  }
  return out;
}

}  // namespace

Dfa compile_dfa(const Regex& ast, const Alphabet& alphabet, const Budget& budget) {
  for (const auto& cls : mentioned_classes(ast)) {
    if (!alphabet.refines(cls)) {
      throw AlphabetMismatchError("alphabet does not refine class [" + cls.members() + "]");
    }
  }
  return Compiler(alphabet, budget).compile(ast);
}

Dfa complement_dfa(const Dfa& dfa) {
  Dfa out = dfa;
  out.accepting.flip();
  return out;
}

// ---------------------------------------------------------------------------
// Hopcroft minimization

Dfa minimize_dfa(const Dfa& input) {
  const Dfa d = canonicalize(input);
  const int n = d.state_count;
  const int k = d.symbol_count;
  if (n == 0) return d;

  // Inverse transitions in CSR form, keyed by (target, symbol).
  std::vector<int> inv_begin(static_cast<std::size_t>(n) * k + 1, 0);
  for (int s = 0; s < n; ++s)
    for (int a = 0; a < k; ++a) ++inv_begin[static_cast<std::size_t>(d.next(s, a)) * k + a + 1];
  std::partial_sum(inv_begin.begin(), inv_begin.end(), inv_begin.begin());
  std::vector<int> inv(static_cast<std::size_t>(n) * k);
  {
    std::vector<int> fill(inv_begin.begin(), inv_begin.end() - 1);
    for (int s = 0; s < n; ++s)
      for (int a = 0; a < k; ++a) inv[fill[static_cast<std::size_t>(d.next(s, a)) * k + a]++] = s;
  }

  // Refinable partition: each block is a contiguous range of `elems`.
  std::vector<int> elems(n), where(n), block_of(n);
  std::vector<int> first, last, marked;
  {
    int pos = 0;
    for (int pass = 0; pass < 2; ++pass) {
      int begin = pos;
      for (int s = 0; s < n; ++s) {
        if (d.accepting[s] == (pass == 0)) {
          elems[pos] = s;
          where[s] = pos;
          block_of[s] = static_cast<int>(first.size());
          ++pos;
        }
      }
      if (pos > begin) {
        first.push_back(begin);
        last.push_back(pos);
        marked.push_back(0);
      }
    }
  }

  std::vector<std::pair<int, int>> work;
  std::vector<std::vector<bool>> pending;  // pending[block][symbol]
  auto push = [&](int b, int a) {
    if (static_cast<int>(pending.size()) <= b) pending.resize(b + 1, std::vector<bool>(k, false));
    if (!pending[b][a]) {
      pending[b][a] = true;
      work.emplace_back(b, a);
    }
  };
  auto block_size = [&](int b) { return last[b] - first[b]; };

  if (first.size() == 2) {
    int smaller = block_size(0) <= block_size(1) ? 0 : 1;
    for (int a = 0; a < k; ++a) push(smaller, a);
  }
  pending.resize(first.size(), std::vector<bool>(k, false));

  std::vector<int> splitter, touched;
  while (!work.empty()) {
    auto [b, a] = work.back();
    work.pop_back();
    pending[b][a] = false;

    splitter.assign(elems.begin() + first[b], elems.begin() + last[b]);
    touched.clear();
    for (int q : splitter) {
      std::size_t key = static_cast<std::size_t>(q) * k + a;
      for (int i = inv_begin[key]; i < inv_begin[key + 1]; ++i) {
        int p = inv[i];
        int y = block_of[p];
        if (marked[y] == 0) touched.push_back(y);
        // Move p into the marked prefix of its block.
        int target = first[y] + marked[y];
        int other = elems[target];
        std::swap(elems[where[p]], elems[target]);
        where[other] = where[p];
        where[p] = target;
        ++marked[y];
      }
    }
    for (int y : touched) {
      int m = marked[y];
      marked[y] = 0;
      if (m == block_size(y)) continue;
      int z = static_cast<int>(first.size());
      first.push_back(first[y]);
      last.push_back(first[y] + m);
      marked.push_back(0);
      first[y] += m;
      for (int i = first[z]; i < last[z]; ++i) block_of[elems[i]] = z;
      pending.resize(first.size(), std::vector<bool>(k, false));
      for (int c = 0; c < k; ++c) {
        if (pending[y][c]) {
          push(z, c);
        } else {
          push(block_size(z) <= block_size(y) ? z : y, c);
        }
      }
    }
  }

  Dfa q;
  q.state_count = static_cast<int>(first.size());
  q.symbol_count = k;
  q.start = block_of[d.start];
  q.accepting.resize(q.state_count);
  q.transitions.resize(static_cast<std::size_t>(q.state_count) * k);
  for (int b = 0; b < q.state_count; ++b) {
    int rep = elems[first[b]];
    q.accepting[b] = d.accepting[rep];
    for (int a = 0; a < k; ++a) q.transitions[static_cast<std::size_t>(b) * k + a] = block_of[d.next(rep, a)];
  }
  return canonicalize(q);
}

// ---------------------------------------------------------------------------
// Queries

bool accepts(const Dfa& dfa, const Alphabet& alphabet, std::string_view s) {
  int state = dfa.start;
  for (char c : s) {
    int sym = alphabet.symbol_of(c);
    if (sym < 0) return false;
    state = dfa.next(state, sym);
  }
  return dfa.accepting[state];
}

bool equivalent(const Dfa& a, const Dfa& b, const Alphabet& alphabet, std::string* witness) {
  if (a.symbol_count != b.symbol_count || a.symbol_count != alphabet.size()) {
    throw AlphabetMismatchError("equivalence check over different alphabets");
  }
  const int offset = a.state_count;
  std::vector<int> parent(a.state_count + b.state_count);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  auto accept = [&](int x) { return x < offset ? a.accepting[x] : b.accepting[x - offset]; };

  struct Visit {
    int p, q;
    int from;  // index of the predecessor visit, -1 for the root
    int symbol;
  };
  std::vector<Visit> visits{{a.start, b.start, -1, -1}};
  auto spell = [&](int v) {
    std::string s;
    for (; visits[v].from >= 0; v = visits[v].from) s.push_back(alphabet.representative(visits[v].symbol));
    std::reverse(s.begin(), s.end());
    return s;
  };

  if (a.accepting[a.start] != b.accepting[b.start]) {
    if (witness) witness->clear();
    return false;
  }
  parent[find(a.start)] = find(b.start + offset);
  for (std::size_t i = 0; i < visits.size(); ++i) {
    for (int sym = 0; sym < alphabet.size(); ++sym) {
      int p = a.next(visits[i].p, sym);
      int q = b.next(visits[i].q, sym);
      int rp = find(p);
      int rq = find(q + offset);
      if (rp == rq) continue;
      parent[rp] = rq;
      visits.push_back({p, q, static_cast<int>(i), sym});
      if (accept(p) != accept(q + offset)) {
        if (witness) *witness = spell(static_cast<int>(visits.size()) - 1);
        return false;
      }
    }
  }
  if (witness) witness->clear();
  return true;
}

std::vector<std::string> enumerate_accepted(const Dfa& dfa, const Alphabet& alphabet, int max_len,
                                            std::size_t cap) {
  if (max_len < 0 || max_len > 8) throw std::invalid_argument("enumerate_accepted: max_len must be in [0, 8]");
  std::vector<bool> live = live_states(dfa);
  std::vector<std::string> out;
  std::string prefix;
  std::function<void(int)> walk = [&](int state) {
    if (dfa.accepting[state]) {
      if (out.size() >= cap) {
        throw EnumerationLimitError("enumeration exceeds cap of " + std::to_string(cap) + " strings");
      }
      out.push_back(prefix);
    }
    if (static_cast<int>(prefix.size()) == max_len) return;
    for (int sym = 0; sym < dfa.symbol_count; ++sym) {
      int t = dfa.next(state, sym);
      if (!live[t]) continue;
      prefix.push_back(alphabet.representative(sym));
      walk(t);
      prefix.pop_back();
    }
  };
  if (live[dfa.start]) walk(dfa.start);
  return out;
}

void dump_dfa(std::ostream& out, const Dfa& dfa, const Alphabet& alphabet) {
  out << "# dfa states=" << dfa.state_count << " symbols=" << dfa.symbol_count << " start=" << dfa.start << "\n";
  for (int a = 0; a < alphabet.size(); ++a) {
    out << "symbol " << a << " " << render(Regex::char_class(alphabet.minterm(a))) << "\n";
  }
  for (int s = 0; s < dfa.state_count; ++s) {
    out << "state " << s << (dfa.accepting[s] ? " accept" : " reject") << ":";
    for (int a = 0; a < dfa.symbol_count; ++a) out << " " << dfa.next(s, a);
    out << "\n";
  }
}

Equivalence check_equivalence(std::string_view p, std::string_view q, const Budget& budget) {
  auto parse_side = [](std::string_view src, Side side) {
    try {
      return parse(src);
    } catch (const RegexError& e) {
      throw DfaEqualParseError(side, e);
    }
  };
  Regex left = parse_side(p, Side::Left);
  Regex right = parse_side(q, Side::Right);
  std::vector<CharSet> classes = mentioned_classes(left);
  for (const auto& c : mentioned_classes(right)) classes.push_back(c);
  Equivalence eq{.equal = false, .witness = {}, .alphabet = minterm_alphabet(classes), .left = {}, .right = {}};
  eq.left = compile_dfa(left, eq.alphabet, budget);
  eq.right = compile_dfa(right, eq.alphabet, budget);
  eq.equal = equivalent(eq.left, eq.right, eq.alphabet, &eq.witness);
  return eq;
}

}  // namespace deepregex
