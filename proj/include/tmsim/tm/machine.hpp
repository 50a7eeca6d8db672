#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tmsim/errors.hpp"

namespace tmsim {

enum class Move { L, R, S };

inline char move_char(Move m) { return m == Move::L ? 'L' : m == Move::R ? 'R' : 'S'; }

struct Transition {
  int next_state;  // 1..m
  int write;       // 0 = blank, 1..k-1 = alphabet
  Move move;
  bool operator==(const Transition&) const = default;
};

/// Single-tape deterministic machine. States are numbered 1..m and symbols 0..k-1
/// in declaration order, with 0 the blank.
struct TuringMachine {
  std::vector<std::string> states;
  std::vector<std::string> alphabet;
  std::string blank = "B";
  int start = 1;
  int halt = 1;
  std::vector<std::optional<Transition>> delta;  // index (q-1)*k + symbol

  int m() const { return static_cast<int>(states.size()); }
  int k() const { return static_cast<int>(alphabet.size()) + 1; }

  const Transition& rule(int q, int s) const {
    const auto& t = delta.at(static_cast<std::size_t>((q - 1) * k() + s));
    if (!t) throw ValidationError("missing delta entry for (" + states.at(q - 1) + ", " + symbol_name(s) + ")");
    return *t;
  }

  std::string symbol_name(int s) const { return s == 0 ? blank : alphabet.at(s - 1); }

  std::optional<int> symbol_id(const std::string& name) const {
    if (name == blank) return 0;
    for (std::size_t i = 0; i < alphabet.size(); ++i)
      if (alphabet[i] == name) return static_cast<int>(i) + 1;
    return std::nullopt;
  }
  std::optional<int> state_id(const std::string& name) const {
    for (std::size_t i = 0; i < states.size(); ++i)
      if (states[i] == name) return static_cast<int>(i) + 1;
    return std::nullopt;
  }

  /// Text form accepted by parse_tm.
  std::string to_text() const {
    std::ostringstream os;
    os << "states:";
    for (auto& s : states) os << " " << s;
    os << "\nalphabet:";
    for (auto& a : alphabet) os << " " << a;
    os << "\nblank: " << blank << "\nstart: " << states[start - 1] << "\nhalt: " << states[halt - 1] << "\n";
    for (int q = 1; q <= m(); ++q)
      for (int s = 0; s < k(); ++s) {
        const auto& t = delta[(q - 1) * k() + s];
        if (!t) continue;
        os << "delta: " << states[q - 1] << " " << symbol_name(s) << " -> " << states[t->next_state - 1] << " "
           << symbol_name(t->write) << " " << move_char(t->move) << "\n";
      }
    return os.str();
  }
};

using Word = std::vector<int>;

/// Tape  ...B v_p ... v_2 v_1 u_1 u_2 ... u_n B...  with the head on v_1 (blank when v is empty).
/// Both words are stored without blanks at their far ends.
struct Configuration {
  Word u;
  Word v;
  int q = 1;
  bool operator==(const Configuration&) const = default;
};

namespace detail {

inline void strip_far_end(Word& w) {
  while (!w.empty() && w.back() == 0) w.pop_back();
}

struct Cursor {
  std::size_t line;
  std::vector<std::pair<std::string, std::size_t>> tokens;  // token, 1-based column
};

inline Cursor tokenize(const std::string& raw, std::size_t line) {
  Cursor c{line, {}};
  std::string text = raw.substr(0, raw.find('#'));
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    c.tokens.emplace_back(text.substr(i, j - i), i + 1);
    i = j;
  }
  return c;
}

}  // namespace detail

inline void validate_machine(const TuringMachine& M) {
  if (M.states.empty()) throw ValidationError("no states declared");
  if (M.start < 1 || M.start > M.m() || M.halt < 1 || M.halt > M.m()) throw ValidationError("bad start/halt state");
  if (M.delta.size() != static_cast<std::size_t>(M.m() * M.k())) throw ValidationError("delta table has wrong size");
  bool any = std::any_of(M.delta.begin(), M.delta.end(), [](auto& t) { return t.has_value(); });
  if (!any) throw ValidationError("empty delta section");
  for (int q = 1; q <= M.m(); ++q)
    for (int s = 0; s < M.k(); ++s)
      if (!M.delta[(q - 1) * M.k() + s])
        throw ValidationError("missing delta entry for (" + M.states[q - 1] + ", " + M.symbol_name(s) + ")");
  for (int s = 0; s < M.k(); ++s) {
    const auto& t = *M.delta[(M.halt - 1) * M.k() + s];
    if (!(t.next_state == M.halt && t.write == s && t.move == Move::S))
      throw ValidationError("halt state is not absorbing on symbol " + M.symbol_name(s));
  }
}

/// Parses the line-oriented machine format (states/alphabet/blank/start/halt/delta).
inline TuringMachine parse_tm(const std::string& text) {
  TuringMachine M;
  std::vector<detail::Cursor> deltas;
  std::optional<std::string> start_name, halt_name;
  bool seen_states = false, seen_alphabet = false;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto cur = detail::tokenize(line, lineno);
    if (cur.tokens.empty()) continue;
    const std::string& key = cur.tokens[0].first;
    auto need = [&](std::size_t n) {
      if (cur.tokens.size() != n)
        throw ParseError("'" + key + "' expects " + std::to_string(n - 1) + " value(s)", lineno,
                         cur.tokens.size() > n ? cur.tokens[n].second : line.size() + 1);
    };
    if (key == "states:") {
      if (cur.tokens.size() < 2) throw ParseError("'states:' needs at least one state", lineno, line.size() + 1);
      for (std::size_t i = 1; i < cur.tokens.size(); ++i) {
        if (std::find(M.states.begin(), M.states.end(), cur.tokens[i].first) != M.states.end())
          throw ParseError("duplicate state '" + cur.tokens[i].first + "'", lineno, cur.tokens[i].second);
        M.states.push_back(cur.tokens[i].first);
      }
      seen_states = true;
    } else if (key == "alphabet:") {
      for (std::size_t i = 1; i < cur.tokens.size(); ++i) {
        if (std::find(M.alphabet.begin(), M.alphabet.end(), cur.tokens[i].first) != M.alphabet.end())
          throw ParseError("duplicate symbol '" + cur.tokens[i].first + "'", lineno, cur.tokens[i].second);
        M.alphabet.push_back(cur.tokens[i].first);
      }
      seen_alphabet = true;
    } else if (key == "blank:") {
      need(2);
      M.blank = cur.tokens[1].first;
    } else if (key == "start:") {
      need(2);
      start_name = cur.tokens[1].first;
    } else if (key == "halt:") {
      need(2);
      halt_name = cur.tokens[1].first;
    } else if (key == "delta:") {
      deltas.push_back(cur);
    } else {
      throw ParseError("unknown key '" + key + "'", lineno, cur.tokens[0].second);
    }
  }
  if (!seen_states) throw ValidationError("missing 'states:' line");
  if (!seen_alphabet) throw ValidationError("missing 'alphabet:' line");
  if (!start_name) throw ValidationError("missing 'start:' line");
  if (!halt_name) throw ValidationError("missing 'halt:' line");
  if (std::find(M.alphabet.begin(), M.alphabet.end(), M.blank) != M.alphabet.end())
    throw ValidationError("blank symbol '" + M.blank + "' must not belong to the alphabet");
  auto st = M.state_id(*start_name);
  auto ht = M.state_id(*halt_name);
  if (!st) throw ValidationError("start state '" + *start_name + "' is not declared");
  if (!ht) throw ValidationError("halt state '" + *halt_name + "' is not declared");
  M.start = *st;
  M.halt = *ht;

  M.delta.assign(static_cast<std::size_t>(M.m() * M.k()), std::nullopt);
  for (const auto& d : deltas) {
    const auto& tk = d.tokens;
    if (tk.size() != 7 || tk[3].first != "->")
      throw ParseError("expected 'delta: STATE SYMBOL -> STATE SYMBOL MOVE'", d.line, tk.size() > 1 ? tk[1].second : 1);
    auto q = M.state_id(tk[1].first);
    if (!q) throw ParseError("unknown state '" + tk[1].first + "'", d.line, tk[1].second);
    auto s = M.symbol_id(tk[2].first);
    if (!s) throw ParseError("unknown symbol '" + tk[2].first + "'", d.line, tk[2].second);
    auto q2 = M.state_id(tk[4].first);
    if (!q2) throw ParseError("unknown state '" + tk[4].first + "'", d.line, tk[4].second);
    auto s2 = M.symbol_id(tk[5].first);
    if (!s2) throw ParseError("unknown symbol '" + tk[5].first + "'", d.line, tk[5].second);
    Move mv;
    if (tk[6].first == "L")
      mv = Move::L;
    else if (tk[6].first == "R")
      mv = Move::R;
    else if (tk[6].first == "S")
      mv = Move::S;
    else
      throw ParseError("move must be L, R or S", d.line, tk[6].second);
    auto& slot = M.delta[(*q - 1) * M.k() + *s];
    if (slot) throw ValidationError("duplicate delta entry for (" + tk[1].first + ", " + tk[2].first + ")");
    slot = Transition{*q2, *s2, mv};
  }
  validate_machine(M);
  return M;
}

/// Word over the machine's symbols. Single-character symbols may be written
/// without separators; otherwise symbols are whitespace separated.
inline Word parse_word(const TuringMachine& M, const std::string& text) {
  Word w;
  bool single = std::all_of(M.alphabet.begin(), M.alphabet.end(), [](auto& a) { return a.size() == 1; }) &&
                M.blank.size() == 1;
  if (single && text.find(' ') == std::string::npos) {
    for (char c : text) {
      auto id = M.symbol_id(std::string(1, c));
      if (!id) throw ValidationError(std::string("unknown symbol '") + c + "' in word");
      w.push_back(*id);
    }
  } else {
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
      auto id = M.symbol_id(tok);
      if (!id) throw ValidationError("unknown symbol '" + tok + "' in word");
      w.push_back(*id);
    }
  }
  return w;
}

inline std::string word_text(const TuringMachine& M, const Word& w) {
  std::string out;
  bool single = std::all_of(M.alphabet.begin(), M.alphabet.end(), [](auto& a) { return a.size() == 1; }) &&
                M.blank.size() == 1;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!single && i) out += ' ';
    out += M.symbol_name(w[i]);
  }
  return out;
}

/// Input placed to the right of the head, which starts on the blank cell before it.
inline Configuration initial_config(const TuringMachine& M, const Word& input) {
  Configuration c;
  c.u = input;
  detail::strip_far_end(c.u);
  c.q = M.start;
  return c;
}

inline bool is_halted(const TuringMachine& M, const Configuration& c) { return c.q == M.halt; }

inline int head_symbol(const Configuration& c) { return c.v.empty() ? 0 : c.v.front(); }

/// Tape contents left to right with far-end blanks removed.
inline Word tape_word(const Configuration& c) {
  Word w(c.v.rbegin(), c.v.rend());
  w.insert(w.end(), c.u.begin(), c.u.end());
  std::size_t a = 0;
  while (a < w.size() && w[a] == 0) ++a;
  w.erase(w.begin(), w.begin() + static_cast<long>(a));
  detail::strip_far_end(w);
  return w;
}

inline std::size_t nonblank_count(const Configuration& c) {
  return static_cast<std::size_t>(std::count_if(c.u.begin(), c.u.end(), [](int s) { return s != 0; }) +
                                  std::count_if(c.v.begin(), c.v.end(), [](int s) { return s != 0; }));
}

inline void check_config(const TuringMachine& M, const Configuration& c) {
  if (c.q < 1 || c.q > M.m()) throw DecodeError("state index out of range");
  for (int s : c.u)
    if (s < 0 || s >= M.k()) throw DecodeError("symbol out of range");
  for (int s : c.v)
    if (s < 0 || s >= M.k()) throw DecodeError("symbol out of range");
}

/// One transition; the head move shifts one cell between u and v.
inline Configuration step(const TuringMachine& M, const Configuration& c) {
  const Transition& t = M.rule(c.q, head_symbol(c));
  Configuration n = c;
  n.q = t.next_state;
  if (n.v.empty()) n.v.push_back(0);
  n.v.front() = t.write;
  switch (t.move) {
    case Move::S:
      break;
    case Move::R: {
      int next = n.u.empty() ? 0 : n.u.front();
      if (!n.u.empty()) n.u.erase(n.u.begin());
      n.v.insert(n.v.begin(), next);
      break;
    }
    case Move::L: {
      n.u.insert(n.u.begin(), n.v.front());
      n.v.erase(n.v.begin());
      break;
    }
  }
  detail::strip_far_end(n.u);
  detail::strip_far_end(n.v);
  return n;
}

inline std::vector<Configuration> run_n(const TuringMachine& M, const Configuration& c0, std::size_t n) {
  std::vector<Configuration> out;
  out.reserve(n + 1);
  out.push_back(c0);
  for (std::size_t i = 0; i < n; ++i) out.push_back(step(M, out.back()));
  return out;
}

/// Steps until halting or the budget runs out; returns the number of steps taken.
inline std::optional<std::size_t> halting_time(const TuringMachine& M, Configuration c, std::size_t budget) {
  for (std::size_t i = 0; i <= budget; ++i) {
    if (is_halted(M, c)) return i;
    c = step(M, c);
  }
  return std::nullopt;
}

namespace machines {

inline const char* unary_successor = R"(# unary successor: writes one more 1 in front of the input
states: q0 qh
alphabet: 1
blank: B
start: q0
halt: qh
delta: q0 1 -> q0 1 R
delta: q0 B -> qh 1 S
delta: qh 1 -> qh 1 S
delta: qh B -> qh B S
)";

// Two-state busy beaver plus its halting state: 3 states, symbols {B, 1}.
inline const char* busy_beaver_2 = R"(# two-state busy beaver, halts after 6 steps with four 1s
states: A B H
alphabet: 1
blank: 0
start: A
halt: H
delta: A 0 -> B 1 R
delta: A 1 -> B 1 L
delta: B 0 -> A 1 L
delta: B 1 -> H 1 R
delta: H 0 -> H 0 S
delta: H 1 -> H 1 S
)";

// Binary increment, least significant bit first; carries move right.
inline const char* binary_increment = R"(# binary increment, least significant bit first
states: scan carry done
alphabet: 0 1
blank: B
start: scan
halt: done
delta: scan B -> carry B R
delta: scan 0 -> carry 0 R
delta: scan 1 -> carry 1 R
delta: carry 1 -> carry 0 R
delta: carry 0 -> done 1 S
delta: carry B -> done 1 S
delta: done B -> done B S
delta: done 0 -> done 0 S
delta: done 1 -> done 1 S
)";

}  // namespace machines

}  // namespace tmsim
