#include "pepevolve/chuckles.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

namespace pepevolve::chuckles {

namespace {

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_digit_char(char c) { return c >= '0' && c <= '9'; }

const std::set<std::string> kTwoLetterElements = {
    "Cl", "Br", "Si", "Se", "Na", "Ca", "Li", "Mg", "Zn", "Fe",
    "Cu", "Mn", "Al", "As", "Sn", "Ag", "Au", "Te", "Pt", "Pd"};

bool placeholder_piece(std::string_view piece) {
  if (piece == "?") return true;
  if (piece.size() == 1) return std::isalpha(static_cast<unsigned char>(piece[0])) != 0;
  if (piece.size() == 2)
    return std::isalpha(static_cast<unsigned char>(piece[0])) != 0 && is_digit_char(piece[1]);
  return false;
}

std::string join_pieces(const std::vector<std::string>& pieces) {
  std::string out;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (i) out += '|';
    out += pieces[i];
  }
  return out;
}

std::size_t first_atom_index(const Monomer& m) {
  for (std::size_t i = 0; i < m.tokens.size(); ++i)
    if (is_atom(m.tokens[i])) return i;
  return m.tokens.size();
}

// Index of the last atom token C that is followed, apart from ring-closure
// tokens, by exactly "(=O)" at the end of the monomer.
std::optional<std::size_t> final_carbonyl_index(const Monomer& m) {
  const auto& t = m.tokens;
  std::optional<std::size_t> found;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!is_atom(t[i]) || element_of(t[i]) != "C") continue;
    std::size_t j = i + 1;
    while (j < t.size() && t[j].kind == TokenKind::RingClosure) ++j;
    if (j + 4 == t.size() && t[j].kind == TokenKind::BranchOpen &&
        t[j + 1].kind == TokenKind::Bond && t[j + 1].text == "=" &&
        is_atom(t[j + 2]) && element_of(t[j + 2]) == "O" &&
        t[j + 3].kind == TokenKind::BranchClose) {
      found = i;
    }
  }
  return found;
}

// Insertion point for a ring-closure label bound to the atom at `atom_idx`:
// directly after the atom and any closure tokens already attached to it.
std::size_t closure_insert_pos(const std::vector<Token>& tokens, std::size_t atom_idx) {
  std::size_t pos = atom_idx + 1;
  while (pos < tokens.size() && tokens[pos].kind == TokenKind::RingClosure) ++pos;
  return pos;
}

std::string pick_free_label(const std::set<std::string>& used) {
  for (int d = 2; d <= 9; ++d) {
    std::string cand = std::to_string(d);
    if (!used.count(cand)) return cand;
  }
  for (int d = 10; d <= 99; ++d) {
    std::string cand = "%" + std::to_string(d);
    if (!used.count(cand)) return cand;
  }
  throw ParseError("ring-closure labels exhausted", 0);
}

std::string pick_free_label_from_one(const std::set<std::string>& used) {
  for (int d = 1; d <= 9; ++d) {
    std::string cand = std::to_string(d);
    if (!used.count(cand)) return cand;
  }
  for (int d = 10; d <= 99; ++d) {
    std::string cand = "%" + std::to_string(d);
    if (!used.count(cand)) return cand;
  }
  throw ParseError("ring-closure labels exhausted", 0);
}

}  // namespace

ParseError::ParseError(const std::string& what, std::size_t pos)
    : std::runtime_error(what), position(pos) {}

std::vector<Token> tokenize(std::string_view s) {
  if (s.empty()) throw ParseError("empty input", 0);
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = s.size();
  while (i < n) {
    const char c = s[i];
    if (c == '[') {
      const auto end = s.find(']', i);
      if (end == std::string_view::npos) throw ParseError("unterminated bracket atom", i);
      out.push_back({TokenKind::BracketAtom, std::string(s.substr(i, end - i + 1))});
      i = end + 1;
    } else if (c == '%') {
      if (i + 2 >= n || !is_digit_char(s[i + 1]) || !is_digit_char(s[i + 2]))
        throw ParseError("'%' ring closure requires two digits", i);
      out.push_back({TokenKind::RingClosure, std::string(s.substr(i, 3))});
      i += 3;
    } else if (is_digit_char(c)) {
      out.push_back({TokenKind::RingClosure, std::string(1, c)});
      ++i;
    } else if (c == '(') {
      out.push_back({TokenKind::BranchOpen, "("});
      ++i;
    } else if (c == ')') {
      out.push_back({TokenKind::BranchClose, ")"});
      ++i;
    } else if (c == '|') {
      out.push_back({TokenKind::Separator, "|"});
      ++i;
    } else if (c == '?') {
      out.push_back({TokenKind::Mask, "?"});
      ++i;
    } else if (c == '-' || c == '=' || c == '#' || c == ':' || c == '/' || c == '\\') {
      out.push_back({TokenKind::Bond, std::string(1, c)});
      ++i;
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      if (i + 1 < n && is_upper(c) && is_lower(s[i + 1])) {
        std::string two{c, s[i + 1]};
        if (two == "Cl" || two == "Br") {
          out.push_back({TokenKind::Atom, two});
          i += 2;
          continue;
        }
      }
      out.push_back({TokenKind::Atom, std::string(1, c)});
      ++i;
    } else {
      throw ParseError(std::string("unknown character '") + c + "'", i);
    }
  }
  return out;
}

std::string detokenize(const std::vector<Token>& tokens) {
  std::string out;
  for (const auto& t : tokens) out += t.text;
  return out;
}

bool is_atom(const Token& t) {
  return t.kind == TokenKind::Atom || t.kind == TokenKind::BracketAtom;
}

bool is_aromatic_atom(const Token& t) {
  if (t.kind == TokenKind::Atom) return is_lower(t.text[0]);
  if (t.kind == TokenKind::BracketAtom) return parse_bracket(t.text).aromatic;
  return false;
}

std::string element_of(const Token& t) {
  if (t.kind == TokenKind::Atom) {
    std::string el = t.text;
    el[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(el[0])));
    return el;
  }
  if (t.kind == TokenKind::BracketAtom) return parse_bracket(t.text).element;
  return "";
}

BracketInfo parse_bracket(const std::string& text) {
  if (text.size() < 3 || text.front() != '[' || text.back() != ']')
    throw ParseError("malformed bracket atom '" + text + "'", 0);
  const std::string guts = text.substr(1, text.size() - 2);
  std::size_t i = 0;
  while (i < guts.size() && is_digit_char(guts[i])) ++i;  // isotope
  if (i >= guts.size() || std::isalpha(static_cast<unsigned char>(guts[i])) == 0)
    throw ParseError("bracket atom missing element: '" + text + "'", 0);

  BracketInfo info;
  info.aromatic = is_lower(guts[i]);
  std::string el(1, guts[i]);
  if (is_upper(guts[i]) && i + 1 < guts.size() && is_lower(guts[i + 1])) {
    std::string two{guts[i], guts[i + 1]};
    if (kTwoLetterElements.count(two)) {
      el = two;
      ++i;
    }
  }
  ++i;
  el[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(el[0])));
  info.element = el;

  while (i < guts.size()) {
    const char c = guts[i];
    if (c == 'H') {
      ++i;
      int count = 1;
      if (i < guts.size() && is_digit_char(guts[i])) {
        count = 0;
        while (i < guts.size() && is_digit_char(guts[i])) count = count * 10 + (guts[i++] - '0');
      }
      info.explicit_h = count;
    } else if (c == '+' || c == '-') {
      const int sign = c == '+' ? 1 : -1;
      ++i;
      int mag = 1;
      if (i < guts.size() && is_digit_char(guts[i])) {
        mag = 0;
        while (i < guts.size() && is_digit_char(guts[i])) mag = mag * 10 + (guts[i++] - '0');
      } else {
        while (i < guts.size() && guts[i] == c) {
          ++mag;
          ++i;
        }
      }
      info.charge = sign * mag;
    } else if (c == '@' || std::isalnum(static_cast<unsigned char>(c)) != 0) {
      // chirality markers and their decorations are opaque
      ++i;
    } else {
      throw ParseError("unsupported bracket content '" + text + "'", 0);
    }
  }
  return info;
}

std::string Monomer::raw() const { return detokenize(tokens); }

bool Monomer::is_mask() const {
  return tokens.size() == 1 && tokens[0].kind == TokenKind::Mask;
}

bool operator==(const Peptide& a, const Peptide& b) { return render(a) == render(b); }

Peptide parse_peptide(std::string_view s, ClosurePolicy policy) {
  if (s.empty()) throw ParseError("empty input", 0);

  struct Piece {
    std::size_t offset;
    std::string_view text;
  };
  std::vector<Piece> pieces;
  std::size_t start = 0;
  bool in_bracket = false;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || (s[i] == '|' && !in_bracket)) {
      pieces.push_back({start, s.substr(start, i - start)});
      start = i + 1;
    } else if (s[i] == '[') {
      in_bracket = true;
    } else if (s[i] == ']') {
      in_bracket = false;
    }
  }
  for (const auto& piece : pieces)
    if (piece.text.empty()) throw ParseError("empty monomer between separators", piece.offset);

  Peptide p;

  const bool all_placeholder = std::all_of(pieces.begin(), pieces.end(), [](const Piece& x) {
    return placeholder_piece(x.text);
  });
  if (all_placeholder) {
    p.placeholder = true;
    for (const auto& piece : pieces) {
      Monomer m;
      if (piece.text == "?")
        m.tokens.push_back({TokenKind::Mask, "?"});
      else
        m.tokens.push_back({TokenKind::Atom, std::string(piece.text)});
      p.monomers.push_back(std::move(m));
    }
    return p;
  }

  for (const auto& piece : pieces) {
    std::vector<Token> tokens;
    try {
      tokens = tokenize(piece.text);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), piece.offset + e.position);
    }
    if (tokens.size() == 1 && tokens[0].kind == TokenKind::Mask) {
      p.monomers.push_back({std::move(tokens)});
      continue;
    }
    int depth = 0;
    for (const auto& t : tokens) {
      if (t.kind == TokenKind::Mask)
        throw ParseError("mask token must replace a whole monomer", piece.offset);
      if (t.kind == TokenKind::BranchOpen) ++depth;
      if (t.kind == TokenKind::BranchClose && --depth < 0)
        throw ParseError("unbalanced branch in monomer", piece.offset);
    }
    if (depth != 0) throw ParseError("unbalanced branch in monomer", piece.offset);
    p.monomers.push_back({std::move(tokens)});
  }

  // Pair ring-closure labels in order of appearance; labels may be reused
  // once closed.
  std::vector<std::pair<std::string, ClosureEndpoint>> open;
  for (std::size_t mi = 0; mi < p.monomers.size(); ++mi) {
    const auto& toks = p.monomers[mi].tokens;
    for (std::size_t ti = 0; ti < toks.size(); ++ti) {
      if (toks[ti].kind != TokenKind::RingClosure) continue;
      const std::string& label = toks[ti].text;
      auto it = std::find_if(open.begin(), open.end(),
                             [&](const auto& o) { return o.first == label; });
      if (it != open.end()) {
        p.closures.push_back({label, it->second, {mi, ti}});
        open.erase(it);
      } else {
        open.emplace_back(label, ClosureEndpoint{mi, ti});
      }
    }
  }
  if (!open.empty()) {
    if (policy == ClosurePolicy::Strict)
      throw ParseError("unbalanced ring-closure label '" + open.front().first + "'", 0);
    p.dangling = std::move(open);
  }
  return p;
}

Monomer parse_monomer(std::string_view s) {
  if (s.empty()) throw ParseError("empty monomer", 0);
  if (s == "?") throw ParseError("mask token is not a monomer", 0);
  if (placeholder_piece(s)) {
    Monomer m;
    m.tokens.push_back({TokenKind::Atom, std::string(s)});
    return m;
  }
  auto tokens = tokenize(s);
  int depth = 0;
  std::vector<std::string> open;
  for (const auto& t : tokens) {
    switch (t.kind) {
      case TokenKind::Separator:
        throw ParseError("monomer may not contain a separator", 0);
      case TokenKind::Mask:
        throw ParseError("monomer may not contain a mask token", 0);
      case TokenKind::BranchOpen:
        ++depth;
        break;
      case TokenKind::BranchClose:
        if (--depth < 0) throw ParseError("unbalanced branch in monomer", 0);
        break;
      case TokenKind::RingClosure: {
        auto it = std::find(open.begin(), open.end(), t.text);
        if (it != open.end())
          open.erase(it);
        else
          open.push_back(t.text);
        break;
      }
      default:
        break;
    }
  }
  if (depth != 0) throw ParseError("unbalanced branch in monomer", 0);
  if (!open.empty())
    throw ParseError("ring-closure label '" + open.front() + "' does not pair within the monomer", 0);
  return {std::move(tokens)};
}

std::string render(const Peptide& p) {
  std::string out;
  for (std::size_t i = 0; i < p.monomers.size(); ++i) {
    if (i) out += '|';
    out += p.monomers[i].raw();
  }
  return out;
}

MaskedPeptide mask(const Peptide& p, std::vector<std::size_t> indices) {
  if (indices.empty()) throw std::invalid_argument("mask: index set is empty");
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  if (indices.back() >= p.length())
    throw std::out_of_range("mask: index " + std::to_string(indices.back()) +
                            " out of range for length " + std::to_string(p.length()));
  return {p, std::move(indices)};
}

std::string render(const MaskedPeptide& m) {
  std::string out;
  std::size_t next = 0;
  for (std::size_t i = 0; i < m.base.length(); ++i) {
    if (i) out += '|';
    if (next < m.masked.size() && m.masked[next] == i) {
      out += '?';
      ++next;
    } else {
      out += m.base.monomers[i].raw();
    }
  }
  return out;
}

std::vector<ClosureAttachment> closure_attachments(const Peptide& p) {
  std::vector<ClosureAttachment> out;
  bool have_cur = false;
  ClosureEndpoint cur;
  std::vector<std::pair<bool, ClosureEndpoint>> stack;
  for (std::size_t mi = 0; mi < p.monomers.size(); ++mi) {
    const auto& toks = p.monomers[mi].tokens;
    for (std::size_t ti = 0; ti < toks.size(); ++ti) {
      const auto& t = toks[ti];
      switch (t.kind) {
        case TokenKind::Atom:
        case TokenKind::BracketAtom:
          cur = {mi, ti};
          have_cur = true;
          break;
        case TokenKind::BranchOpen:
          stack.emplace_back(have_cur, cur);
          break;
        case TokenKind::BranchClose:
          if (stack.empty()) throw ParseError("unbalanced branch", 0);
          std::tie(have_cur, cur) = stack.back();
          stack.pop_back();
          break;
        case TokenKind::RingClosure:
          if (!have_cur) throw ParseError("ring closure before any atom", 0);
          out.push_back({{mi, ti}, cur});
          break;
        default:
          break;
      }
    }
  }
  return out;
}

namespace {

const ClosurePair* find_macro_closure(const Peptide& p) {
  const ClosurePair* cross = nullptr;
  std::size_t cross_count = 0;
  for (const auto& c : p.closures) {
    if (c.first.monomer != c.second.monomer) {
      cross = &c;
      ++cross_count;
    }
  }
  if (cross_count != 1 || p.length() < 2) return nullptr;
  const std::size_t lo = std::min(cross->first.monomer, cross->second.monomer);
  const std::size_t hi = std::max(cross->first.monomer, cross->second.monomer);
  if (lo != 0 || hi != p.length() - 1) return nullptr;

  const auto attachments = closure_attachments(p);
  auto attachment_of = [&](const ClosureEndpoint& e) -> const ClosureEndpoint* {
    for (const auto& a : attachments)
      if (a.closure == e) return &a.atom;
    return nullptr;
  };
  const ClosureEndpoint& head = cross->first.monomer == 0 ? cross->first : cross->second;
  const ClosureEndpoint& tail = cross->first.monomer == 0 ? cross->second : cross->first;

  const ClosureEndpoint* head_atom = attachment_of(head);
  const ClosureEndpoint* tail_atom = attachment_of(tail);
  if (!head_atom || !tail_atom) return nullptr;

  const auto& first = p.monomers.front();
  if (head_atom->monomer != 0 || head_atom->token != first_atom_index(first)) return nullptr;
  if (element_of(first.tokens[head_atom->token]) != "N") return nullptr;

  const auto carbonyl = final_carbonyl_index(p.monomers.back());
  if (!carbonyl || tail_atom->monomer != p.length() - 1 || tail_atom->token != *carbonyl)
    return nullptr;
  return cross;
}

}  // namespace

TopologyKind topology(const Peptide& p) {
  if (p.placeholder) return TopologyKind::Linear;
  bool any_cross = false;
  for (const auto& c : p.closures)
    if (c.first.monomer != c.second.monomer) any_cross = true;
  if (!any_cross) return TopologyKind::Linear;
  return find_macro_closure(p) ? TopologyKind::HeadToTailCyclic : TopologyKind::OtherCyclic;
}

Peptide shift(const Peptide& p, std::size_t offset) {
  const std::size_t L = p.length();
  if (offset >= L)
    throw std::out_of_range("shift: offset " + std::to_string(offset) +
                            " out of range for length " + std::to_string(L));
  if (offset == 0) return p;

  const ClosurePair* macro = p.placeholder ? nullptr : find_macro_closure(p);

  std::vector<std::vector<Token>> toks;
  toks.reserve(L);
  for (const auto& m : p.monomers) toks.push_back(m.tokens);

  if (macro) {
    toks[macro->first.monomer].erase(toks[macro->first.monomer].begin() +
                                     static_cast<std::ptrdiff_t>(macro->first.token));
    toks[macro->second.monomer].erase(toks[macro->second.monomer].begin() +
                                      static_cast<std::ptrdiff_t>(macro->second.token));
  }

  std::rotate(toks.begin(), toks.begin() + static_cast<std::ptrdiff_t>(offset), toks.end());

  if (macro) {
    std::set<std::string> used;
    for (const auto& mt : toks)
      for (const auto& t : mt)
        if (t.kind == TokenKind::RingClosure) used.insert(t.text);
    const std::string label = pick_free_label(used);

    auto& first = toks.front();
    Monomer first_m{first};
    const std::size_t fa = first_atom_index(first_m);
    if (fa == first.size() || element_of(first[fa]) != "N")
      throw ParseError("shift: new first monomer has no leading backbone nitrogen", 0);
    first.insert(first.begin() + static_cast<std::ptrdiff_t>(closure_insert_pos(first, fa)),
                 Token{TokenKind::RingClosure, label});

    auto& last = toks.back();
    Monomer last_m{last};
    const auto carbonyl = final_carbonyl_index(last_m);
    if (!carbonyl)
      throw ParseError("shift: new last monomer has no final carbonyl carbon", 0);
    last.insert(last.begin() + static_cast<std::ptrdiff_t>(closure_insert_pos(last, *carbonyl)),
                Token{TokenKind::RingClosure, label});
  }

  std::vector<std::string> pieces;
  pieces.reserve(L);
  for (const auto& mt : toks) pieces.push_back(detokenize(mt));
  return parse_peptide(join_pieces(pieces), ClosurePolicy::AllowDangling);
}

Peptide substitute(const MaskedPeptide& m, const std::vector<Monomer>& replacements) {
  const Peptide& base = m.base;
  if (replacements.size() != m.masked.size())
    throw std::invalid_argument("substitute: replacement count does not match masked set");

  auto is_masked = [&](std::size_t i) {
    return std::binary_search(m.masked.begin(), m.masked.end(), i);
  };

  std::vector<std::vector<Token>> toks;
  toks.reserve(base.length());
  for (const auto& mono : base.monomers) toks.push_back(mono.tokens);
  for (std::size_t k = 0; k < m.masked.size(); ++k) toks[m.masked[k]] = replacements[k].tokens;

  // Cross-monomer closures with an endpoint in a replaced monomer must be
  // re-attached; labels of pairs spanning a replaced monomer may not be
  // reused inside it.
  struct Reattach {
    std::size_t monomer;
    bool n_side;
    std::string label;
  };
  std::vector<Reattach> reattach;
  std::set<std::string> spanning;

  const auto attachments = closure_attachments(base);
  auto attachment_of = [&](const ClosureEndpoint& e) -> const ClosureEndpoint* {
    for (const auto& a : attachments)
      if (a.closure == e) return &a.atom;
    return nullptr;
  };

  for (const auto& c : base.closures) {
    const std::size_t lo = std::min(c.first.monomer, c.second.monomer);
    const std::size_t hi = std::max(c.first.monomer, c.second.monomer);
    if (lo != hi) {
      for (std::size_t i = lo + 1; i < hi; ++i)
        if (is_masked(i)) spanning.insert(c.label);
    }
    for (const ClosureEndpoint* e : {&c.first, &c.second}) {
      if (!is_masked(e->monomer)) continue;
      if (c.first.monomer == c.second.monomer) continue;  // vanishes with the monomer
      const ClosureEndpoint* atom = attachment_of(*e);
      bool n_side = false;
      bool ok = false;
      if (atom && e->monomer == 0 &&
          atom->token == first_atom_index(base.monomers.front()) &&
          element_of(base.monomers.front().tokens[atom->token]) == "N") {
        n_side = true;
        ok = true;
      } else if (atom && e->monomer == base.length() - 1) {
        const auto carbonyl = final_carbonyl_index(base.monomers.back());
        if (carbonyl && atom->token == *carbonyl) ok = true;
      }
      if (!ok)
        throw std::invalid_argument("substitute: position " + std::to_string(e->monomer) +
                                    " carries ring-closure '" + c.label +
                                    "' that cannot be re-attached");
      reattach.push_back({e->monomer, n_side, c.label});
      spanning.insert(c.label);
    }
  }

  // Remap a replacement's internal labels that collide with spanning ones.
  if (!spanning.empty()) {
    std::set<std::string> used;
    for (const auto& mt : toks)
      for (const auto& t : mt)
        if (t.kind == TokenKind::RingClosure) used.insert(t.text);
    used.insert(spanning.begin(), spanning.end());
    for (std::size_t idx : m.masked) {
      auto& mt = toks[idx];
      std::set<std::string> own;
      for (const auto& t : mt)
        if (t.kind == TokenKind::RingClosure) own.insert(t.text);
      for (const auto& label : own) {
        if (!spanning.count(label)) continue;
        const std::string fresh = pick_free_label_from_one(used);
        used.insert(fresh);
        for (auto& t : mt)
          if (t.kind == TokenKind::RingClosure && t.text == label) t.text = fresh;
      }
    }
  }

  for (const auto& r : reattach) {
    auto& mt = toks[r.monomer];
    Monomer mono{mt};
    if (r.n_side) {
      const std::size_t fa = first_atom_index(mono);
      if (fa == mt.size() || element_of(mt[fa]) != "N")
        throw std::invalid_argument(
            "substitute: replacement has no leading backbone nitrogen for closure re-attachment");
      mt.insert(mt.begin() + static_cast<std::ptrdiff_t>(closure_insert_pos(mt, fa)),
                Token{TokenKind::RingClosure, r.label});
    } else {
      const auto carbonyl = final_carbonyl_index(mono);
      if (!carbonyl)
        throw std::invalid_argument(
            "substitute: replacement has no final carbonyl carbon for closure re-attachment");
      mt.insert(mt.begin() + static_cast<std::ptrdiff_t>(closure_insert_pos(mt, *carbonyl)),
                Token{TokenKind::RingClosure, r.label});
    }
  }

  std::vector<std::string> pieces;
  pieces.reserve(toks.size());
  for (const auto& mt : toks) pieces.push_back(detokenize(mt));
  return parse_peptide(join_pieces(pieces), ClosurePolicy::AllowDangling);
}

std::vector<std::string> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    lines.push_back(line);
  }
  return lines;
}

}  // namespace pepevolve::chuckles
