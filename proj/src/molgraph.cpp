#include "pepevolve/molgraph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>
#include <sstream>

namespace pepevolve::molgraph {

using chuckles::Token;
using chuckles::TokenKind;

namespace {

const std::map<std::string, std::vector<int>> kDefaultValences = {
    {"B", {3}}, {"C", {4}},  {"N", {3}},  {"O", {2}},  {"P", {3, 5}},
    {"S", {2, 6}}, {"F", {1}}, {"Cl", {1}}, {"Br", {1}}, {"I", {1}},
};

int bond_half_units(BondOrder o) {
  switch (o) {
    case BondOrder::Single: return 2;
    case BondOrder::Double: return 4;
    case BondOrder::Triple: return 6;
    case BondOrder::Aromatic: return 3;
  }
  return 2;
}

BondOrder bond_from_char(char c) {
  switch (c) {
    case '-': case '/': case '\\': return BondOrder::Single;
    case '=': return BondOrder::Double;
    case '#': return BondOrder::Triple;
    case ':': return BondOrder::Aromatic;
  }
  throw GraphError(std::string("unsupported bond symbol '") + c + "'");
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string atom_class(const MolecularGraph& g, int i) {
  const Atom& a = g.atoms[i];
  std::string cls = a.element;
  if (a.aromatic) cls += ":ar";
  if (a.charge != 0) cls += (a.charge > 0 ? "+" : "") + std::to_string(a.charge);
  cls += ";H" + std::to_string(g.total_h(i));
  return cls;
}

char order_char(BondOrder o) {
  switch (o) {
    case BondOrder::Single: return '1';
    case BondOrder::Double: return '2';
    case BondOrder::Triple: return '3';
    case BondOrder::Aromatic: return 'a';
  }
  return '1';
}

}  // namespace

MolecularGraph build_graph(const chuckles::Peptide& p) {
  if (p.placeholder)
    throw GraphError("cannot build a molecular graph of a placeholder peptide");

  MolecularGraph g;
  g.n_monomers = p.length();

  int cur = -1;
  std::vector<int> branch_stack;
  std::optional<BondOrder> pending;
  struct OpenClosure {
    std::string label;
    int atom;
    std::optional<BondOrder> order;
  };
  std::vector<OpenClosure> open;

  auto add_bond = [&](int a, int b, BondOrder order) {
    if (a == b) throw GraphError("ring closure bonds an atom to itself");
    const int idx = static_cast<int>(g.bonds.size());
    g.bonds.push_back({a, b, order});
    g.adjacency[static_cast<std::size_t>(a)].push_back(idx);
    g.adjacency[static_cast<std::size_t>(b)].push_back(idx);
  };

  for (std::size_t mi = 0; mi < p.monomers.size(); ++mi) {
    const auto& mono = p.monomers[mi];
    if (mono.is_mask())
      throw GraphError("cannot build a molecular graph of a masked peptide");
    for (const Token& t : mono.tokens) {
      switch (t.kind) {
        case TokenKind::Atom: {
          Atom a;
          a.element = chuckles::element_of(t);
          a.aromatic = chuckles::is_aromatic_atom(t);
          a.monomer = mi;
          const int id = static_cast<int>(g.atoms.size());
          g.atoms.push_back(a);
          g.adjacency.emplace_back();
          if (cur >= 0) {
            BondOrder order = pending.value_or(
                (g.atoms[static_cast<std::size_t>(cur)].aromatic && a.aromatic)
                    ? BondOrder::Aromatic
                    : BondOrder::Single);
            add_bond(cur, id, order);
          }
          pending.reset();
          cur = id;
          break;
        }
        case TokenKind::BracketAtom: {
          const auto info = chuckles::parse_bracket(t.text);
          Atom a;
          a.element = info.element;
          a.aromatic = info.aromatic;
          a.charge = info.charge;
          a.explicit_h = info.explicit_h;
          a.bracket = true;
          a.monomer = mi;
          const int id = static_cast<int>(g.atoms.size());
          g.atoms.push_back(a);
          g.adjacency.emplace_back();
          if (cur >= 0) {
            BondOrder order = pending.value_or(
                (g.atoms[static_cast<std::size_t>(cur)].aromatic && a.aromatic)
                    ? BondOrder::Aromatic
                    : BondOrder::Single);
            add_bond(cur, id, order);
          }
          pending.reset();
          cur = id;
          break;
        }
        case TokenKind::Bond:
          pending = bond_from_char(t.text[0]);
          break;
        case TokenKind::RingClosure: {
          if (cur < 0) throw GraphError("ring closure before any atom");
          auto it = std::find_if(open.begin(), open.end(),
                                 [&](const OpenClosure& o) { return o.label == t.text; });
          if (it != open.end()) {
            BondOrder order;
            if (it->order)
              order = *it->order;
            else if (pending)
              order = *pending;
            else
              order = (g.atoms[static_cast<std::size_t>(it->atom)].aromatic &&
                       g.atoms[static_cast<std::size_t>(cur)].aromatic)
                          ? BondOrder::Aromatic
                          : BondOrder::Single;
            add_bond(it->atom, cur, order);
            open.erase(it);
          } else {
            open.push_back({t.text, cur, pending});
          }
          pending.reset();
          break;
        }
        case TokenKind::BranchOpen:
          branch_stack.push_back(cur);
          break;
        case TokenKind::BranchClose:
          if (branch_stack.empty()) throw GraphError("unbalanced branch");
          cur = branch_stack.back();
          branch_stack.pop_back();
          break;
        case TokenKind::Separator:
        case TokenKind::Mask:
          break;
      }
    }
  }
  if (!open.empty())
    throw GraphError("unpaired ring closure '" + open.front().label + "'");
  if (g.atoms.empty()) throw GraphError("peptide contains no atoms");

  g.implicit_h.assign(g.atoms.size(), 0);
  for (std::size_t i = 0; i < g.atoms.size(); ++i) {
    const Atom& a = g.atoms[i];
    if (a.bracket) continue;  // bracket atoms carry exactly their explicit H
    auto it = kDefaultValences.find(a.element);
    if (it == kDefaultValences.end())
      throw GraphError("no default valence for element '" + a.element + "'");
    int halves = 0;
    for (int bi : g.adjacency[i]) halves += bond_half_units(g.bonds[static_cast<std::size_t>(bi)].order);
    const int effective = halves / 2;
    int implicit = -1;
    for (int v : it->second) {
      if (v >= effective) {
        implicit = v - effective;
        break;
      }
    }
    if (implicit < 0)
      throw GraphError("valence violation on atom " + std::to_string(i) + " (" + a.element +
                       "): " + std::to_string(effective) + " bonds");
    g.implicit_h[i] = implicit;
  }
  return g;
}

ContributionTable ContributionTable::defaults() {
  ContributionTable t;
  t.entries = {
      {"C", 0.20},  {"C:ar", 0.30}, {"N", -0.60}, {"N:ar", -0.40},
      {"O", -0.40}, {"O:ar", -0.40}, {"S", 0.25},  {"S:ar", 0.25},
      {"F", 0.20},  {"Cl", 0.50},   {"Br", 0.70}, {"I", 0.80},
      {"P", 0.10},  {"P:ar", 0.10}, {"B", 0.10},
  };
  return t;
}

double ContributionTable::lookup(const Atom& atom) const {
  if (atom.aromatic) {
    auto it = entries.find(atom.element + ":ar");
    if (it != entries.end()) return it->second;
  }
  auto it = entries.find(atom.element);
  if (it == entries.end())
    throw GraphError("no LogP contribution entry for atom class '" + atom.element +
                     (atom.aromatic ? ":ar" : "") + "'");
  return it->second;
}

std::pair<int, std::vector<int>> hbd_count(const MolecularGraph& g, HbdRule rule) {
  std::vector<int> by_monomer(g.n_monomers, 0);
  int total = 0;
  for (std::size_t i = 0; i < g.atoms.size(); ++i) {
    const auto& el = g.atoms[i].element;
    if (el != "N" && el != "O" && el != "S") continue;
    const int h = g.total_h(static_cast<int>(i));
    if (h < 1) continue;
    const int add = rule == HbdRule::DonorAtoms ? 1 : h;
    total += add;
    by_monomer[g.atoms[i].monomer] += add;
  }
  return {total, std::move(by_monomer)};
}

std::pair<double, std::vector<double>> logp_estimate(const MolecularGraph& g,
                                                     const ContributionTable& table) {
  std::vector<double> by_monomer(g.n_monomers, 0.0);
  double total = 0.0;
  for (const Atom& a : g.atoms) {
    const double c = table.lookup(a);
    total += c;
    by_monomer[a.monomer] += c;
  }
  return {total, std::move(by_monomer)};
}

namespace {

// Shortest path a -> b avoiding one edge; empty when disconnected.
std::vector<int> shortest_path_avoiding(const MolecularGraph& g, int a, int b, int skip_bond) {
  const int n = static_cast<int>(g.atoms.size());
  std::vector<int> prev(static_cast<std::size_t>(n), -2);
  std::deque<int> queue;
  prev[static_cast<std::size_t>(a)] = -1;
  queue.push_back(a);
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    if (v == b) break;
    for (int bi : g.adjacency[static_cast<std::size_t>(v)]) {
      if (bi == skip_bond) continue;
      const int w = g.other_end(bi, v);
      if (prev[static_cast<std::size_t>(w)] != -2) continue;
      prev[static_cast<std::size_t>(w)] = v;
      queue.push_back(w);
    }
  }
  if (prev[static_cast<std::size_t>(b)] == -2) return {};
  std::vector<int> path;
  for (int v = b; v != -1; v = prev[static_cast<std::size_t>(v)]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

struct EdgeBits {
  std::vector<std::uint64_t> words;
  explicit EdgeBits(std::size_t nbits) : words((nbits + 63) / 64, 0) {}
  void set(int i) { words[static_cast<std::size_t>(i) / 64] |= 1ULL << (i % 64); }
  bool any() const {
    for (auto w : words)
      if (w) return true;
    return false;
  }
  int lowest() const {
    for (std::size_t i = 0; i < words.size(); ++i)
      if (words[i]) return static_cast<int>(i * 64 + static_cast<std::size_t>(__builtin_ctzll(words[i])));
    return -1;
  }
  void operator^=(const EdgeBits& o) {
    for (std::size_t i = 0; i < words.size(); ++i) words[i] ^= o.words[i];
  }
  bool test(int i) const {
    return (words[static_cast<std::size_t>(i) / 64] >> (i % 64)) & 1ULL;
  }
};

int find_bond(const MolecularGraph& g, int a, int b) {
  for (int bi : g.adjacency[static_cast<std::size_t>(a)])
    if (g.other_end(bi, a) == b) return bi;
  return -1;
}

EdgeBits cycle_bits(const MolecularGraph& g, const std::vector<int>& cycle) {
  EdgeBits bits(g.bonds.size());
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    const int a = cycle[i];
    const int b = cycle[(i + 1) % cycle.size()];
    const int bond = find_bond(g, a, b);
    if (bond >= 0) bits.set(bond);
  }
  return bits;
}

}  // namespace

std::vector<std::vector<int>> cycle_basis(const MolecularGraph& g) {
  const int n = static_cast<int>(g.atoms.size());
  // spanning forest via BFS; count components and collect chords
  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  std::vector<bool> tree_edge(g.bonds.size(), false);
  int components = 0;
  for (int root = 0; root < n; ++root) {
    if (comp[static_cast<std::size_t>(root)] != -1) continue;
    comp[static_cast<std::size_t>(root)] = components;
    std::deque<int> queue{root};
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      for (int bi : g.adjacency[static_cast<std::size_t>(v)]) {
        const int w = g.other_end(bi, v);
        if (comp[static_cast<std::size_t>(w)] == -1) {
          comp[static_cast<std::size_t>(w)] = components;
          tree_edge[static_cast<std::size_t>(bi)] = true;
          queue.push_back(w);
        }
      }
    }
    ++components;
  }

  const int rank = static_cast<int>(g.bonds.size()) - n + components;
  if (rank <= 0) return {};

  struct Candidate {
    std::vector<int> atoms;
  };
  std::vector<Candidate> candidates;
  std::vector<bool> seen_bond(g.bonds.size(), false);
  for (std::size_t bi = 0; bi < g.bonds.size(); ++bi) {
    if (tree_edge[bi] || seen_bond[bi]) continue;
    seen_bond[bi] = true;
    auto path = shortest_path_avoiding(g, g.bonds[bi].a, g.bonds[bi].b, static_cast<int>(bi));
    if (!path.empty()) candidates.push_back({std::move(path)});
  }

  auto reduce_into_basis = [&](std::vector<Candidate>& cands, std::vector<EdgeBits>& basis,
                               std::vector<int>& pivots,
                               std::vector<std::vector<int>>& rings) {
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
      return a.atoms.size() < b.atoms.size();
    });
    for (auto& c : cands) {
      if (static_cast<int>(rings.size()) >= rank) break;
      EdgeBits bits = cycle_bits(g, c.atoms);
      for (std::size_t k = 0; k < basis.size(); ++k)
        if (bits.test(pivots[k])) bits ^= basis[k];
      if (!bits.any()) continue;
      pivots.push_back(bits.lowest());
      basis.push_back(std::move(bits));
      rings.push_back(c.atoms);
    }
  };

  std::vector<EdgeBits> basis;
  std::vector<int> pivots;
  std::vector<std::vector<int>> rings;
  reduce_into_basis(candidates, basis, pivots, rings);

  if (static_cast<int>(rings.size()) < rank) {
    // Horton fallback: shortest cycles through every (vertex, edge) pair.
    std::vector<Candidate> extra;
    for (int v = 0; v < n; ++v) {
      std::vector<int> prev(static_cast<std::size_t>(n), -2);
      std::vector<int> dist(static_cast<std::size_t>(n), -1);
      std::deque<int> queue{v};
      prev[static_cast<std::size_t>(v)] = -1;
      dist[static_cast<std::size_t>(v)] = 0;
      while (!queue.empty()) {
        const int x = queue.front();
        queue.pop_front();
        for (int bi : g.adjacency[static_cast<std::size_t>(x)]) {
          const int w = g.other_end(bi, x);
          if (prev[static_cast<std::size_t>(w)] != -2) continue;
          prev[static_cast<std::size_t>(w)] = x;
          dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(x)] + 1;
          queue.push_back(w);
        }
      }
      auto path_to = [&](int t) {
        std::vector<int> path;
        for (int x = t; x != -1; x = prev[static_cast<std::size_t>(x)]) path.push_back(x);
        std::reverse(path.begin(), path.end());
        return path;
      };
      for (const auto& bond : g.bonds) {
        if (dist[static_cast<std::size_t>(bond.a)] < 0 || dist[static_cast<std::size_t>(bond.b)] < 0)
          continue;
        auto pa = path_to(bond.a);
        auto pb = path_to(bond.b);
        // paths must share only v
        std::vector<int> cyc = pa;
        bool ok = true;
        for (std::size_t i = pb.size(); i-- > 1;) {
          if (std::find(pa.begin(), pa.end(), pb[i]) != pa.end()) {
            ok = false;
            break;
          }
          cyc.push_back(pb[i]);
        }
        if (ok && cyc.size() >= 3) extra.push_back({std::move(cyc)});
      }
    }
    reduce_into_basis(extra, basis, pivots, rings);
  }
  return rings;
}

int max_ring_size(const MolecularGraph& g) {
  int best = 0;
  for (const auto& ring : cycle_basis(g)) best = std::max(best, static_cast<int>(ring.size()));
  return best;
}

std::vector<std::string> match_alerts(const chuckles::Peptide& p, const AlertSet& alerts) {
  std::vector<Token> stream;
  for (const auto& mono : p.monomers)
    for (const auto& t : mono.tokens) stream.push_back(t);

  std::vector<std::string> matched;
  for (const auto& alert : alerts.alerts) {
    const auto pattern = chuckles::tokenize(alert.pattern);
    if (pattern.empty() || pattern.size() > stream.size()) continue;
    bool hit = false;
    for (std::size_t i = 0; i + pattern.size() <= stream.size() && !hit; ++i) {
      bool all = true;
      for (std::size_t j = 0; j < pattern.size(); ++j) {
        if (stream[i + j].text != pattern[j].text) {
          all = false;
          break;
        }
      }
      hit = all;
    }
    if (hit) matched.push_back(alert.name);
  }
  return matched;
}

std::string Fingerprint::to_string() const {
  std::ostringstream os;
  os << "atoms=" << atom_hash << " bonds=" << bond_hash << " rings=[";
  for (std::size_t i = 0; i < ring_sizes.size(); ++i) os << (i ? "," : "") << ring_sizes[i];
  os << "] hbd=" << hbd << " logp_micro=" << logp_micro;
  return os.str();
}

Fingerprint graph_fingerprint(const MolecularGraph& g, const ContributionTable& table) {
  Fingerprint fp;

  std::vector<std::string> atom_classes;
  atom_classes.reserve(g.atoms.size());
  for (std::size_t i = 0; i < g.atoms.size(); ++i)
    atom_classes.push_back(atom_class(g, static_cast<int>(i)));
  std::vector<std::string> sorted_atoms = atom_classes;
  std::sort(sorted_atoms.begin(), sorted_atoms.end());
  std::string joined;
  for (const auto& s : sorted_atoms) {
    joined += s;
    joined += '/';
  }
  fp.atom_hash = fnv1a(joined);

  std::vector<std::string> bond_classes;
  bond_classes.reserve(g.bonds.size());
  for (const auto& b : g.bonds) {
    std::string ca = atom_classes[static_cast<std::size_t>(b.a)];
    std::string cb = atom_classes[static_cast<std::size_t>(b.b)];
    if (cb < ca) std::swap(ca, cb);
    bond_classes.push_back(ca + "~" + cb + "~" + order_char(b.order));
  }
  std::sort(bond_classes.begin(), bond_classes.end());
  joined.clear();
  for (const auto& s : bond_classes) {
    joined += s;
    joined += '/';
  }
  fp.bond_hash = fnv1a(joined);

  for (const auto& ring : cycle_basis(g)) fp.ring_sizes.push_back(static_cast<int>(ring.size()));
  std::sort(fp.ring_sizes.begin(), fp.ring_sizes.end());

  fp.hbd = hbd_count(g).first;
  fp.logp_micro = std::llround(logp_estimate(g, table).first * 1e6);
  return fp;
}

DescriptorReport descriptors(const chuckles::Peptide& p, const ContributionTable& table,
                             const AlertSet& alerts, HbdRule rule) {
  const auto g = build_graph(p);
  DescriptorReport r;
  std::tie(r.hbd_total, r.hbd_by_monomer) = hbd_count(g, rule);
  std::tie(r.logp, r.logp_by_monomer) = logp_estimate(g, table);
  r.max_ring = max_ring_size(g);
  r.alerts = match_alerts(p, alerts);
  return r;
}

}  // namespace pepevolve::molgraph
