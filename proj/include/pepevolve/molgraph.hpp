#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pepevolve/chuckles.hpp"

namespace pepevolve::molgraph {

struct GraphError : std::runtime_error {
  explicit GraphError(const std::string& what) : std::runtime_error(what) {}
};

enum class BondOrder { Single, Double, Triple, Aromatic };

struct Atom {
  std::string element;
  bool aromatic = false;
  int charge = 0;
  int explicit_h = 0;   // from bracket notation
  bool bracket = false; // bracket atoms carry exactly their explicit H count
  std::size_t monomer = 0;
};

struct Bond {
  int a = 0;
  int b = 0;
  BondOrder order = BondOrder::Single;
};

struct MolecularGraph {
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;
  std::vector<int> implicit_h;
  std::vector<std::vector<int>> adjacency;  // atom -> incident bond indices
  std::size_t n_monomers = 0;

  int total_h(int atom) const { return atoms[atom].explicit_h + implicit_h[atom]; }
  int other_end(int bond, int atom) const {
    return bonds[bond].a == atom ? bonds[bond].b : bonds[bond].a;
  }
};

/// Assemble the peptide into one molecular graph (separators removed, ring
/// closures bonded, implicit hydrogens from default valences: C4 N3 O2 S2/6
/// P3/5 halogens 1).
MolecularGraph build_graph(const chuckles::Peptide& p);

struct ContributionTable {
  // key: element symbol, with ":ar" suffix for the aromatic class
  std::map<std::string, double> entries;
  static ContributionTable defaults();
  double lookup(const Atom& atom) const;
};

enum class HbdRule { DonorAtoms, DonorHydrogens };

/// Count of N/O/S atoms bearing at least one hydrogen (DonorAtoms, the
/// default) or the total hydrogen count on such atoms (DonorHydrogens),
/// attributed to each atom's monomer of origin.
std::pair<int, std::vector<int>> hbd_count(const MolecularGraph& g,
                                           HbdRule rule = HbdRule::DonorAtoms);

std::pair<double, std::vector<double>> logp_estimate(const MolecularGraph& g,
                                                     const ContributionTable& table);

/// Minimum cycle basis: spanning-tree chord cycles completed by shortest
/// paths, greedily reduced over GF(2); smaller rings first.
std::vector<std::vector<int>> cycle_basis(const MolecularGraph& g);

/// Atom count of the largest ring in the minimum cycle basis; 0 if acyclic.
int max_ring_size(const MolecularGraph& g);

struct Alert {
  std::string name;
  std::string pattern;  // contiguous token subsequence
};

struct AlertSet {
  std::vector<Alert> alerts;
};

/// Names of alerts whose token pattern occurs contiguously in the
/// separator-stripped token stream of the rendered peptide.
std::vector<std::string> match_alerts(const chuckles::Peptide& p, const AlertSet& alerts);

struct Fingerprint {
  std::uint64_t atom_hash = 0;
  std::uint64_t bond_hash = 0;
  std::vector<int> ring_sizes;  // sorted
  int hbd = 0;
  std::int64_t logp_micro = 0;  // logp rounded to 1e-6
  bool operator==(const Fingerprint&) const = default;
  std::string to_string() const;
};

/// Order-independent structural invariant used for shift-invariance checks.
Fingerprint graph_fingerprint(const MolecularGraph& g, const ContributionTable& table);

struct DescriptorReport {
  int hbd_total = 0;
  std::vector<int> hbd_by_monomer;
  double logp = 0.0;
  std::vector<double> logp_by_monomer;
  int max_ring = 0;
  std::vector<std::string> alerts;
};

DescriptorReport descriptors(const chuckles::Peptide& p, const ContributionTable& table,
                             const AlertSet& alerts, HbdRule rule = HbdRule::DonorAtoms);

}  // namespace pepevolve::molgraph
