#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pepevolve::chuckles {

enum class TokenKind {
  Atom,
  BracketAtom,
  Bond,
  RingClosure,
  BranchOpen,
  BranchClose,
  Separator,
  Mask,
};

struct Token {
  TokenKind kind;
  std::string text;
  bool operator==(const Token&) const = default;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::size_t position);
  std::size_t position;
};

/// Lex a CHUCKLES/SMILES-like string into tokens. Concatenating the token
/// texts reproduces the input byte-for-byte.
std::vector<Token> tokenize(std::string_view s);
std::string detokenize(const std::vector<Token>& tokens);

bool is_atom(const Token& t);
bool is_aromatic_atom(const Token& t);
/// Canonical element symbol ("N", "Cl") for atom tokens; "" otherwise.
std::string element_of(const Token& t);

/// Bracket-atom details parsed on demand (stereo markers are opaque text).
struct BracketInfo {
  std::string element;
  bool aromatic = false;
  int explicit_h = 0;
  int charge = 0;
};
BracketInfo parse_bracket(const std::string& text);

struct Monomer {
  std::vector<Token> tokens;
  std::string raw() const;
  bool is_mask() const;
  bool operator==(const Monomer&) const = default;
};

struct ClosureEndpoint {
  std::size_t monomer = 0;
  std::size_t token = 0;
  bool operator==(const ClosureEndpoint&) const = default;
};

struct ClosurePair {
  std::string label;
  ClosureEndpoint first;
  ClosureEndpoint second;
};

enum class ClosurePolicy { Strict, AllowDangling };

struct Peptide {
  std::vector<Monomer> monomers;
  std::vector<ClosurePair> closures;
  // Unpaired ring-closure tokens, present only under ClosurePolicy::AllowDangling.
  std::vector<std::pair<std::string, ClosureEndpoint>> dangling;
  bool placeholder = false;

  std::size_t length() const { return monomers.size(); }
};

bool operator==(const Peptide& a, const Peptide& b);

/// Parse a CHUCKLES string: "|"-separated monomers with ring-closure labels
/// paired in order of appearance. A peptide whose monomers are all single
/// letters (optionally followed by one digit) or "?" is held in placeholder
/// mode: monomers are opaque one-token symbols and no chemistry applies.
Peptide parse_peptide(std::string_view s, ClosurePolicy policy = ClosurePolicy::Strict);

/// Parse a single monomer (vocabulary entry). Rejects separators and mask
/// tokens; ring-closure labels must pair within the monomer.
Monomer parse_monomer(std::string_view s);

std::string render(const Peptide& p);

struct MaskedPeptide {
  Peptide base;
  std::vector<std::size_t> masked;  // sorted, unique
};

MaskedPeptide mask(const Peptide& p, std::vector<std::size_t> indices);
std::string render(const MaskedPeptide& m);

enum class TopologyKind { Linear, HeadToTailCyclic, OtherCyclic };
TopologyKind topology(const Peptide& p);

/// Rotate monomer order left by `offset`. Head-to-tail macrocycles get their
/// backbone closure relocated: the label is re-assigned to the smallest digit
/// (2-9, then %NN) unused by any other ring, placed after the first backbone
/// atom of the new first monomer and on the final carbonyl carbon of the new
/// last monomer. Other topologies rotate monomer order only.
Peptide shift(const Peptide& p, std::size_t offset);

/// Replace the masked monomers with `replacements` (aligned with m.masked).
/// Cross-monomer closure labels whose endpoint sat in a replaced monomer are
/// re-attached into the replacement (backbone-nitrogen side for the first
/// monomer, carbonyl side for the last); internal ring labels of a
/// replacement are remapped when they would capture a spanning closure.
Peptide substitute(const MaskedPeptide& m, const std::vector<Monomer>& replacements);

/// Attachment atom (cursor position) for every ring-closure token.
struct ClosureAttachment {
  ClosureEndpoint closure;
  ClosureEndpoint atom;
};
std::vector<ClosureAttachment> closure_attachments(const Peptide& p);

/// Non-empty, non-comment ("#") lines of a corpus file.
std::vector<std::string> load_corpus(const std::string& path);

}  // namespace pepevolve::chuckles
