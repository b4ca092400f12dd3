#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "pepevolve/chuckles.hpp"

using namespace pepevolve::chuckles;

TEST_CASE("tokenize splits ring closures, branches and bonds") {
  const auto tokens = tokenize("NCC2(=O)");
  REQUIRE(tokens.size() == 8);
  CHECK(tokens[0].kind == TokenKind::Atom);
  CHECK(tokens[2].text == "C");
  CHECK(tokens[3].kind == TokenKind::RingClosure);
  CHECK(tokens[3].text == "2");
  CHECK(tokens[4].kind == TokenKind::BranchOpen);
  CHECK(tokens[5].kind == TokenKind::Bond);
  CHECK(tokens[6].kind == TokenKind::Atom);
  CHECK(tokens[7].kind == TokenKind::BranchClose);
}

TEST_CASE("tokenize handles masks, brackets and two-letter elements") {
  const auto mask_tokens = tokenize("?");
  REQUIRE(mask_tokens.size() == 1);
  CHECK(mask_tokens[0].kind == TokenKind::Mask);

  const auto br = tokenize("ClCBr");
  REQUIRE(br.size() == 3);
  CHECK(br[0].text == "Cl");
  CHECK(br[2].text == "Br");

  const auto bracket = tokenize("N[C@@H](C)C(=O)");
  CHECK(bracket[1].kind == TokenKind::BracketAtom);
  CHECK(bracket[1].text == "[C@@H]");
  CHECK(detokenize(bracket) == "N[C@@H](C)C(=O)");

  const auto pct = tokenize("C%12CC%12");
  CHECK(pct[1].text == "%12");
  CHECK(pct[1].kind == TokenKind::RingClosure);
}

TEST_CASE("tokenize errors") {
  CHECK_THROWS_AS(tokenize("N[C@@H"), ParseError);
  CHECK_THROWS_AS(tokenize("C!C"), ParseError);
  CHECK_THROWS_AS(tokenize(""), ParseError);
  CHECK_THROWS_AS(tokenize("C%1"), ParseError);
}

TEST_CASE("detokenize round-trips byte-for-byte") {
  for (const std::string s :
       {std::string("N[C@@H](C)C(=O)"), fixtures::kRbp, fixtures::kDonor4, std::string("c1ccccc1")})
    CHECK(detokenize(tokenize(s)) == s);
}

TEST_CASE("parse_peptide splits monomers and resolves closures") {
  const auto p = parse_peptide(fixtures::kRbp);
  CHECK(p.length() == 9);
  CHECK_FALSE(p.placeholder);
  std::size_t cross = 0;
  for (const auto& c : p.closures)
    if (c.first.monomer != c.second.monomer) {
      ++cross;
      CHECK(c.label == "2");
      CHECK(c.first.monomer == 0);
      CHECK(c.second.monomer == 8);
    }
  CHECK(cross == 1);
  CHECK(render(p) == fixtures::kRbp);
}

TEST_CASE("placeholder alphabet mode") {
  const auto p = parse_peptide("A|B|C|D");
  CHECK(p.length() == 4);
  CHECK(p.placeholder);
  CHECK(render(p) == "A|B|C|D");

  const auto q = parse_peptide("r1|r2|r3|r4|r5");
  CHECK(q.length() == 5);
  CHECK(q.placeholder);
  CHECK(q.monomers[0].raw() == "r1");
}

TEST_CASE("single monomer without separators") {
  const auto p = parse_peptide("N[C@@H](C)C(=O)");
  CHECK(p.length() == 1);
  CHECK(topology(p) == TopologyKind::Linear);
}

TEST_CASE("parse_peptide errors") {
  CHECK_THROWS_AS(parse_peptide("N[C@@H](C)C(=O)|"), ParseError);  // empty monomer
  CHECK_THROWS_AS(parse_peptide("A||B"), ParseError);
  CHECK_THROWS_AS(parse_peptide("C1CC"), ParseError);          // label appears once
  CHECK_THROWS_AS(parse_peptide("C1CC1C1"), ParseError);       // label appears three times
  CHECK_THROWS_AS(parse_peptide("NC(C"), ParseError);          // unbalanced branch
  CHECK_NOTHROW(parse_peptide("C1CC1CC1CC1"));                 // reuse after closing is fine
  CHECK_NOTHROW(parse_peptide("C1CC", ClosurePolicy::AllowDangling));
}

TEST_CASE("mask renders ? at exactly the requested positions") {
  const auto p = parse_peptide("A|B|C|D");
  CHECK(render(mask(p, {0, 2, 3})) == "?|B|?|?");

  const auto q = parse_peptide("r1|r2|r3|r4|r5");
  CHECK(render(mask(q, {1})) == "r1|?|r3|r4|r5");
  CHECK(render(mask(q, {0, 1, 2, 3, 4})) == "?|?|?|?|?");

  const auto full = mask(q, {0, 1, 2, 3, 4});
  std::size_t mask_count = 0;
  for (char c : render(full))
    if (c == '?') ++mask_count;
  CHECK(mask_count == 5);

  CHECK_THROWS_AS(mask(p, {4}), std::out_of_range);
  CHECK_THROWS_AS(mask(p, {}), std::invalid_argument);
}

TEST_CASE("masked render keeps unmasked monomers byte-identical") {
  const auto p = parse_peptide(fixtures::kRbp);
  const auto m = mask(p, {2, 7});
  const auto reparsed = parse_peptide(render(m), ClosurePolicy::AllowDangling);
  REQUIRE(reparsed.length() == p.length());
  for (std::size_t i = 0; i < p.length(); ++i) {
    if (i == 2 || i == 7)
      CHECK(reparsed.monomers[i].is_mask());
    else
      CHECK(reparsed.monomers[i].raw() == p.monomers[i].raw());
  }
}

TEST_CASE("topology classification") {
  CHECK(topology(parse_peptide(fixtures::kRbp)) == TopologyKind::HeadToTailCyclic);
  CHECK(topology(parse_peptide("N[C@@H](C)C(=O)|NCC(=O)")) == TopologyKind::Linear);
  // closure anchored on a side-chain atom instead of the backbone nitrogen
  const auto other = parse_peptide("N[C@@H](CC3)C(=O)|N[C@@H](C)C(=O)|NCC3(=O)");
  CHECK(topology(other) == TopologyKind::OtherCyclic);
  CHECK(topology(parse_peptide("A|B|C")) == TopologyKind::Linear);
}

TEST_CASE("shift reproduces the rotated toy macrocycle byte-for-byte") {
  const auto p = parse_peptide(fixtures::kToyCycle, ClosurePolicy::AllowDangling);
  const auto shifted = shift(p, 2);
  CHECK(render(shifted) == fixtures::kToyCycleShifted);
}

TEST_CASE("shift offset 0 is the identity") {
  const auto p = parse_peptide(fixtures::kRbp);
  CHECK(render(shift(p, 0)) == fixtures::kRbp);
  CHECK_THROWS_AS(shift(p, 9), std::out_of_range);
}

TEST_CASE("shift composition equals shift by the summed offset") {
  const auto p = parse_peptide(fixtures::kRbp);
  const std::size_t L = p.length();
  for (std::size_t a = 0; a < L; ++a) {
    for (std::size_t b = 0; b < L; ++b) {
      const auto lhs = shift(shift(p, a), b);
      const auto rhs = shift(p, (a + b) % L);
      CHECK(render(lhs) == render(rhs));
    }
  }
}

TEST_CASE("shift preserves the monomer multiset up to the macrocycle label") {
  const auto p = parse_peptide(fixtures::kRbp);
  auto strip_labels = [](const Peptide& q) {
    std::multiset<std::string> bag;
    for (const auto& m : q.monomers) {
      std::string flat;
      for (const auto& t : m.tokens)
        if (t.kind != TokenKind::RingClosure) flat += t.text;
      bag.insert(flat);
    }
    return bag;
  };
  const auto base = strip_labels(p);
  for (std::size_t k = 1; k < p.length(); ++k) CHECK(strip_labels(shift(p, k)) == base);
}

TEST_CASE("every shifted render re-parses to an equal peptide") {
  const auto p = parse_peptide(fixtures::kRbp);
  for (std::size_t k = 0; k < p.length(); ++k) {
    const auto s = shift(p, k);
    const auto reparsed = parse_peptide(render(s));
    CHECK(reparsed == s);
  }
}

TEST_CASE("linear peptides rotate monomer order only") {
  const auto p = parse_peptide("N[C@@H](C)C(=O)|NCC(=O)|N[C@@H](CO)C(=O)");
  const auto s = shift(p, 1);
  CHECK(render(s) == "NCC(=O)|N[C@@H](CO)C(=O)|N[C@@H](C)C(=O)");
}

TEST_CASE("closure labels in rendered output appear an even number of times") {
  const auto p = parse_peptide(fixtures::kRbp);
  for (std::size_t k = 0; k < p.length(); ++k) {
    const auto s = shift(p, k);
    std::map<std::string, int> counts;
    for (const auto& m : s.monomers)
      for (const auto& t : m.tokens)
        if (t.kind == TokenKind::RingClosure) ++counts[t.text];
    for (const auto& [label, n] : counts) {
      INFO("label ", label);
      CHECK(n % 2 == 0);
    }
  }
}

TEST_CASE("substitute replaces masked monomers and re-attaches the macro closure") {
  const auto p = parse_peptide(fixtures::kRbp);

  SUBCASE("mid-chain substitution") {
    const auto m = mask(p, {2});
    const auto out = substitute(m, {parse_monomer(fixtures::kSerine)});
    CHECK(out.length() == 9);
    CHECK(out.monomers[2].raw() == fixtures::kSerine);
    for (std::size_t i = 0; i < 9; ++i)
      if (i != 2) CHECK(out.monomers[i].raw() == p.monomers[i].raw());
    CHECK(topology(out) == TopologyKind::HeadToTailCyclic);
  }

  SUBCASE("closure-bearing last monomer") {
    const auto m = mask(p, {8});
    const auto out = substitute(m, {parse_monomer(fixtures::kAlanine)});
    CHECK(out.monomers[8].raw() == "N[C@@H](C)C2(=O)");
    CHECK(topology(out) == TopologyKind::HeadToTailCyclic);
    CHECK_NOTHROW(parse_peptide(render(out)));
  }

  SUBCASE("replacement using the macro label internally gets remapped") {
    // a tryptophan side chain uses ring labels 1 and 2; 2 collides with the
    // macrocycle label when substituted at the closure-bearing position
    const auto m = mask(p, {8});
    const auto trp = parse_monomer("N[C@@H](Cc1c[nH]c2ccccc12)C(=O)");
    const auto out = substitute(m, {trp});
    CHECK(topology(out) == TopologyKind::HeadToTailCyclic);
    CHECK_NOTHROW(parse_peptide(render(out)));
    CHECK(out.monomers[0].raw() == p.monomers[0].raw());
  }

  SUBCASE("both closure endpoints replaced keeps the macrocycle") {
    const auto m = mask(p, {0, 8});
    const auto out = substitute(m, {parse_monomer(fixtures::kAlanine),
                                    parse_monomer(fixtures::kGlycine)});
    CHECK(topology(out) == TopologyKind::HeadToTailCyclic);
    CHECK_NOTHROW(parse_peptide(render(out)));
  }

  SUBCASE("placeholder substitution") {
    const auto q = parse_peptide("A|B|C|D");
    const auto m = mask(q, {0, 2, 3});
    const auto out =
        substitute(m, {parse_monomer("X"), parse_monomer("Y"), parse_monomer("Z")});
    CHECK(render(out) == "X|B|Y|Z");
  }
}

TEST_CASE("parse_monomer validation") {
  CHECK_NOTHROW(parse_monomer("N1[C@@H](CCC1)C(=O)"));
  CHECK_THROWS_AS(parse_monomer("N|C"), ParseError);
  CHECK_THROWS_AS(parse_monomer("?"), ParseError);
  CHECK_THROWS_AS(parse_monomer("C1CC"), ParseError);
  CHECK_NOTHROW(parse_monomer("A"));
  CHECK_NOTHROW(parse_monomer("r1"));
}

TEST_CASE("corpus round-trip") {
  const auto lines = load_corpus(fixtures::data_path("corpus.chuckles"));
  REQUIRE(lines.size() >= 100);
  bool has_rbp = false;
  for (const auto& line : lines) {
    const auto p = parse_peptide(line);
    CHECK(render(p) == line);
    if (line == fixtures::kRbp) has_rbp = true;
  }
  CHECK(has_rbp);
}

TEST_CASE("property: random placeholder peptides round-trip through mask/substitute") {
  std::mt19937_64 rng(17);
  const std::string alphabet = "ABCDEFGH";
  std::uniform_int_distribution<std::size_t> len(1, 12);
  std::uniform_int_distribution<std::size_t> letter(0, alphabet.size() - 1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t L = len(rng);
    std::string s;
    for (std::size_t i = 0; i < L; ++i) {
      if (i) s += '|';
      s += alphabet[letter(rng)];
    }
    const auto p = parse_peptide(s);
    CHECK(render(p) == s);
    std::uniform_int_distribution<std::size_t> pos(0, L - 1);
    const std::size_t target = pos(rng);
    const auto m = mask(p, {target});
    const auto out = substitute(m, {parse_monomer("Q")});
    CHECK(out.monomers[target].raw() == "Q");
  }
}
