#pragma once

#include <cstdlib>
#include <filesystem>
#include <string>

namespace fixtures {

// Rev-binding 9-mer macrocycle (head-to-tail, label 2).
inline const std::string kRbp =
    "N2[C@@H](Cc1ccc(O)cc1)C(=O)|N1[C@@H](CCC1)C(=O)|N[C@@H](C)C(=O)|N[C@@H](C)C(=O)|"
    "N[C@@H](CO)C(=O)|N[C@@H](Cc1ccc(O)cc1)C(=O)|N[C@@H](CCCNC(=N)N)C(=O)|NCC(=O)|NCC2(=O)";

// Three-residue toy macrocycle and its left-rotation by 2 (glycine first).
// The proline-like residue carries a dangling ring label, preserved verbatim.
inline const std::string kToyCycle =
    "N2[C@@H](Cc1ccc(O)cc1)C(=O)|N[C@@H](CCC1)C(=O)|NCC2(=O)";
inline const std::string kToyCycleShifted =
    "N2CC(=O)|N[C@@H](Cc1ccc(O)cc1)C(=O)|N[C@@H](CCC1)C2(=O)";

// Heavy-donor residues: 4 and 3 donor atoms when assembled in-chain.
inline const std::string kDonor4 = "N[C@@H](CN[C@@H]CN[C@@H]C(=O)N)C(=O)";
inline const std::string kDonor3 = "N[C@@H]N[C@@H](Cc1c[nH]c2ccccc12)C(=O)";

// Aromatic residues dominating the additive LogP estimate.
inline const std::string kLipoMild = "N(CC)[C@@H](Cc1ccc(C)cc1)C(=O)";
inline const std::string kLipoStrong = "N[C@@H](CCc1cc(F)c(C(F)(F)F)c(F)c1)C(=O)";

inline const std::string kGlycine = "NCC(=O)";
inline const std::string kAlanine = "N[C@@H](C)C(=O)";
inline const std::string kSerine = "N[C@@H](CO)C(=O)";
inline const std::string kSarcosine = "N(C)CC(=O)";

inline std::string data_dir() {
  const char* env = std::getenv("PEPEVOLVE_DATA_DIR");
  return std::filesystem::absolute(env ? env : "data").string();
}

inline std::string data_path(const std::string& name) { return data_dir() + "/" + name; }

inline std::string cli_path() {
  const char* env = std::getenv("PEPEVOLVE_CLI");
  return std::filesystem::absolute(env ? env : "./build/pepevolve").string();
}

}  // namespace fixtures
