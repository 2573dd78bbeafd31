#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace splitsq {

struct FamilyResult {
  std::string name;
  double max_abs_dev = 0.0;
  std::size_t samples = 0;
  bool passed = true;
};

struct CertifyReport {
  int max_n = 0;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  std::vector<FamilyResult> families;

  bool passed() const;
  nlohmann::json to_json() const;
};

struct CertifyOptions {
  double tolerance = 1e-10;
  int draws = 20;  // per (N, M) and family
  bool parallel = true;
  // Added to f⁻ in the optimal-direction forms of split_squeezed_pn; a
  // nonzero value must make that family fail.
  double fminus_offset = 0.0;
};

// Analytic moments against the Fock-basis oracle for N ∈ [2, max_n],
// M ∈ {2, 3}, with parameters drawn from a seeded generator. Families:
//   split_squeezed_pn, split_squeezed_npn, split_fock_linear,
//   dicke_single_mode, split_dicke_nonlinear.
// max_n < 2 gives an empty, passing report; max_n > 8 throws DomainError.
CertifyReport oracle_certify(int max_n, std::uint64_t seed, const CertifyOptions& options = {});

}  // namespace splitsq
