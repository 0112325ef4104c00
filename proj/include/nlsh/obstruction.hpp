#pragma once

// Obstructions to lifting symmetries: the defect between the bracket of
// canonical lifts and the canonical lift of the bracket, its closed sum over
// natural-part brackets, and the two corollary obstructions.

#include <cstdint>
#include <string>
#include <vector>

#include "nlsh/hierarchy.hpp"

#include <json.hpp>

namespace nlsh {

/// The one-particle natural part F - Lambda(p,q); generators above threshold 1
/// are returned unchanged.
NonlinearOperator natural_generator(const Generator& g);

/// sum_K sum_{J not in K} [F^{nat J}, G^{nat K}] phi, J over increasing l-tuples
/// and K over increasing m-tuples of {0..n-1}.
WaveFunction obstruction_rhs(const Generator& F, const Generator& G, int n, double t, const WaveFunction& phi);

/// The m-particle generator [F^#_m, G], checked on a seeded batch (threshold 1
/// uses the bracket of the indices).  Throws NotDerivation when the check fails.
Generator bracket_generator(const Generator& F, const Generator& G, double t, std::uint64_t seed);

/// [F^#_n, G^#_n] phi - ([F^#_m, G])^#_n phi.
WaveFunction obstruction_lhs(const Generator& F, const Generator& G, int n, double t, const WaveFunction& phi);

/// [F^{nat(1)}, K^{nat(2)}] phi + [F^{nat(2)}, K^{nat(1)}] phi on two particles.
WaveFunction corollary1_obstruction(const Generator& F, const Generator& K, double t, const WaveFunction& phi);

/// sum_j [G^{hat j}, K^{nat(j)}] phi on l+1 particles, hat j omitting slot j.
WaveFunction corollary2_obstruction(const Generator& G, const Generator& K, double t, const WaveFunction& phi);

enum class ObstructionKind { Theorem10, Corollary1, Corollary2 };

std::string to_string(ObstructionKind kind);

struct ObstructionOptions {
  double t = 0.0;
  std::uint64_t seed = 1;
  int batch_size = 16;
  double vanish_tol = 1e-7;
};

struct ObstructionReport {
  ObstructionKind kind = ObstructionKind::Theorem10;
  int ell = 1, m = 1, n = 2;
  /// Largest sup-norms over the batch.
  double lhs_norm = 0.0;
  double rhs_norm = 0.0;
  double identity_residual = 0.0;
  /// identity_residual / max(1, lhs_norm, rhs_norm).
  double relative_residual = 0.0;
  double scale = 1.0;
  double vanish_tol = 1e-7;
  bool vanishes = false;
  std::uint64_t seed = 0;
  int batch_size = 0;
  std::vector<double> state_norms;
  std::vector<std::string> warnings;
};

/// theorem10: lhs and rhs at n for (F, G) of thresholds (l, m).
/// corollary1: lhs at n = 2 for one-particle (F, G), rhs = corollary1_obstruction.
/// corollary2: F is the one-particle K, G the generator at threshold l; lhs at
/// n = l + 1 and rhs = corollary2_obstruction, which equals minus the lhs.
ObstructionReport obstruction_report(ObstructionKind kind, const Generator& F, const Generator& G, int n,
                                     const ObstructionOptions& opts = {});

nlohmann::json to_json(const ObstructionReport& r);

}  // namespace nlsh
