#pragma once

// Seeded validation suites shared by the command-line tool and the
// acceptance runner.  Each returns one report whose `ok` is the verdict.

#include <cstdint>
#include <string>

#include "atiyah/report.hpp"

namespace atiyah::suites {

/// |det_m| against d3 + 8∏r on random triangles.
ConjectureReport en3_crosscheck(std::uint64_t samples, std::uint64_t seed, double tol = 1e-8);
/// Planar: det_m against the closed Re det M4 and |Im|; nonplanar: |det_m| ≥ |Re|.
ConjectureReport en4_crosscheck(std::uint64_t samples, std::uint64_t seed, double tol = 1e-8);

/// kind ∈ {upright, tangential, isosceles, cyclic}.
ConjectureReport family_suite(const std::string& kind, std::uint64_t samples, std::uint64_t seed,
                              double tol = 1e-9);

/// Exact identities from the closed forms and from the Psi calculus.
ConjectureReport symbolic_identities(int max_res = 6, int max_typea = 6, int max_resultant = 5);
/// Lemma 1 and Lemma 2 coefficients and the n = 4 chain terminal.
ConjectureReport reference_coefficients();

/// det M_{n+1}(λ) ≡ Psi^{1..n}_{1..n} at X_i = λ_{n+1-i}, ξ_j = λ_j.
bool type_a_bridge(int n);

/// Energy of random collinear configurations for 2 ≤ n ≤ nmax.
ConjectureReport collinear_energy(int nmax, std::uint64_t samples, std::uint64_t seed, double tol = 1e-10);

}  // namespace atiyah::suites
