#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nilspace/json_io.hpp"

namespace nilspace {

// Inputs of the worked examples.
namespace corpus {

Signature z_z();             // D_1(Z) x D_2(Z)
Signature zm_zm(long a, long b);  // D_1(Z_a) x D_2(Z_b)
Signature q1_q3();           // D_1(Q) x D_3(Q)

CongruenceCandidate shift2();           // x + 2, y + 2 on D_1(Z) x D_2(Z)
CongruenceCandidate shift2_twist();     // shift2 plus (x, y) -> (x, y + 2x)
CongruenceCandidate noncongruence();    // (x, y) -> (x, y + x) on D_1(Z_2) x D_2(Z_2)
CongruenceCandidate alpha_r();          // (x, y) -> (x, y + r(x^2 + 1)), r in Q
CongruenceCandidate gamma_prime();      // (x, y) -> (x, y + r), r in Q

// The 3-cube of the orbit relation that glues two image cubes into a non-cube.
std::vector<PointId> noncongruence_q3();

}  // namespace corpus

// Regenerates every example report; deterministic, no timing.
std::vector<std::pair<std::string, Json>> example_corpus();

// Doubles rounded to 12 decimals, so reports do not depend on the last ulp.
double rounded(double x);

}  // namespace nilspace
