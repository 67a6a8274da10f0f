#pragma once

// Diagonal short-time heat expansions of Volterra parametrices, the odd-trace
// cancellation check for Dirac-type operators, and the rescaled-model
// comparison of the resolvent.
//
// For an order-2 generator P (sigma(P) includes + i tau) the parametrix Q has
// components q_{-2-l}; pushing each through the diagonal inverse Fourier
// transform at x = 0 gives
//
//   K(x0, x0, t) = (4 pi)^{-n/2} sum_d nu_d t^{(-d-2-n)/2},
//
// where nu_d is the value attached to stored degree d (the (4 pi)^{-n/2} is
// implicit in the transform normalization and made explicit by callers that
// compare against spectral data). The same formula covers composites
// L # Q: only the stored degrees shift.

#include <vector>

#include "heateta/geometry.hpp"
#include "heateta/getzler.hpp"
#include "heateta/symbol.hpp"

namespace heateta {

// nu_d for d = -2 .. -2-l_max of the parametrix of `generator`. The
// generator's floors must certify degree and w through -2-l_max; the
// parametrix machinery throws BudgetError otherwise.
std::vector<DiagValue<Basis::Clifford>> heat_coefficients(const CliffordExpansion& generator,
                                                          int l_max);

// nu_d for d = -1 .. -1-l_max of left # parametrix(generator), e.g. the
// diagonal data of D exp(-t D^2) when left = sigma(D).
std::vector<DiagValue<Basis::Clifford>> composite_heat_coefficients(
    const CliffordExpansion& left, const CliffordExpansion& generator, int l_max);

// The weight-2 rescaled limit of sigma(D^2 + d_t), assembled directly from the
// input curvature: |xi|^2 + i tau with the connection coefficient
// Theta_ij = (1/8) R_ijkl dx^k dx^l in radial gauge plus the twisting
// curvature two-form,
//
//   sum_i (i xi_i - Theta_ib x^b)(i xi_i - Theta_ic x^c) ... expanded as
//   |xi|^2 + i tau + 2 i sum xi_i Theta_ib x^b - sum (Theta x)^2
//     + (1/2) F_ab(0) dx^a dx^b.
//
// Two-form coefficients are even, so this symbol lives in the commutative part
// of the exterior algebra and its parametrix terminates without a w floor.
FormExpansion model_heat_generator(const CurvatureInput& in);

struct BismutFreedReport {
  int n = 0, p = 1;
  int l_max = 0;
  // Diagonal values of sigma(D) # parametrix(sigma(D^2 + d_t)) by degree,
  // -1 down to -2-2*l_max.
  std::vector<DiagValue<Basis::Clifford>> diag;
  // Pointwise traces at the even degrees -2-2l, l = 0 .. l_max; traces[l]
  // multiplies t^{l - n/2}.
  std::vector<ExactScalar> traces;
  // True when every computed trace with t-exponent below 1/2 (l <= (n-1)/2)
  // vanishes. Traces at higher exponents are informational.
  bool cancels = false;
};

// Exact cancellation behind tr(D exp(-t D^2))(x0) = O(sqrt t): every trace
// with t-exponent below 1/2 vanishes identically. Requires odd n. Odd-degree
// diagonal values are checked to vanish by parity (CheckError otherwise);
// the report carries the even ones through level l_max. depth_hint >= 2
// overrides the jet depth (the minimal certified depth otherwise).
BismutFreedReport bismut_freed_check(const CurvatureInput& in, int l_max,
                                    int depth_hint = -1);

struct ModelReport {
  int heat_top_weight = 0;        // expected 2
  int parametrix_top_weight = 0;  // expected -2
  bool heat_model_matches = false;
  bool parametrix_model_matches = false;
  std::string detail;  // first mismatch, empty when everything agrees
  bool ok() const {
    return heat_top_weight == 2 && parametrix_top_weight == -2 && heat_model_matches &&
           parametrix_model_matches;
  }
};

// Getzler comparison, two independent routes to the rescaled resolvent:
// the weight graded pieces of the Clifford-side parametrix against the
// exterior-algebra parametrix of model_heat_generator.
ModelReport model_resolvent_check(const CurvatureInput& in);

// Simple poles of Gamma((s+1)/2) eta(s) at this point: a diagonal trace term
// c t^{h/2} (h = -d-2-n) with c != 0 puts a pole at s = -h-1 = d+n+1 with
// residue 2c. Rational data only; the Gamma factor is left in place exactly
// so residues stay in Q(i).
struct EtaSingularity {
  int pole = 0;
  ExactScalar residue;
};
std::vector<EtaSingularity> eta_singularities(int n,
                                              const std::vector<DiagValue<Basis::Clifford>>& diag);

// Composite diagonal data for the eta analysis of the operator attached to
// the curvature input: degrees -1 .. -2-2*l_max of D exp(-t D^2).
std::vector<DiagValue<Basis::Clifford>> eta_diagonal(const CurvatureInput& in, int l_max,
                                                     int depth_hint = -1);

}  // namespace heateta
