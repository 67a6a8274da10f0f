#ifndef HEATETA_GETZLER_HPP
#define HEATETA_GETZLER_HPP

#include <map>

#include "heateta/symbol.hpp"

namespace heateta {

// Rescaling weight of one term whose coefficient word has the given length:
// xi and the x-derivative direction count 1 (so tau counts 2 through pdeg),
// each generator counts 1, each x factor counts -1.
inline int getzler_weight(const TermKey& key, int word_len) {
  return key.pdeg() + word_len - key.xdeg();
}

// Splits an expansion into weight buckets, transporting Clifford coefficient
// words to exterior words by the canonical label bijection. The bucket
// expansions inherit the floors of the input. The weight is additive under
// composition on the nose: a gamma-summand pairs d_xi^gamma (weight -|gamma|)
// with D_x^gamma (weight +|gamma|), word lengths add in the exterior algebra,
// and Clifford contractions only ever land in lower buckets.
std::map<int, FormExpansion> getzler_decompose(const CliffordExpansion& e);
std::map<int, FormExpansion> getzler_decompose(const FormExpansion& e);

// Largest weight present; kNoFloor for the zero expansion.
int getzler_top(const CliffordExpansion& e);

// Top-weight bucket: the model symbol seen by the rescaled calculus.
FormExpansion getzler_model(const CliffordExpansion& e);

// Single bucket by weight (zero expansion when absent).
FormExpansion getzler_bucket(const CliffordExpansion& e, int weight);

// Reassembles an expansion from its buckets (quantizing the labels back).
// Inverse of getzler_decompose up to term merging.
CliffordExpansion getzler_assemble(int n, int p, const std::map<int, FormExpansion>& buckets);

}  // namespace heateta

#endif
