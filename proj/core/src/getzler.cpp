#include "heateta/getzler.hpp"

#include <bit>

namespace heateta {

namespace {

template <Basis B>
std::map<int, FormExpansion> decompose_impl(const SymbolExpansion<B>& e) {
  std::map<int, FormExpansion> buckets;
  for (const auto& [d, slot] : e.components())
    for (const auto& [key, c] : slot)
      for (const auto& [mask, m] : c.table()) {
        int w = getzler_weight(key, std::popcount(mask));
        auto it = buckets.find(w);
        if (it == buckets.end()) {
          it = buckets.emplace(w, FormExpansion(e.n(), e.p())).first;
          it->second.declare_floors(e.floor_deg(), e.floor_w());
        }
        it->second.add_term(key, FormCoef::word(e.n(), e.p(), mask, m));
      }
  return buckets;
}

}  // namespace

std::map<int, FormExpansion> getzler_decompose(const CliffordExpansion& e) {
  return decompose_impl(e);
}
std::map<int, FormExpansion> getzler_decompose(const FormExpansion& e) {
  return decompose_impl(e);
}

int getzler_top(const CliffordExpansion& e) {
  int top = kNoFloor;
  for (const auto& [d, slot] : e.components())
    for (const auto& [key, c] : slot)
      for (const auto& [mask, m] : c.table()) {
        int w = getzler_weight(key, std::popcount(mask));
        if (w > top) top = w;
      }
  return top;
}

FormExpansion getzler_model(const CliffordExpansion& e) {
  return getzler_bucket(e, getzler_top(e));
}

FormExpansion getzler_bucket(const CliffordExpansion& e, int weight) {
  FormExpansion out(e.n(), e.p());
  out.declare_floors(e.floor_deg(), e.floor_w());
  for (const auto& [d, slot] : e.components())
    for (const auto& [key, c] : slot)
      for (const auto& [mask, m] : c.table())
        if (getzler_weight(key, std::popcount(mask)) == weight)
          out.add_term(key, FormCoef::word(e.n(), e.p(), mask, m));
  return out;
}

CliffordExpansion getzler_assemble(int n, int p, const std::map<int, FormExpansion>& buckets) {
  CliffordExpansion out(n, p);
  for (const auto& [w, bucket] : buckets) {
    out.declare_floors(bucket.floor_deg(), bucket.floor_w());
    for (const auto& [d, slot] : bucket.components())
      for (const auto& [key, c] : slot) out.add_term(key, quantize(c));
  }
  return out;
}

}  // namespace heateta
