#ifndef HEATETA_PARAMETRIX_HPP
#define HEATETA_PARAMETRIX_HPP

#include "heateta/symbol.hpp"

namespace heateta {

// Volterra parametrix of a second-order symbol a = sigma(P + d/dt): the
// expansion q ~ sum_{l >= 0} q_{-2-l} solving a # q = 1, produced down to
// parabolic degree pdeg_min and truncated at floor_w in the w grading.
//
// Requirements on a: top parabolic order 2, the x-independent part of the
// leading component exactly |xi|^2 + i tau with identity coefficient, and
// every x-dependent leading term polynomial in xi (coefficients may be any
// algebra element: the geometric series below is a two-sided inverse without
// commutativity). The leading symbol is inverted by that series, which
// terminates under the w floor (each extra factor lowers w by at least 1).
//
// Pass floor_w = kNoFloor only when the leading component has no
// x-dependence. The returned floors are honest provided the input certifies
// a.floor_w() <= floor_w + 2 and a.floor_deg() <= pdeg_min + 2; violations
// raise BudgetError. Dropped input content below those floors can only reach
// output content below the output floors: under composition the w of a
// product term is the sum of the operand w's, the solved-for leading factor
// contributes w <= -2, and every stored q component has w <= -2.
template <Basis B>
SymbolExpansion<B> parametrix(const SymbolExpansion<B>& a, int pdeg_min, int floor_w);

}  // namespace heateta

#endif
