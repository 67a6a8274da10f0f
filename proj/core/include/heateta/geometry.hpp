#pragma once

// Synchronous-frame geometry from exact curvature data at a base point.
//
// The input is the Riemann tensor and the twisting curvature at one point.
// From it we build the degree-2 polynomial metric
//
//   g_ij(x) = delta_ij + (1/3) R_ikjl x^k x^l,
//
// which satisfies the radial gauge g_ij x^j = x_i identically (the x-contracted
// slots of R are antisymmetric), and then derive everything else as truncated
// power series: the inverse metric, Christoffel symbols, the radially parallel
// orthonormal frame, its connection form, and the Dirac-type symbols over them.
// All coefficients are exact rationals; each derived field is exact through its
// stated degree.
//
// Conventions, fixed once and checked by the builder on every input:
//   R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y],
//   R_ijkl = <R(d_i, d_j) d_k, d_l>,   scal = sum_ij R_ijji,
// so the unit two-sphere has R_1221 = 1 and scal = 2. The twisting connection
// is put in radial gauge A_i = -(1/2) F_ij(0) x^j with F = dA + A ^ A, and the
// Clifford generators square to -1.

#include <map>
#include <vector>

#include "heateta/algebra.hpp"
#include "heateta/symbol.hpp"

namespace heateta {

// Power series with exact coefficients, keyed by monomial.
using ScalarJet = std::map<MultiIndex, Rational>;
using MatJet = std::map<MultiIndex, Mat>;

// Pointwise curvature data: R_ijkl packed in row-major order and the twisting
// curvature F_ij(0), an antisymmetric array of skew-Hermitian p x p matrices.
struct CurvatureInput {
  int n = 0;
  int p = 1;
  std::vector<Rational> riemann;
  std::vector<Mat> twist;

  CurvatureInput(int n_, int p_);
  Rational& riem(int i, int j, int k, int l);
  const Rational& riem(int i, int j, int k, int l) const;
  Mat& f(int i, int j);
  const Mat& f(int i, int j) const;
};

// Writes one component together with its full symmetry orbit (both
// antisymmetries and the pair exchange). Setting a slot that already holds a
// conflicting nonzero value throws CheckError, so each independent component
// should be assigned once.
void set_riemann(CurvatureInput& in, int i, int j, int k, int l, const Rational& v);

// Index symmetries, the first Bianchi identity, and skew-Hermitian twist
// matrices of the right size. Throws ValidationError naming the first failure.
void validate_curvature(const CurvatureInput& in);

// Jets of the geometry in synchronous gauge, truncated at total degree
// `depth`. metric, gauge, and twist_field are exact polynomials; metric_inv,
// christoffel, and frame are exact through degree depth; spin, riemann_field,
// ricci, and scal through depth - 1. Layout: christoffel[k][i][j] is
// Gamma^k_ij, frame[k][i] is e_k^i, frame_low[l][m] is g_mj e_l^j, and
// spin[i][k][l] is omega_ikl = <nabla_i e_k, e_l>.
struct SynchronousJets {
  int n = 0, p = 1, depth = 0;
  std::vector<ScalarJet> metric, metric_inv;  // n*n
  std::vector<ScalarJet> christoffel;         // n*n*n
  std::vector<ScalarJet> frame, frame_low;    // n*n
  std::vector<ScalarJet> spin;                // n*n*n
  std::vector<MatJet> gauge;                  // n
  std::vector<MatJet> twist_field;            // n*n
  std::vector<ScalarJet> riemann_field;       // n*n*n*n
  std::vector<ScalarJet> ricci;               // n*n
  ScalarJet scal;
};

// Builds the jets and checks the chain behind them: the radial gauge identity,
// g g^{-1} = 1, orthonormality of the frame, antisymmetry and vanishing at 0
// of the connection form, recovery of the input curvature at the base point,
// and F(0) = twist. Violations throw CheckError. Requires depth >= 2.
SynchronousJets synchronous_jets(const CurvatureInput& in, int depth);

// Multiplication operator by a truncated series times a fixed coefficient.
// valid_deg < 0 declares the series exact; otherwise terms beyond valid_deg
// are certified missing and the w floor is set accordingly.
CliffordExpansion jet_symbol(int n, int p, const ScalarJet& jet, int valid_deg,
                             const CliffordCoef& coef);
CliffordExpansion jet_symbol(int n, int p, const MatJet& jet, int valid_deg,
                             const CliffordCoef& left);

// sigma(nabla_i) = i xi_i + (1/4) omega_ikl(x) c^k c^l + A_i(x), 1-based i.
CliffordExpansion covariant_symbol(const SynchronousJets& S, int i);

// sigma(D) for D = c^k e_k^i(x) nabla_i.
CliffordExpansion dirac_symbol(const SynchronousJets& S);

// sigma(D^2 + d_t): the Volterra symbol the parametrix machinery inverts.
CliffordExpansion heat_generator_symbol(const SynchronousJets& S);

// The same operator assembled down the other route:
//   -g^ij (nabla_i nabla_j - Gamma^k_ij nabla_k)
//     + (1/2) c^k c^l e_k^a e_l^b F_ab(x) + scal(x)/4.
// Agreement with compose(sigma(D), sigma(D)) on the trusted window pins every
// sign and normalization above.
CliffordExpansion lichnerowicz_symbol(const SynchronousJets& S);

}  // namespace heateta
