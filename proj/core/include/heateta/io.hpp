#pragma once

// Curvature-input ingestion and canonical report emission for the command
// line driver. Parsing is strict: unknown keys, out-of-range indices,
// malformed exact scalars, and symmetry conflicts are rejected up front.
// Emission is canonical — reports are assembled from exact strings in a fixed
// key order — so byte-identical output across runs and worker counts is a
// property of construction rather than of luck.

#include <string>

#include "heateta/geometry.hpp"

namespace heateta {

// Reads the UTF-8 JSON schema
//
//   {"dimension": n, "aux_rank": p,
//    "riemann": [{"ijkl": [i,j,k,l], "value": "2/3"}, ...],
//    "twisting_curvature": [{"ij": [i,j], "matrix": [["i/2", ...], ...]}, ...],
//    "jets": {}}
//
// with 1-based indices. Each riemann entry is closed under the full index
// symmetry orbit and each twisting entry under antisymmetry before the
// completed input is validated. "jets" is optional and accepted only empty:
// derivative data beyond the base point is not consumed; the geometry is the
// exact synchronous family determined by R(0) and F(0), whose free higher
// jets are zero.
CurvatureInput parse_curvature_json(const std::string& text);

// parse_curvature_json over the contents of `path`.
CurvatureInput load_curvature_file(const std::string& path);

enum class OutFormat { kTable, kJson };
enum class DiagOp { kIdentity, kDirac };

// One executed subcommand: the canonical stdout payload, an optional warning
// for stderr, and the exit code (0 success, 4 a check failed). Budget and
// validation failures escape as exceptions for the driver to map.
struct RunResult {
  std::string out;
  std::string warn;
  int exit_code = 0;
};

// Diagonal heat expansion at the base point: exponents and exact
// coefficients of t^{(-d-2-n)/2} x (4 pi)^{-n/2} for exp(-t D^2) (identity)
// or D exp(-t D^2) (dirac), through coefficient level l_max. depth <= 0
// picks the smallest jet depth whose floors certify every requested degree.
RunResult run_coeffs(const CurvatureInput& in, DiagOp op, int l_max, int depth, OutFormat f);

// Odd-trace cancellation report: one row per trace level with its exact
// value, PASS/FAIL where the t-exponent is below 1/2 and the theorem demands
// vanishing, "info" above. Exit code 4 when a demanded trace survives.
RunResult run_verify_bf(const CurvatureInput& in, int l_max, int depth, OutFormat f);

// Getzler orders, rescaled-limit model symbols (covariant directions, D,
// D^2 + d_t, Q), and the two-route agreement verdict.
RunResult run_model(const CurvatureInput& in, int depth, OutFormat f);

// Poles and residues of Gamma((s+1)/2) eta(s) visible in the computed
// window n-1-2*l_max <= s <= n.
RunResult run_eta_poles(const CurvatureInput& in, int l_max, int depth, OutFormat f);

// Built-in invariant suites (trace identities, moment oracle agreement,
// diagonal parity, flat cancellation, model agreement, schema round trip).
// Exit code 4 when any fails.
RunResult run_selftest(OutFormat f);

}  // namespace heateta
