#include "heateta/io.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include "heateta/error.hpp"
#include "heateta/heat.hpp"
#include "heateta/oracle.hpp"
#include "heateta/parametrix.hpp"
#include "json.hpp"

namespace heateta {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& msg) { throw ParseError(msg); }

int get_int(const json& j, const char* what) {
  if (!j.is_number_integer()) bad(std::string(what) + " must be an integer");
  return j.get<int>();
}

std::string get_str(const json& j, const char* what) {
  if (!j.is_string()) bad(std::string(what) + " must be a string");
  return j.get<std::string>();
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> known,
                         const char* where) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || item.key() == k;
    if (!ok) bad("unknown key \"" + item.key() + "\" in " + where);
  }
}

// 1-based index from the input, converted to the 0-based engine convention.
int get_index(const json& j, int n, const char* what) {
  int v = get_int(j, what);
  if (v < 1 || v > n)
    bad(std::string(what) + " index " + std::to_string(v) + " out of range 1.." +
        std::to_string(n));
  return v - 1;
}

}  // namespace

CurvatureInput parse_curvature_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) bad("top level must be an object");
  reject_unknown_keys(j, {"dimension", "aux_rank", "riemann", "twisting_curvature", "jets"},
                      "the top-level object");
  if (!j.contains("dimension") || !j.contains("aux_rank"))
    bad("\"dimension\" and \"aux_rank\" are required");

  const int n = get_int(j["dimension"], "\"dimension\"");
  const int p = get_int(j["aux_rank"], "\"aux_rank\"");
  if (n >= 1 && n % 2 == 0)
    throw ValidationError("even dimension " + std::to_string(n) +
                          " unsupported: the cancellation theorem needs odd n");
  CurvatureInput in(n, p);  // rejects n outside 1..8 and p < 1

  if (j.contains("riemann")) {
    if (!j["riemann"].is_array()) bad("\"riemann\" must be an array");
    for (const json& e : j["riemann"]) {
      if (!e.is_object()) bad("riemann entries must be objects");
      reject_unknown_keys(e, {"ijkl", "value"}, "a riemann entry");
      if (!e.contains("ijkl") || !e.contains("value"))
        bad("riemann entries need \"ijkl\" and \"value\"");
      const json& ix = e["ijkl"];
      if (!ix.is_array() || ix.size() != 4) bad("\"ijkl\" must hold four indices");
      int idx[4];
      for (int t = 0; t < 4; ++t) idx[t] = get_index(ix[t], n, "riemann");
      Rational v = parse_rational(get_str(e["value"], "riemann \"value\""));
      try {
        // Closes the full symmetry orbit of the entry; a conflict with an
        // earlier entry is an input problem, not an engine defect.
        set_riemann(in, idx[0], idx[1], idx[2], idx[3], v);
      } catch (const CheckError& ce) {
        throw ValidationError(std::string("inconsistent riemann data: ") + ce.what());
      }
    }
  }

  if (j.contains("twisting_curvature")) {
    if (!j["twisting_curvature"].is_array()) bad("\"twisting_curvature\" must be an array");
    std::set<std::pair<int, int>> seen;
    for (const json& e : j["twisting_curvature"]) {
      if (!e.is_object()) bad("twisting_curvature entries must be objects");
      reject_unknown_keys(e, {"ij", "matrix"}, "a twisting_curvature entry");
      if (!e.contains("ij") || !e.contains("matrix"))
        bad("twisting_curvature entries need \"ij\" and \"matrix\"");
      const json& ix = e["ij"];
      if (!ix.is_array() || ix.size() != 2) bad("\"ij\" must hold two indices");
      const int a = get_index(ix[0], n, "twisting"), b = get_index(ix[1], n, "twisting");
      if (a == b)
        throw ValidationError("twisting_curvature indices must differ (F is antisymmetric)");
      if (!seen.insert({std::min(a, b), std::max(a, b)}).second)
        throw ValidationError("duplicate twisting_curvature entry for one index pair");
      const json& rows = e["matrix"];
      if (!rows.is_array() || (int)rows.size() != p)
        bad("\"matrix\" must have aux_rank rows");
      Mat m(p);
      for (int r = 0; r < p; ++r) {
        if (!rows[r].is_array() || (int)rows[r].size() != p)
          bad("\"matrix\" rows must have aux_rank entries");
        for (int c = 0; c < p; ++c)
          m.at(r, c) = parse_exact(get_str(rows[r][c], "twisting matrix entry"));
      }
      in.f(a, b) = m;
      in.f(b, a) = m * ExactScalar(-1);
    }
  }

  if (j.contains("jets")) {
    const json& jets = j["jets"];
    if (!(jets.is_null() || (jets.is_object() && jets.empty())))
      throw ValidationError(
          "\"jets\": derivative data beyond the base point is not consumed; omit the key or "
          "leave it empty — the geometry is the exact synchronous family of R(0) and F(0), "
          "whose free higher jets are zero");
  }

  validate_curvature(in);
  return in;
}

CurvatureInput load_curvature_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot read \"" + path + "\"");
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_curvature_json(buf.str());
}

namespace {

// ---------------------------------------------------------------------------
// Emission helpers. Every piece of a report is an exact string or an int and
// every container is iterated in canonical (map / fixed array) order, so the
// same inputs produce the same bytes no matter the worker count.

Rational half(int num) {
  Rational r(num, 2);
  r.canonicalize();
  return r;
}

std::string norm_token(int n) { return "(4π)^{-" + std::to_string(n) + "/2}"; }

// Exponent of t attached to stored degree d: (-d-2-n)/2.
std::string exponent_string(int degree, int n) { return to_string(half(-degree - 2 - n)); }

std::string coef_string(const CliffordCoef& v) {
  if (auto s = v.as_scalar()) return to_string(*s);
  return to_string(v);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Orders l >= 2 are the first place genuinely free jet data (curvature
// derivatives at the base point) could enter; this engine evaluates them in
// the exact synchronous family of the pointwise input, where those jets are
// zero.
std::string jet_default_warning(int l_max) {
  if (l_max < 2) return "";
  return "warning: coefficients at level 2 and above can depend on curvature derivatives at "
         "the base point; they are evaluated with the free higher jets of the synchronous "
         "family set to zero\n";
}

template <Basis B>
struct TermRow {
  int degree;
  std::string coef, term;
};

// Canonical listing: leading degree first, then the key order of the term
// map within each degree.
template <Basis B>
std::vector<TermRow<B>> expansion_rows(const SymbolExpansion<B>& e) {
  std::vector<TermRow<B>> rows;
  const auto& comp = e.components();
  for (auto it = comp.rbegin(); it != comp.rend(); ++it)
    for (const auto& [key, c] : it->second)
      rows.push_back({it->first, to_string(c), to_string(key)});
  return rows;
}

template <Basis B>
void print_expansion(std::ostringstream& os, const SymbolExpansion<B>& e) {
  auto rows = expansion_rows(e);
  if (rows.empty()) {
    os << "  0\n";
    return;
  }
  for (const auto& r : rows) os << "  [" << r.degree << "] {" << r.coef << "} " << r.term << "\n";
}

template <Basis B>
json expansion_json(const SymbolExpansion<B>& e) {
  json arr = json::array();
  for (const auto& r : expansion_rows(e))
    arr.push_back(json{{"coefficient", r.coef}, {"degree", r.degree}, {"term", r.term}});
  return arr;
}

}  // namespace

RunResult run_coeffs(const CurvatureInput& in, DiagOp op, int l_max, int depth, OutFormat f) {
  if (l_max < 0) throw ValidationError("expansion order must be nonnegative");
  validate_curvature(in);
  std::vector<DiagValue<Basis::Clifford>> diag;
  if (op == DiagOp::kIdentity) {
    // exp(-t D^2): levels b_0 .. b_{l_max} live at stored degrees -2 .. -2-2l.
    const int d = depth >= 2 ? depth : std::max(2, 2 * l_max + 2);
    auto S = synchronous_jets(in, d);
    diag = heat_coefficients(heat_generator_symbol(S), 2 * l_max);
  } else {
    // D exp(-t D^2): stored degrees -1 .. -2-2*l_max.
    diag = eta_diagonal(in, l_max, depth);
  }

  RunResult res;
  res.warn = jet_default_warning(l_max);
  const char* opname = op == DiagOp::kIdentity ? "exp(-t D^2)" : "D exp(-t D^2)";
  if (f == OutFormat::kJson) {
    json rows = json::array();
    for (const auto& dv : diag)
      rows.push_back(json{{"coefficient", coef_string(dv.value)},
                          {"exponent", exponent_string(dv.degree, in.n)}});
    res.out = dump(json{{"command", "coeffs"},
                        {"l_max", l_max},
                        {"n", in.n},
                        {"normalization", norm_token(in.n)},
                        {"op", op == DiagOp::kIdentity ? "identity" : "dirac"},
                        {"p", in.p},
                        {"rows", rows}});
  } else {
    std::ostringstream os;
    os << "coeffs: diagonal expansion of " << opname << ", n = " << in.n << ", p = " << in.p
       << ", l_max = " << l_max << "\n";
    for (const auto& dv : diag)
      os << "  t^" << exponent_string(dv.degree, in.n) << "  " << coef_string(dv.value) << " × "
         << norm_token(in.n) << "\n";
    res.out = os.str();
  }
  return res;
}

RunResult run_verify_bf(const CurvatureInput& in, int l_max, int depth, OutFormat f) {
  BismutFreedReport rep = bismut_freed_check(in, l_max, depth);

  struct Row {
    std::string exponent, value, status;
  };
  std::vector<Row> rows;
  for (size_t l = 0; l < rep.traces.size(); ++l) {
    Row r;
    r.exponent = to_string(half(2 * (int)l - rep.n));
    r.value = to_string(rep.traces[l]);
    if (2 * (int)l < rep.n)
      r.status = rep.traces[l].is_zero() ? "PASS" : "FAIL";
    else
      r.status = "info";  // exponent >= 1/2: not required to vanish
    rows.push_back(std::move(r));
  }

  RunResult res;
  res.warn = jet_default_warning(l_max);
  res.exit_code = rep.cancels ? 0 : 4;
  if (f == OutFormat::kJson) {
    json traces = json::array();
    for (const auto& r : rows)
      traces.push_back(
          json{{"exponent", r.exponent}, {"status", r.status}, {"value", r.value}});
    res.out = dump(json{{"command", "verify-bf"},
                        {"l_max", rep.l_max},
                        {"n", rep.n},
                        {"p", rep.p},
                        {"result", rep.cancels ? "PASS" : "FAIL"},
                        {"traces", traces}});
  } else {
    std::ostringstream os;
    os << "verify-bf: odd-trace cancellation for D exp(-t D^2), n = " << rep.n
       << ", p = " << rep.p << ", l_max = " << rep.l_max << "\n";
    for (const auto& r : rows)
      os << "  t^" << r.exponent << "  trace " << r.value << "  " << r.status << "\n";
    os << "result: " << (rep.cancels ? "PASS" : "FAIL") << "\n";
    res.out = os.str();
  }
  return res;
}

RunResult run_model(const CurvatureInput& in, int depth, OutFormat f) {
  validate_curvature(in);
  const int d = depth >= 2 ? depth : 5;
  auto S = synchronous_jets(in, d);

  std::vector<CliffordExpansion> covariant;
  for (int i = 1; i <= in.n; ++i) covariant.push_back(covariant_symbol(S, i));
  CliffordExpansion dirac = dirac_symbol(S);
  CliffordExpansion heat = heat_generator_symbol(S);
  // Exterior-side resolvent of the model generator; its graded degrees
  // -2 .. -4 are what the rescaled limit of the true parametrix must match.
  FormExpansion q_model = parametrix(model_heat_generator(in), -4, kNoFloor);

  ModelReport rep = model_resolvent_check(in);

  RunResult res;
  res.exit_code = rep.ok() ? 0 : 4;
  if (f == OutFormat::kJson) {
    json orders;
    for (int i = 0; i < in.n; ++i)
      orders["nabla_" + std::to_string(i + 1)] = getzler_top(covariant[i]);
    orders["D"] = getzler_top(dirac);
    orders["D^2+d_t"] = rep.heat_top_weight;
    orders["Q"] = rep.parametrix_top_weight;
    json models;
    for (int i = 0; i < in.n; ++i)
      models["nabla_" + std::to_string(i + 1)] = expansion_json(getzler_model(covariant[i]));
    models["D"] = expansion_json(getzler_model(dirac));
    models["D^2+d_t"] = expansion_json(getzler_model(heat));
    models["Q"] = expansion_json(q_model);
    res.out = dump(json{{"agreement", rep.ok() ? "PASS" : "FAIL"},
                        {"command", "model"},
                        {"depth", d},
                        {"detail", rep.detail},
                        {"models", models},
                        {"n", in.n},
                        {"orders", orders},
                        {"p", in.p}});
  } else {
    std::ostringstream os;
    os << "model: Getzler rescaled limits, n = " << in.n << ", p = " << in.p
       << ", depth = " << d << "\n";
    os << "orders:";
    for (int i = 0; i < in.n; ++i)
      os << " nabla_" << i + 1 << " = " << getzler_top(covariant[i]) << ",";
    os << " D = " << getzler_top(dirac) << ", D^2 + d_t = " << rep.heat_top_weight
       << ", Q = " << rep.parametrix_top_weight << "\n";
    for (int i = 0; i < in.n; ++i) {
      os << "sigma_model(nabla_" << i + 1 << "):\n";
      print_expansion(os, getzler_model(covariant[i]));
    }
    os << "sigma_model(D):\n";
    print_expansion(os, getzler_model(dirac));
    os << "sigma_model(D^2 + d_t):\n";
    print_expansion(os, getzler_model(heat));
    os << "sigma_model(Q), graded degrees -2 .. -4:\n";
    print_expansion(os, q_model);
    os << "agreement: " << (rep.ok() ? "PASS" : "FAIL") << "\n";
    if (!rep.detail.empty()) os << "detail: " << rep.detail << "\n";
    res.out = os.str();
  }
  return res;
}

RunResult run_eta_poles(const CurvatureInput& in, int l_max, int depth, OutFormat f) {
  auto diag = eta_diagonal(in, l_max, depth);
  auto poles = eta_singularities(in.n, diag);
  const int window_min = in.n - 1 - 2 * l_max, window_max = in.n;

  RunResult res;
  res.warn = jet_default_warning(l_max);
  if (f == OutFormat::kJson) {
    json rows = json::array();
    for (const auto& s : poles)
      rows.push_back(json{{"residue", to_string(s.residue)}, {"s", s.pole}});
    res.out = dump(json{{"command", "eta-poles"},
                        {"l_max", l_max},
                        {"n", in.n},
                        {"p", in.p},
                        {"poles", rows},
                        {"window", json{{"max", window_max}, {"min", window_min}}}});
  } else {
    std::ostringstream os;
    os << "eta-poles: Gamma((s+1)/2) eta(s), n = " << in.n << ", p = " << in.p
       << ", l_max = " << l_max << ", window " << window_min << " <= s <= " << window_max
       << "\n";
    if (poles.empty())
      os << "  none\n";
    else
      for (const auto& s : poles)
        os << "  s = " << s.pole << "  residue = " << to_string(s.residue) << "\n";
    res.out = os.str();
  }
  return res;
}

namespace {

// ---------------------------------------------------------------------------
// Self-test suites. Each is a fast, deterministic invariant check; floats
// appear only inside oracle comparisons and never in the output.

struct Rng {
  uint64_t s = 0x243F6A8885A308D3ull;
  uint64_t next() {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return s;
  }
  int uni(int m) { return (int)(next() % (uint64_t)m); }
};

bool trace_identity_suite() {
  for (int n : {3, 5}) {
    const int m = n / 2;
    ExactScalar dim(1);
    for (int t = 0; t < m; ++t) dim *= ExactScalar(2);
    if (spinor_trace_word_constant(n, 0) != dim) return false;
    for (int len = 1; len < n; ++len)
      if (!spinor_trace_word_constant(n, len).is_zero()) return false;
    ExactScalar phase(1);
    for (int t = 0; t < m + 1; ++t) phase *= ExactScalar(Rational(0), Rational(-1));
    if (spinor_trace_word_constant(n, n) != phase * dim) return false;
  }
  return true;
}

bool moment_oracle_suite() {
  for (int n = 1; n <= 3; ++n) {
    std::vector<int> beta(n, 0);
    // All exponent vectors with entries <= 3 and total degree <= 4.
    std::function<bool(int)> scan = [&](int axis) -> bool {
      if (axis == n) {
        int total = 0;
        for (int b : beta) total += b;
        if (total > 4) return true;
        double exact = gaussian_moment_exact(beta).get_d();
        double numeric = oracle::gaussian_moment_numeric(beta);
        return std::fabs(exact - numeric) <= 1e-10;
      }
      for (int b = 0; b <= 3; ++b) {
        beta[axis] = b;
        if (!scan(axis + 1)) return false;
      }
      return true;
    };
    if (!scan(0)) return false;
  }
  return true;
}

// Odd stored degree forces an odd xi exponent in every contributing term, so
// the diagonal value must vanish identically whatever the coefficients are.
bool diagonal_parity_suite() {
  Rng rng;
  for (int trial = 0; trial < 20; ++trial) {
    CliffordExpansion e(3, 1);
    for (int t = 0; t < 6; ++t) {
      TermKey key{};
      for (int i = 0; i < 3; ++i) {
        key.alpha[i] = (uint8_t)rng.uni(3);
        key.beta[i] = (uint8_t)rng.uni(3);
      }
      key.k = (uint16_t)rng.uni(3);
      if (key.k == 0 && rng.uni(2)) key.tau = 1;
      ExactScalar c(Rational(rng.uni(9) - 4), Rational(rng.uni(9) - 4));
      e.add_term(key, CliffordCoef::word(3, 1, (uint32_t)rng.uni(8), c));
    }
    for (const auto& [d, slot] : e.components()) {
      (void)slot;
      if (d % 2 == 0) continue;
      if (!inverse_fourier_diag(e, d).value.is_zero()) return false;
    }
  }
  return true;
}

bool flat_cancellation_suite() {
  CurvatureInput in(3, 1);
  BismutFreedReport rep = bismut_freed_check(in, 1);
  if (!rep.cancels) return false;
  for (const auto& tr : rep.traces)
    if (!tr.is_zero()) return false;
  return true;
}

bool model_agreement_suite() {
  CurvatureInput flat(3, 1);
  if (!model_resolvent_check(flat).ok()) return false;
  CurvatureInput plane(3, 1);
  set_riemann(plane, 0, 1, 0, 1, Rational(1));
  return model_resolvent_check(plane).ok();
}

bool schema_suite() {
  auto in = parse_curvature_json(
      R"({"dimension":3,"aux_rank":1,"riemann":[{"ijkl":[1,2,1,2],"value":"1"}],)"
      R"("twisting_curvature":[],"jets":{}})");
  // The symmetry orbit of the single entry must be closed.
  if (in.riem(0, 1, 0, 1) != Rational(1)) return false;
  if (in.riem(1, 0, 0, 1) != Rational(-1)) return false;
  if (in.riem(0, 1, 1, 0) != Rational(-1)) return false;
  try {
    parse_curvature_json(R"({"dimension":4,"aux_rank":1})");
    return false;
  } catch (const ValidationError&) {
  }
  try {
    parse_curvature_json(R"({"dimension":3,"aux_rank":1,"riemann":[],"extra":0})");
    return false;
  } catch (const ParseError&) {
  }
  return true;
}

}  // namespace

RunResult run_selftest(OutFormat f) {
  struct Suite {
    const char* name;
    bool (*run)();
  };
  const Suite suites[] = {
      {"clifford trace identities", trace_identity_suite},
      {"gaussian moments against quadrature", moment_oracle_suite},
      {"diagonal parity vanishing", diagonal_parity_suite},
      {"flat odd-trace cancellation", flat_cancellation_suite},
      {"rescaled model agreement", model_agreement_suite},
      {"input schema closure and rejection", schema_suite},
  };

  bool all = true;
  std::vector<std::pair<std::string, bool>> results;
  for (const Suite& s : suites) {
    bool pass = false;
    try {
      pass = s.run();
    } catch (...) {
      pass = false;
    }
    all = all && pass;
    results.emplace_back(s.name, pass);
  }

  RunResult res;
  res.exit_code = all ? 0 : 4;
  if (f == OutFormat::kJson) {
    json rows = json::array();
    for (const auto& [name, pass] : results)
      rows.push_back(json{{"name", name}, {"status", pass ? "PASS" : "FAIL"}});
    res.out = dump(json{{"command", "selftest"},
                        {"result", all ? "PASS" : "FAIL"},
                        {"suites", rows}});
  } else {
    std::ostringstream os;
    os << "selftest: built-in invariant suites\n";
    for (const auto& [name, pass] : results)
      os << "  " << name << "  " << (pass ? "PASS" : "FAIL") << "\n";
    os << "result: " << (all ? "PASS" : "FAIL") << "\n";
    res.out = os.str();
  }
  return res;
}

}  // namespace heateta
