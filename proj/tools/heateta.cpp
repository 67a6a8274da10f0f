// Command-line driver: ingest a curvature-input JSON file, run one of the
// engine's report commands, and emit it in table or JSON form. All output is
// exact and canonically ordered, so repeated runs — at any HEATETA_THREADS
// setting — are byte-identical.
//
// Exit codes: 0 success, 1 usage, 2 invalid input, 3 budget exceeded,
// 4 a verification check failed.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "heateta/error.hpp"
#include "heateta/io.hpp"

namespace {

struct Options {
  std::string input;
  std::string format = "table";
  std::string op = "identity";
  int l_max = 0;
  int depth = 0;  // 0 = smallest certified depth for the request
};

void add_common(CLI::App* cmd, Options& o, bool needs_input, bool has_lmax, int default_lmax) {
  if (needs_input)
    cmd->add_option("--input", o.input, "curvature-input JSON file")->required();
  if (has_lmax) {
    o.l_max = default_lmax;
    cmd->add_option("--lmax", o.l_max,
                    "coefficient levels to compute (documented maximum 2; higher levels "
                    "outgrow desk-scale runtimes)")
        ->check(CLI::Range(0, 2))
        ->capture_default_str();
  }
  cmd->add_option("--depth", o.depth,
                  "override the synchronous jet depth (default: smallest depth whose "
                  "floors certify every requested degree)")
      ->check(CLI::Range(2, 16));
  cmd->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"table", "json"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "heateta — exact diagonal heat-kernel coefficients of Dirac-type operators\n"
      "from pointwise curvature data, with the odd-trace cancellation and\n"
      "Getzler-model cross-checks"};
  app.require_subcommand(1);

  Options o;
  CLI::App* coeffs = app.add_subcommand(
      "coeffs", "diagonal expansion of exp(-t D^2) or D exp(-t D^2) at the base point");
  add_common(coeffs, o, true, true, 0);
  coeffs->add_option("--op", o.op, "operator in front of the heat semigroup")
      ->check(CLI::IsMember({"identity", "dirac"}))
      ->capture_default_str();

  CLI::App* verify = app.add_subcommand(
      "verify-bf", "check that every trace of D exp(-t D^2) below t^{1/2} vanishes exactly");
  add_common(verify, o, true, true, 1);

  CLI::App* model = app.add_subcommand(
      "model", "Getzler orders, rescaled-limit model symbols, and the two-route agreement");
  add_common(model, o, true, false, 0);

  CLI::App* eta = app.add_subcommand(
      "eta-poles", "poles and exact residues of Gamma((s+1)/2) eta(s) in the computed window");
  add_common(eta, o, true, true, 1);

  CLI::App* selftest =
      app.add_subcommand("selftest", "run the built-in invariant suites");
  selftest->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"table", "json"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  using namespace heateta;
  const OutFormat fmt = o.format == "json" ? OutFormat::kJson : OutFormat::kTable;
  try {
    RunResult res;
    if (selftest->parsed()) {
      res = run_selftest(fmt);
    } else {
      CurvatureInput in = load_curvature_file(o.input);
      if (coeffs->parsed())
        res = run_coeffs(in, o.op == "dirac" ? DiagOp::kDirac : DiagOp::kIdentity, o.l_max,
                         o.depth, fmt);
      else if (verify->parsed())
        res = run_verify_bf(in, o.l_max, o.depth, fmt);
      else if (model->parsed())
        res = run_model(in, o.depth, fmt);
      else
        res = run_eta_poles(in, o.l_max, o.depth, fmt);
    }
    if (!res.warn.empty()) std::cerr << res.warn;
    std::cout << res.out;
    return res.exit_code;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    // CheckError and anything else from the engine: a verification failed.
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
