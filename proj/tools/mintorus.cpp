// mintorus: spectra, verification ledgers and functional tables for the
// minimal tori M_{m,n} in S^5.
//
// exit codes: 0 ok, 1 a check failed, 2 bad arguments, 3 solver failure,
// 4 output could not be written

#include <CLI11.hpp>

#include <cstdlib>
#include <exception>
#include <iostream>
#include <numeric>
#include <string>

#include "mintorus/mintorus.hpp"

using namespace mintorus;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitSolver = 3;
constexpr int kExitIo = 4;

bool power_of_two(long long v) { return v > 0 && (v & (v - 1)) == 0; }

int checked_grid(long long n, const std::string& source) {
  if (!power_of_two(n) || n < 32 || n > (1 << 20))
    throw InvalidArgument(source + " must be a power of two in [32, 2^20], got " + std::to_string(n));
  return static_cast<int>(n);
}

// --grid beats SPECTRA_GRID_N beats the built-in default
int resolve_grid(long long flag) {
  if (flag > 0) return checked_grid(flag, "--grid");
  if (const char* env = std::getenv("SPECTRA_GRID_N")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end == env || *end != '\0') throw InvalidArgument("SPECTRA_GRID_N is not an integer: '" + std::string(env) + "'");
    return checked_grid(v, "SPECTRA_GRID_N");
  }
  return kDefaultGridSize;
}

struct Common {
  std::string format = "text";
  std::string out;
  int precision = 12;

  OutputConfig config() const {
    OutputConfig c;
    c.format = parse_format(format);
    if (!out.empty()) c.out_path = out;
    c.precision = precision;
    c.validate();
    return c;
  }
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--format", c.format, "json, csv or text")->capture_default_str();
  app->add_option("--out", c.out, "write to this file instead of stdout");
  app->add_option("--precision", c.precision, "significant digits, 4..17")->capture_default_str();
}

std::string merged_label(BoundaryFlavor bc, bool merged) {
  std::string s = to_string(bc);
  return merged ? s + "-merged" : s;
}

void add_params(Document& doc, const TorusParams& p) {
  doc.params.push_back({"m", static_cast<long long>(p.m())});
  doc.params.push_back({"n", static_cast<long long>(p.n())});
  doc.params.push_back({"parity", std::string(to_string(p.parity()))});
}

Table checks_table(const std::vector<CheckEntry>& checks) {
  Table t{{"id", "status", "margin", "tolerance", "detail"}, {}};
  for (const CheckEntry& c : checks)
    t.add({c.id, std::string(to_string(c.status)), c.margin, c.tolerance, c.detail});
  return t;
}

Table functional_table() {
  return {{"m", "n", "parity", "index", "k", "K", "E", "area", "Lambda_closed", "Lambda_numeric", "nonmax_margin"}, {}};
}

void add_functional_row(Table& t, const TorusParams& p) {
  const FunctionalReport f = functional_value(p);
  const EllipticPair ke = agm_KE(modulus(p));
  t.add({static_cast<long long>(p.m()), static_cast<long long>(p.n()), std::string(to_string(p.parity())),
         static_cast<long long>(f.index), ke.k, ke.K, ke.E, area(p), f.lambda_closed, f.lambda_numeric,
         f.nonmax_margin});
}

int cmd_spectrum(int m, int n, int l_max, long long grid_flag, const Common& common) {
  const OutputConfig cfg = common.config();
  if (l_max < 0 || l_max > 64) throw InvalidArgument("--l-max must lie in [0, 64]");
  const TorusParams params = TorusParams::create(m, n);
  const int grid = resolve_grid(grid_flag);

  Document doc;
  doc.primary = Document::Primary::spectra;
  add_params(doc, params);
  doc.params.push_back({"l_max", static_cast<long long>(l_max)});
  doc.params.push_back({"grid", static_cast<long long>(grid)});
  doc.spectra = {{"l", "i", "lambda", "zeros", "flavor"}, {}};
  constexpr int kPerLevel = 6;
  for (int l = 0; l <= l_max; ++l) {
    // odd mn admits one flavor per l; even mn merges both into the 2 pi spectrum
    const std::vector<BoundaryFlavor> flavors = admitted_flavors(params, l);
    if (flavors.size() == 2) {
      const MergedSpectrum s = merged_spectrum(params, l, kPerLevel, grid);
      for (int i = 0; i < kPerLevel && i < static_cast<int>(s.eigenvalues.size()); ++i)
        doc.spectra.add({static_cast<long long>(l), static_cast<long long>(i), s.eigenvalues[i],
                         static_cast<long long>(s.zero_counts[i]), merged_label(s.origin[i], true)});
    } else {
      const SLSpectrum s = extrapolate(build_problem(params, l, flavors.front(), grid), kPerLevel);
      for (int i = 0; i < kPerLevel; ++i)
        doc.spectra.add({static_cast<long long>(l), static_cast<long long>(i), s.eigenvalues[i],
                         static_cast<long long>(2 * s.zero_counts[i]), merged_label(flavors.front(), false)});
    }
  }
  emit(render(doc, cfg), cfg);
  return kExitOk;
}

int cmd_verify(int m, int n, double tol, long long grid_flag, const Common& common) {
  const OutputConfig cfg = common.config();
  const TorusParams params = TorusParams::create(m, n);
  const int grid = resolve_grid(grid_flag);
  const VerificationReport report = full_report(params, tol, grid);

  Document doc;
  doc.primary = Document::Primary::checks;
  add_params(doc, params);
  doc.params.push_back({"tol", tol});
  doc.params.push_back({"grid", static_cast<long long>(grid)});
  doc.checks = checks_table(report.checks);
  doc.functionals = functional_table();
  add_functional_row(doc.functionals, params);
  doc.notes.push_back(std::string("overall: ") + (report.overall() ? "pass" : "fail"));
  emit(render(doc, cfg), cfg);
  if (report.has_diagnostic()) return kExitSolver;
  return report.overall() ? kExitOk : kExitCheckFailed;
}

int cmd_table(int sum_max, const Common& common) {
  const OutputConfig cfg = common.config();
  if (sum_max < 2 || sum_max > 20) throw InvalidArgument("--sum-max must lie in [2, 20]");
  Document doc;
  doc.primary = Document::Primary::functionals;
  doc.params.push_back({"sum_max", static_cast<long long>(sum_max)});
  doc.functionals = functional_table();
  for (int s = 2; s <= sum_max; ++s)
    for (int n = 1; 2 * n <= s; ++n) {
      const int m = s - n;
      if (std::gcd(m, n) != 1) continue;
      add_functional_row(doc.functionals, TorusParams::create(m, n));
    }
  emit(render(doc, cfg), cfg);
  return kExitOk;
}

int cmd_lame(double k, int levels, long long grid_flag, const Common& common) {
  const OutputConfig cfg = common.config();
  if (!(k >= 0.0 && k < 1.0)) throw InvalidArgument("--k must satisfy 0 <= k < 1");
  if (levels < 1 || levels > 12) throw InvalidArgument("--levels must lie in [1, 12]");
  const int grid = resolve_grid(grid_flag);
  const std::vector<LameLevel> spectrum = lame_spectrum(k, levels, grid);
  const double h3 = lame_h3(k, grid);

  Document doc;
  doc.primary = Document::Primary::spectra;
  doc.params.push_back({"k", k});
  doc.params.push_back({"levels", static_cast<long long>(levels)});
  doc.params.push_back({"grid", static_cast<long long>(grid)});
  doc.spectra = {{"i", "h", "flavor", "symmetry"}, {}};
  for (int i = 0; i < levels; ++i)
    doc.spectra.add({static_cast<long long>(i), spectrum[i].h, std::string(to_string(spectrum[i].flavor)),
                     std::string(to_string(spectrum[i].symmetry))});
  doc.checks = {{"id", "status", "h3", "margin"}, {}};
  doc.checks.add({std::string("h3_above_two"), std::string(h3 > 2.0 ? "pass" : "fail"), h3, h3 - 2.0});
  emit(render(doc, cfg), cfg);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectra and extremality checks for the minimal tori M_{m,n}"};
  app.require_subcommand(1);

  int m = 0, n = 0, l_max = 8, sum_max = 12, levels = 5;
  long long grid = 0;
  double tol = kClusterTolerance, k = 0.0;
  Common spectrum_opts, verify_opts, table_opts, lame_opts;

  CLI::App* spectrum = app.add_subcommand("spectrum", "extrapolated eigenvalues per y-frequency l");
  spectrum->add_option("--m", m)->required();
  spectrum->add_option("--n", n)->required();
  spectrum->add_option("--l-max", l_max)->capture_default_str();
  spectrum->add_option("--grid", grid, "grid size (power of two); default SPECTRA_GRID_N or 1024");
  add_common(spectrum, spectrum_opts);

  CLI::App* verify = app.add_subcommand("verify", "run the theorem checks for one pair");
  verify->add_option("--m", m)->required();
  verify->add_option("--n", n)->required();
  verify->add_option("--tol", tol)->capture_default_str();
  verify->add_option("--grid", grid);
  add_common(verify, verify_opts);

  CLI::App* table = app.add_subcommand("table", "closed-form functional values over the family");
  table->add_option("--sum-max", sum_max)->capture_default_str();
  add_common(table, table_opts);

  CLI::App* lame = app.add_subcommand("lame", "trigonometric Lame spectrum");
  lame->add_option("--k", k)->required();
  lame->add_option("--levels", levels)->capture_default_str();
  lame->add_option("--grid", grid);
  add_common(lame, lame_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (spectrum->parsed()) return cmd_spectrum(m, n, l_max, grid, spectrum_opts);
    if (verify->parsed()) return cmd_verify(m, n, tol, grid, verify_opts);
    if (table->parsed()) return cmd_table(sum_max, table_opts);
    if (lame->parsed()) return cmd_lame(k, levels, grid, lame_opts);
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kExitSolver;
  }
  return kExitUsage;
}
