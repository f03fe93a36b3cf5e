// Command-line front end: verification suites, fidelity tables, POVM
// serialization.  Exit codes: 0 all assertions passed, 1 verification
// failure, 2 usage error, 3 I/O or file-format error.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qcest/mc.hpp"
#include "qcest/povm_io.hpp"
#include "qcest/theorem.hpp"

using namespace qcest;
using nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kStreamFrame = 1;
constexpr std::uint64_t kStreamProbes = 2;
constexpr std::uint64_t kStreamMc = 3;

/// Hierarchical counter-based splitting: every (purpose, d, n, l) pair gets
/// an independent substream of the root seed, so grid parallelism and
/// evaluation order cannot change any result.
std::uint64_t chain(std::uint64_t root, std::initializer_list<std::uint64_t> path) {
  for (std::uint64_t step : path) root = substream(root, step).state;
  return root;
}

std::string fmt15(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", x);
  return buf;
}

/// "2,3" and "1..4" (and mixtures) to a sorted unique list.
std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> values;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (token.empty()) continue;
    const auto dots = token.find("..");
    if (dots == std::string::npos) {
      values.push_back(std::stoi(token));
    } else {
      const int lo = std::stoi(token.substr(0, dots));
      const int hi = std::stoi(token.substr(dots + 2));
      if (hi < lo) throw CLI::ValidationError("range '" + token + "' is empty");
      for (int v = lo; v <= hi; ++v) values.push_back(v);
    }
  }
  if (values.empty()) throw CLI::ValidationError("empty list '" + text + "'");
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

std::string resolve_out(const std::string& path) {
  if (path.empty() || path == "-") return path;
  if (path.front() == '/') return path;
  if (const char* dir = std::getenv("QCEST_OUTDIR"); dir && *dir) {
    return std::string(dir) + "/" + path;
  }
  return path;
}

/// Returns false on I/O failure.
bool write_output(const std::string& path, const std::string& text) {
  const std::string resolved = resolve_out(path);
  if (resolved.empty() || resolved == "-") {
    std::cout << text;
    return true;
  }
  std::ofstream out(resolved, std::ios::binary);
  if (!out) {
    std::cerr << "cannot open '" << resolved << "' for writing\n";
    return false;
  }
  out << text;
  return static_cast<bool>(out);
}

struct PovmKey {
  int d, copies, order;
  bool operator<(const PovmKey& o) const {
    return std::tie(d, copies, order) < std::tie(o.d, o.copies, o.order);
  }
};

/// Design-grade POVMs are reused across grid points within a run.
const Povm& cached_povm(int d, int copies, int order, std::uint64_t root_seed,
                        std::map<PovmKey, Povm>& cache) {
  const PovmKey key{d, copies, order};
  auto it = cache.find(key);
  if (it == cache.end()) {
    const std::uint64_t dim = sym_dimension(d, order);
    const int count = static_cast<int>(4 * dim * dim);
    const std::uint64_t seed = chain(root_seed, {kStreamFrame, static_cast<std::uint64_t>(d),
                                                 static_cast<std::uint64_t>(copies),
                                                 static_cast<std::uint64_t>(order)});
    Povm povm = build_covariant_povm(d, copies, haar_frame(d, count, seed),
                                     PovmBuildOptions{.moment_order = order});
    it = cache.emplace(key, std::move(povm)).first;
  }
  return it->second;
}

// ---------------------------------------------------------------------------
// table

int run_table(const std::vector<int>& ds, const std::vector<int>& ns, const std::vector<int>& ms,
              const std::string& format, const std::string& out) {
  std::ostringstream csv;
  ordered_json rows = ordered_json::array();
  csv << "d,N,M,F_clone,eta_clone,F_est_asymptotic\n";
  for (int d : ds) {
    for (int n : ns) {
      for (int m : ms) {
        if (m < n || n < 1 || d < 2) continue;
        const ClonerSpec spec(d, n, m);
        const double f = cloner_fidelity(spec);
        const double eta = cloner_shrinking_factor(spec);
        const double f_est = cloner_fidelity_asymptotic(d, n);
        if (format == "csv") {
          csv << d << ',' << n << ',' << m << ',' << fmt15(f) << ',' << fmt15(eta) << ','
              << fmt15(f_est) << '\n';
        } else {
          rows.push_back({{"d", d},
                          {"N", n},
                          {"M", m},
                          {"F_clone", f},
                          {"eta_clone", eta},
                          {"F_est_asymptotic", f_est}});
        }
      }
    }
  }
  const std::string text = format == "csv" ? csv.str() : rows.dump(2) + "\n";
  return write_output(out, text) ? 0 : 3;
}

// ---------------------------------------------------------------------------
// verify-cloner

int run_verify_cloner(const std::vector<int>& ds, const std::vector<int>& ns, int m_extra,
                      int probes, std::uint64_t seed, double tolerance,
                      const std::string& format, const std::string& out) {
  bool pass = true;
  ordered_json cases = ordered_json::array();
  std::ostringstream csv;
  csv << "d,N,M,F_closed,max_fidelity_dev,universality_spread,bloch_ratio_dev,fastpath_dev,"
         "support_residual,trace_dev,pass\n";

  for (int d : ds) {
    const GeneratorBasis basis(d);
    for (int n : ns) {
      const std::vector<PureState> probe_states =
          haar_frame(d, probes, chain(seed, {kStreamProbes, static_cast<std::uint64_t>(d),
                                             static_cast<std::uint64_t>(n)}));
      for (int m = n; m <= n + m_extra; ++m) {
        const ClonerSpec spec(d, n, m);
        const double expected = cloner_fidelity(spec);
        const double eta_expected = cloner_shrinking_factor(spec);

        double fid_lo = 1.0, fid_hi = 0.0, max_dev = 0.0, bloch_dev = 0.0, fast_dev = 0.0;
        for (const PureState& psi : probe_states) {
          const SymmetricState input = SymmetricState::product(psi, n);
          const SymmetricState output = clone(input, m);
          const DensityOperator reduced = reduce_single_particle(output);
          const double f = fidelity_pure(psi, reduced);
          fid_lo = std::min(fid_lo, f);
          fid_hi = std::max(fid_hi, f);
          max_dev = std::max(max_dev, std::abs(f - expected));

          const BlochVector in = bloch_from_density(DensityOperator::pure(psi), basis);
          const BlochVector out_b = bloch_from_density(reduced, basis);
          bloch_dev = std::max(bloch_dev,
                               (out_b.coords - eta_expected * in.coords).cwiseAbs().maxCoeff());
          fast_dev = std::max(
              fast_dev,
              (clone_occupation(input, m).matrix() - output.matrix()).cwiseAbs().maxCoeff());
        }

        // Symmetric-support residual of the full-space representation.
        const SymmetricState sample = clone(SymmetricState::product(probe_states.front(), n), m);
        const Matrix full = lift_to_full(sample);
        const Matrix sym = symmetrizer(d, m);
        const double support_residual = (sym * full * sym - full).cwiseAbs().maxCoeff();
        const double trace_dev = std::abs(sample.matrix().trace().real() - 1.0);

        const bool row_pass = max_dev <= tolerance && (fid_hi - fid_lo) <= tolerance &&
                              bloch_dev <= tolerance && fast_dev <= 1e-10 &&
                              support_residual <= 1e-10 && trace_dev <= 1e-12;
        pass = pass && row_pass;

        if (format == "csv") {
          csv << d << ',' << n << ',' << m << ',' << fmt15(expected) << ',' << fmt15(max_dev)
              << ',' << fmt15(fid_hi - fid_lo) << ',' << fmt15(bloch_dev) << ','
              << fmt15(fast_dev) << ',' << fmt15(support_residual) << ',' << fmt15(trace_dev)
              << ',' << (row_pass ? "true" : "false") << '\n';
        } else {
          cases.push_back({{"d", d},
                           {"N", n},
                           {"M", m},
                           {"F_closed", expected},
                           {"max_fidelity_dev", max_dev},
                           {"universality_spread", fid_hi - fid_lo},
                           {"bloch_ratio_dev", bloch_dev},
                           {"fastpath_dev", fast_dev},
                           {"support_residual", support_residual},
                           {"trace_dev", trace_dev},
                           {"pass", row_pass}});
        }
      }
    }
  }

  std::string text;
  if (format == "csv") {
    text = csv.str();
  } else {
    ordered_json report;
    report["suite"] = "verify-cloner";
    report["seed"] = seed;
    report["tolerance"] = tolerance;
    report["cases"] = std::move(cases);
    report["pass"] = pass;
    text = report.dump(2) + "\n";
  }
  if (!write_output(out, text)) return 3;
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// verify-estimation

int run_verify_estimation(const std::vector<int>& ds, const std::vector<int>& ns,
                          std::uint64_t samples, std::uint64_t seed, const std::string& format,
                          const std::string& out) {
  bool pass = true;
  std::map<PovmKey, Povm> cache;
  ordered_json cases = ordered_json::array();
  std::ostringstream csv;
  csv << "d,N,outcomes,completeness_residual,weight_sum,moment_residual,F_exact,F_closed,"
         "mc_mean,mc_std_error,eta_mean,eta_spread,pass\n";

  for (int d : ds) {
    for (int n : ns) {
      const Povm& povm = cached_povm(d, n, n + 1, seed, cache);
      const PovmDiagnostics diag = validate_povm(povm);
      const double moment_res = moment_resolution_residual(povm, n + 1);
      const double f_exact = average_fidelity_exact(povm);
      const double f_closed = cloner_fidelity_asymptotic(d, n);
      const MonteCarloStats mc = average_fidelity_mc(
          povm, samples, chain(seed, {kStreamMc, static_cast<std::uint64_t>(d),
                                      static_cast<std::uint64_t>(n)}));
      const ShrinkReport shrink = measure_prepare_channel_eta(
          povm, haar_frame(d, 8, chain(seed, {kStreamProbes, static_cast<std::uint64_t>(d),
                                              static_cast<std::uint64_t>(n)})));
      const double eta_closed = static_cast<double>(n) / (n + d);

      const bool row_pass = diag.pass && diag.completeness_residual <= 1e-8 &&
                            std::abs(f_exact - f_closed) <= 1e-9 &&
                            std::abs(mc.mean - f_exact) <= 3.0 * mc.std_error + 1e-12 &&
                            std::abs(shrink.eta_mean - eta_closed) <= 1e-8 &&
                            shrink.eta_spread <= 1e-8 && moment_res <= 1e-8;
      pass = pass && row_pass;

      if (format == "csv") {
        csv << d << ',' << n << ',' << povm.size() << ',' << fmt15(diag.completeness_residual)
            << ',' << fmt15(diag.weight_sum) << ',' << fmt15(moment_res) << ','
            << fmt15(f_exact) << ',' << fmt15(f_closed) << ',' << fmt15(mc.mean) << ','
            << fmt15(mc.std_error) << ',' << fmt15(shrink.eta_mean) << ','
            << fmt15(shrink.eta_spread) << ',' << (row_pass ? "true" : "false") << '\n';
      } else {
        cases.push_back({{"d", d},
                         {"N", n},
                         {"outcomes", povm.size()},
                         {"completeness_residual", diag.completeness_residual},
                         {"weight_sum", diag.weight_sum},
                         {"moment_residual", moment_res},
                         {"F_exact", f_exact},
                         {"F_closed", f_closed},
                         {"mc_mean", mc.mean},
                         {"mc_std_error", mc.std_error},
                         {"mc_samples", mc.samples},
                         {"eta_mean", shrink.eta_mean},
                         {"eta_spread", shrink.eta_spread},
                         {"eta_closed", eta_closed},
                         {"pass", row_pass}});
      }
    }
  }

  std::string text;
  if (format == "csv") {
    text = csv.str();
  } else {
    ordered_json report;
    report["suite"] = "verify-estimation";
    report["seed"] = seed;
    report["samples"] = samples;
    report["cases"] = std::move(cases);
    report["pass"] = pass;
    text = report.dump(2) + "\n";
  }
  if (!write_output(out, text)) return 3;
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// verify-theorem

int run_verify_theorem(const std::vector<int>& ds, const std::vector<int>& ns,
                       const std::vector<int>& ls, int probes, std::uint64_t seed,
                       const std::string& format, const std::string& out) {
  bool pass = true;
  std::map<PovmKey, Povm> cache;
  ordered_json blocks = ordered_json::array();
  std::ostringstream csv;
  csv << "d,N,L,eta_clone,eta_estimate,eta_total,mult_dev,total_fidelity,f_dev,eq11_slack,"
         "extension_dev,pass\n";

  for (int d : ds) {
    for (int n : ns) {
      const Povm& povm_n = cached_povm(d, n, n + 1, seed, cache);
      const double optimum = cloner_fidelity_asymptotic(d, n);
      const std::vector<PureState> probe_states =
          haar_frame(d, probes, chain(seed, {kStreamProbes, static_cast<std::uint64_t>(d),
                                             static_cast<std::uint64_t>(n)}));

      ordered_json rows = ordered_json::array();
      std::vector<int> l_used;
      for (int l : ls) {
        if (l < n) continue;
        l_used.push_back(l);
        const Povm& povm_l = cached_povm(d, l, l + 1, seed, cache);
        const ConcatenationResult con = clone_then_estimate(d, n, l, povm_l, probe_states);
        const double mult_dev = std::abs(con.eta_total - con.eta_clone * con.eta_estimate);
        const double f_dev = std::abs(con.total_fidelity - optimum);
        const InequalityRecord eq11 = estimate_then_prepare_as_cloner(d, n, l, povm_n);
        const SymmetricState entangled =
            clone(SymmetricState::product(probe_states.front(), n), l);
        const ExtensionReport ext = symmetric_input_extension(povm_l, entangled);

        const bool row_pass = mult_dev <= 1e-8 && f_dev <= 1e-8 && eq11.slack() >= -1e-9 &&
                              ext.max_abs_deviation <= 1e-8;
        pass = pass && row_pass;

        if (format == "csv") {
          csv << d << ',' << n << ',' << l << ',' << fmt15(con.eta_clone) << ','
              << fmt15(con.eta_estimate) << ',' << fmt15(con.eta_total) << ','
              << fmt15(mult_dev) << ',' << fmt15(con.total_fidelity) << ',' << fmt15(f_dev)
              << ',' << fmt15(eq11.slack()) << ',' << fmt15(ext.max_abs_deviation) << ','
              << (row_pass ? "true" : "false") << '\n';
        } else {
          rows.push_back({{"L", l},
                          {"eta_clone", con.eta_clone},
                          {"eta_estimate", con.eta_estimate},
                          {"eta_total", con.eta_total},
                          {"eta_total_spread", con.eta_total_spread},
                          {"mult_dev", mult_dev},
                          {"total_fidelity", con.total_fidelity},
                          {"f_dev_from_optimum", f_dev},
                          {"eq11_lhs", eq11.lhs},
                          {"eq11_rhs", eq11.rhs},
                          {"eq11_slack", eq11.slack()},
                          {"extension_dev", ext.max_abs_deviation},
                          {"pass", row_pass}});
        }
      }
      if (l_used.empty()) continue;

      const InequalityRecord eq15 = opposite_inequality(d, n, povm_n);
      const double equality_gap = std::abs(eq15.rhs - eq15.lhs);
      const LimitCheckReport limit = limit_check(d, n, l_used);
      double limit_dev = limit.asymptotic_gap;
      for (const LimitCheckRow& row : limit.rows) limit_dev = std::max(limit_dev, row.deviation);

      const bool block_pass = eq15.slack() >= -1e-9 && equality_gap <= 1e-8 && limit_dev <= 1e-8;
      pass = pass && block_pass;

      if (format != "csv") {
        blocks.push_back({{"d", d},
                          {"N", n},
                          {"F_optimum", optimum},
                          {"eq15_lhs", eq15.lhs},
                          {"eq15_rhs", eq15.rhs},
                          {"eq15_slack", eq15.slack()},
                          {"equality_gap", equality_gap},
                          {"limit_max_dev", limit_dev},
                          {"cases", std::move(rows)},
                          {"pass", block_pass}});
      } else {
        csv << d << ',' << n << ",-," << fmt15(eq15.lhs) << ',' << fmt15(eq15.rhs) << ','
            << fmt15(eq15.slack()) << ',' << fmt15(equality_gap) << ",-,-,-,-,"
            << (block_pass ? "true" : "false") << '\n';
      }
    }
  }

  std::string text;
  if (format == "csv") {
    text = csv.str();
  } else {
    ordered_json report;
    report["suite"] = "verify-theorem";
    report["seed"] = seed;
    report["probes"] = probes;
    report["blocks"] = std::move(blocks);
    report["pass"] = pass;
    text = report.dump(2) + "\n";
  }
  if (!write_output(out, text)) return 3;
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// povm-build / povm-validate

int run_povm_build(int d, int n, const std::string& frame_kind, int frame_size, bool design,
                   std::uint64_t seed, const std::string& out) {
  std::vector<PureState> frame;
  if (frame_kind == "pauli") {
    frame = pauli_eigenstate_frame();
  } else if (frame_kind == "tetrahedron") {
    frame = tetrahedron_frame();
  } else {
    const int order = design ? n + 1 : n;
    const std::uint64_t dim = sym_dimension(d, order);
    const int count = frame_size > 0 ? frame_size : static_cast<int>(4 * dim * dim);
    frame = haar_frame(d, count, chain(seed, {kStreamFrame, static_cast<std::uint64_t>(d),
                                              static_cast<std::uint64_t>(n)}));
  }
  PovmBuildOptions options;
  options.moment_order = design ? n + 1 : 0;
  const Povm povm = build_covariant_povm(d, n, frame, options);
  const PovmDiagnostics diag = validate_povm(povm);
  std::cerr << "outcomes " << povm.size() << ", completeness residual "
            << fmt15(diag.completeness_residual) << ", weight sum " << fmt15(diag.weight_sum)
            << "\n";
  if (out.empty() || out == "-") {
    std::cout << povm_to_json(povm);
    return 0;
  }
  povm_save(povm, resolve_out(out));
  return 0;
}

int run_povm_validate(const std::string& path, double tolerance) {
  const Povm povm = povm_load(path);  // I/O and schema errors propagate
  const PovmDiagnostics diag = validate_povm(povm, tolerance);
  std::cout << "outcomes: " << povm.size() << "\n"
            << "completeness_residual: " << fmt15(diag.completeness_residual) << "\n"
            << "min_weight: " << fmt15(diag.min_weight) << "\n"
            << "weight_sum: " << fmt15(diag.weight_sum) << " (expected "
            << fmt15(diag.expected_weight_sum) << ")\n"
            << "pass: " << (diag.pass ? "true" : "false") << "\n";
  return diag.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"optimal universal cloning and state estimation for qudits"};
  app.require_subcommand(1);

  std::string d_list = "2,3";
  std::string n_list = "1..3";
  std::string m_list = "1..5";
  std::string l_list;
  std::string format = "csv";
  std::string out;
  std::string frame_kind = "haar";
  std::string povm_path;
  std::uint64_t seed = 12345;
  std::uint64_t samples = 100000;
  int probes = 8;
  int m_extra = 3;
  int build_d = 2, build_n = 1, frame_size = 0;
  bool design = false;
  double tolerance = 1e-9;
  double validate_tolerance = 1e-8;

  CLI::App* table = app.add_subcommand("table", "closed-form fidelity table");
  table->add_option("--d", d_list, "dimensions, e.g. 2,3");
  table->add_option("--n", n_list, "input copies, e.g. 1..3");
  table->add_option("--m", m_list, "output copies, e.g. 1..5");
  table->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  table->add_option("--out", out, "output path ('-' for stdout)");

  CLI::App* vc = app.add_subcommand("verify-cloner", "simulated cloner against the closed form");
  vc->add_option("--d", d_list);
  vc->add_option("--n", n_list);
  vc->add_option("--m-extra", m_extra, "check M = N .. N+m_extra");
  vc->add_option("--probes", probes);
  vc->add_option("--seed", seed);
  vc->add_option("--tolerance", tolerance);
  std::string vc_format = "json";
  vc->add_option("--format", vc_format)->check(CLI::IsMember({"csv", "json"}));
  vc->add_option("--out", out);

  CLI::App* ve = app.add_subcommand("verify-estimation", "POVM estimation optimum");
  ve->add_option("--d", d_list);
  ve->add_option("--n", n_list);
  ve->add_option("--samples", samples);
  ve->add_option("--seed", seed);
  std::string ve_format = "json";
  ve->add_option("--format", ve_format)->check(CLI::IsMember({"csv", "json"}));
  ve->add_option("--out", out);

  CLI::App* vt = app.add_subcommand("verify-theorem", "estimation = asymptotic cloning");
  vt->add_option("--d", d_list);
  vt->add_option("--n", n_list);
  vt->add_option("--l", l_list, "intermediate clone counts; default N..N+3 per N");
  vt->add_option("--probes", probes);
  vt->add_option("--seed", seed);
  std::string vt_format = "json";
  vt->add_option("--format", vt_format)->check(CLI::IsMember({"csv", "json"}));
  vt->add_option("--out", out);

  CLI::App* pb = app.add_subcommand("povm-build", "solve POVM weights over a frame");
  pb->add_option("--d", build_d)->required();
  pb->add_option("--n", build_n)->required();
  pb->add_option("--frame", frame_kind)->check(CLI::IsMember({"haar", "pauli", "tetrahedron"}));
  pb->add_option("--frame-size", frame_size, "0 = 4 * D_order^2");
  pb->add_flag("--design", design, "solve at moment order N+1 (pointwise universal)");
  pb->add_option("--seed", seed);
  pb->add_option("--out", out);

  CLI::App* pv = app.add_subcommand("povm-validate", "check a serialized POVM");
  pv->add_option("file", povm_path)->required();
  pv->add_option("--tolerance", validate_tolerance);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (table->parsed()) {
      return run_table(parse_int_list(d_list), parse_int_list(n_list), parse_int_list(m_list),
                       format, out);
    }
    if (vc->parsed()) {
      return run_verify_cloner(parse_int_list(d_list), parse_int_list(n_list), m_extra, probes,
                               seed, tolerance, vc_format, out);
    }
    if (ve->parsed()) {
      return run_verify_estimation(parse_int_list(d_list), parse_int_list(n_list), samples, seed,
                                   ve_format, out);
    }
    if (vt->parsed()) {
      std::vector<int> ls;
      if (l_list.empty()) {
        int max_n = 0;
        for (int n : parse_int_list(n_list)) max_n = std::max(max_n, n);
        for (int l = 1; l <= max_n + 3; ++l) ls.push_back(l);
      } else {
        ls = parse_int_list(l_list);
      }
      return run_verify_theorem(parse_int_list(d_list), parse_int_list(n_list), ls, probes, seed,
                                vt_format, out);
    }
    if (pb->parsed()) {
      return run_povm_build(build_d, build_n, frame_kind, frame_size, design, seed, out);
    }
    if (pv->parsed()) {
      return run_povm_validate(povm_path, validate_tolerance);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    // Solver infeasibility, I/O and schema failures.
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
