#include "lll/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lll/errors.hpp"
#include "lll/fock.hpp"
#include "lll/io.hpp"
#include "lll/minimize.hpp"
#include "lll/spectra.hpp"
#include "lll/sturm.hpp"

namespace lll::cli {

namespace {

using nlohmann::json;

json matrix_to_json(const ExactMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k).to_string());
    rows.push_back(std::move(row));
  }
  return rows;
}

json block_to_json(const BlockMatrix& b) {
  return {{"j", b.j}, {"kind", to_string(b.kind)}, {"entries", matrix_to_json(b.entries)}};
}

// Largest positive rational f with every entry an integer (or integer·√r) multiple of f.
mpq_class common_factor(const ExactMatrix& m) {
  mpz_class num = 0, den = 1;
  auto absorb = [&](const mpq_class& x) {
    if (x == 0) return;
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), x.get_num().get_mpz_t());
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den().get_mpz_t());
  };
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t k = 0; k < m.cols(); ++k) {
      absorb(m(i, k).rational());
      absorb(m(i, k).irrational());
    }
  }
  if (num == 0) return 1;
  mpq_class f(num, den);
  f.canonicalize();
  return f;
}

std::string integer_entry(const Surd& x) {
  auto coeff = [](const mpq_class& q) { return q.get_den() == 1 ? q.get_num().get_str() : rational_string(q); };
  const std::string root = "√" + std::to_string(x.radicand());
  if (x.is_rational()) return coeff(x.rational());
  std::string irr = x.irrational() == 1 ? root : x.irrational() == -1 ? "-" + root : coeff(x.irrational()) + root;
  if (x.rational() == 0) return irr;
  return coeff(x.rational()) + (sgn(x.irrational()) > 0 ? "+" : "") + irr;
}

// Display width of a UTF-8 string (code points; √ counts once).
std::size_t display_width(const std::string& s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char ch) { return (ch & 0xC0) != 0x80; }));
}

void print_pretty(std::ostream& out, const std::string& title, const ExactMatrix& m) {
  const mpq_class f = common_factor(m);
  std::vector<std::string> cells;
  std::size_t width = 1;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t k = 0; k < m.cols(); ++k) {
      cells.push_back(integer_entry(m(i, k) / f));
      width = std::max(width, display_width(cells.back()));
    }
  }
  out << title << " = " << (f.get_den() == 1 ? f.get_num().get_str() : rational_string(f)) << " *\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out << "  [";
    for (std::size_t k = 0; k < m.cols(); ++k) {
      const std::string& cell = cells[i * m.cols() + k];
      out << ' ' << std::string(width - display_width(cell), ' ') << cell;
    }
    out << " ]\n";
  }
}

void add_optimizer_flags(CLI::App* sub, OptimizerConfig& cfg) {
  sub->add_option("--trunc", cfg.truncation, "truncation N")->capture_default_str();
  sub->add_option("--restarts", cfg.restarts, "random restarts")->capture_default_str();
  sub->add_option("--max-iters", cfg.max_iters, "iterations per restart")->capture_default_str();
  sub->add_option("--tol", cfg.grad_tol, "Lagrange residual tolerance")->capture_default_str();
  sub->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  sub->add_option("--R", cfg.zero_radius, "zero-counting radius")->capture_default_str();
}

std::ostream& open_or(std::ofstream& file, const std::string& path, std::ostream& fallback) {
  if (path.empty()) return fallback;
  file.open(path);
  if (!file) throw FormatError("cannot write " + path);
  return file;
}

struct Options {
  // block
  int j = 0;
  bool e_block = false;
  bool reduced = false;
  std::string format = "pretty";
  // certify
  int max_j = 200;
  int exact_limit = 200;
  // functionals / zeros
  std::string in;
  double mu = 0.5;
  double radius = 6.0;
  // catalog
  std::string wave_kind = "phi_n";
  std::size_t n = 0;
  double alpha_re = 0.0, alpha_im = 0.0, b = 1.0, h = 0.5;
  std::vector<double> a0{1.0, 0.0}, a1{0.0, 0.0}, c{0.0, 0.0};
  int k = 0;
  std::size_t trunc = 64;
  std::string out;
  // scan
  double from = 0.05, to = 1.0, step = 0.05;
  // semiclassical
  double Na = 1.0;
  OptimizerConfig cfg;
};

int do_block(const Options& o, std::ostream& out) {
  const BlockMatrix block = o.e_block ? build_E_block(o.j) : build_B_block(o.j);
  const char* name = o.e_block ? "E" : "B";
  std::optional<CentroDecomposition> d;
  std::optional<RankOneSplit> split;
  if (o.reduced) {
    d = centro_decompose(block);
    if (!o.e_block && (d->parity == Parity::Even ? d->R->order() > 0 : d->S.order() > 0)) split = rank_one_split(*d);
  }
  if (o.format == "json") {
    json doc = block_to_json(block);
    if (d) {
      doc["S"] = block_to_json(d->S);
      doc["skew"] = block_to_json(d->skew);
      if (d->R) doc["R"] = block_to_json(*d->R);
      if (split) {
        doc["T"] = block_to_json(split->T);
        doc["K"] = block_to_json(split->K);
        doc["delta"] = rational_string(split->delta);
      }
    }
    out << doc.dump(2) << '\n';
    return kOk;
  }
  const std::string idx = "^(" + std::to_string(o.j) + ")";
  print_pretty(out, name + idx, block.entries);
  if (d) {
    print_pretty(out, "S" + idx, d->S.entries);
    if (d->skew.order() > 0) print_pretty(out, "A-JC" + idx, d->skew.entries);
    if (d->R) print_pretty(out, "R" + idx, d->R->entries);
    if (split) {
      print_pretty(out, "T" + idx, split->T.entries);
      print_pretty(out, "K" + idx, split->K.entries);
      out << "delta = " << rational_string(split->delta) << '\n';
    }
  }
  return kOk;
}

int do_certify(const Options& o, std::ostream& out, std::ostream& err) {
  bool all_pass = true;
  for (int j = 0; j <= std::min(o.max_j, 5); ++j) {
    const bool psd = is_positive_semidefinite(centro_decompose(build_B_block(j)).S.entries);
    all_pass = all_pass && psd;
    err << "j=" << j << " exact elimination: S " << (psd ? "is" : "is NOT") << " positive semidefinite\n";
  }
  for (int j = 6; j <= o.max_j; ++j) {
    const BlockVerdict v = certify_block(j, o.exact_limit);
    const bool pass = v.passed();
    all_pass = all_pass && pass;
    if (o.format == "json") {
      out << certificate_to_json(v.sturm).dump() << '\n';
      continue;
    }
    out << "j=" << j << ' ' << to_string(v.sturm.parity) << ' ' << (pass ? "pass" : "FAIL")
        << " transition=" << v.sturm.transition_index << " window=(" << v.sturm.root_lower.to_string() << ", "
        << v.sturm.root_lower.to_string() << "+1]";
    if (v.null_vectors) out << " null_vectors=" << (*v.null_vectors ? "exact" : "FAIL");
    if (v.min_scaled_eigenvalue) out << " min_eig=" << std::setprecision(3) << *v.min_scaled_eigenvalue;
    if (v.spectral_gap) out << " gap=" << std::setprecision(6) << *v.spectral_gap;
    if (!v.sturm.passed) out << " reason=\"" << v.sturm.reason << '"';
    out << '\n';
  }
  return all_pass ? kOk : kCertificateFailure;
}

WaveSpec wave_from(const Options& o) {
  auto complex_of = [](const std::vector<double>& v) {
    if (v.size() != 2) throw InvalidParameter("complex parameters take two numbers: re im");
    return Complex(v[0], v[1]);
  };
  if (o.wave_kind == "phi_n") return wave::PhiN{o.n};
  if (o.wave_kind == "phi_n_alpha") return wave::PhiNAlpha{o.n, Complex(o.alpha_re, o.alpha_im)};
  if (o.wave_kind == "psi_b") return wave::PsiB{o.b};
  if (o.wave_kind == "equality") return wave::EqualityFamily{complex_of(o.a0), complex_of(o.a1), complex_of(o.c)};
  if (o.wave_kind == "semiclassical") return wave::SemiclassicalPhi{o.k, o.h};
  throw InvalidParameter("unknown wave '" + o.wave_kind + "'");
}

int do_catalog(const Options& o, std::ostream& out) {
  const FockCoefficients u = catalog_coefficients(wave_from(o), o.trunc);
  if (o.out.empty()) {
    out << coefficients_to_json(u).dump() << '\n';
  } else {
    write_coefficients(o.out, u);
  }
  return kOk;
}

int do_minimize(const Options& o, std::ostream& out) {
  const MinimizationResult r = minimize_G(o.mu, o.cfg);
  if (!o.out.empty()) write_coefficients(o.out, r.u);
  out << result_to_json(r).dump(2) << '\n';
  return r.converged ? kOk : kNoConvergence;
}

int do_scan(const Options& o, std::ostream& out) {
  const std::vector<ScanRow> rows = scan_mu(mu_grid(o.from, o.to, o.step), o.cfg);
  std::ofstream file;
  write_scan_csv(open_or(file, o.out, out), rows);
  const bool converged = std::all_of(rows.begin(), rows.end(), [](const ScanRow& r) { return r.result.converged; });
  return converged ? kOk : kNoConvergence;
}

int do_mu0(const Options& o, std::ostream& out) {
  const Mu0Estimate e = estimate_mu0(o.cfg);
  out << json{{"lower", e.lower}, {"upper", e.upper}, {"evaluations", e.evaluations}, {"caveat", e.caveat}}.dump(2)
      << '\n';
  return kOk;
}

int do_zeros(const Options& o, std::ostream& out) {
  const ZeroReport z = find_zeros(read_coefficients(o.in), o.radius);
  json roots = json::array();
  for (std::size_t i = 0; i < z.roots.size(); ++i) {
    roots.push_back({{"re", z.roots[i].real()},
                     {"im", z.roots[i].imag()},
                     {"abs", std::abs(z.roots[i])},
                     {"residual", z.residuals[i]},
                     {"inside", std::abs(z.roots[i]) <= z.radius}});
  }
  out << json{{"degree", z.degree}, {"radius", z.radius}, {"count", z.count_inside}, {"roots", roots}}.dump(2) << '\n';
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lowest-Landau-Level positivity certificates and energy minimization"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1, 1);
  Options o;

  auto* block = app.add_subcommand("block", "dump the exact block B^(j) or E^(j)");
  block->add_option("--j", o.j, "block index")->required()->check(CLI::NonNegativeNumber);
  block->add_flag("--E", o.e_block, "E^(j) instead of B^(j)");
  block->add_flag("--reduced", o.reduced, "also print S, A-JC, R, T, K and delta");
  block->add_option("--format", o.format)->check(CLI::IsMember({"json", "pretty"}))->capture_default_str();

  auto* certify = app.add_subcommand("certify", "positivity certificates for j <= max-j");
  certify->add_option("--max-j", o.max_j)->check(CLI::NonNegativeNumber)->capture_default_str();
  certify->add_option("--exact-limit", o.exact_limit, "largest j with exact null-vector checks")->capture_default_str();
  certify->add_option("--format", o.format)->check(CLI::IsMember({"json", "pretty"}))->capture_default_str();

  auto* functionals_cmd = app.add_subcommand("functionals", "M, P, Q, H, B, E, G, F of a coefficient file");
  functionals_cmd->add_option("--in", o.in)->required()->check(CLI::ExistingFile);
  functionals_cmd->add_option("--mu", o.mu)->capture_default_str();

  auto* catalog = app.add_subcommand("catalog", "write closed-form coefficients");
  catalog->add_option("--wave", o.wave_kind)
      ->check(CLI::IsMember({"phi_n", "phi_n_alpha", "psi_b", "equality", "semiclassical"}))
      ->capture_default_str();
  catalog->add_option("--n", o.n, "index of phi_n");
  catalog->add_option("--alpha-re", o.alpha_re);
  catalog->add_option("--alpha-im", o.alpha_im);
  catalog->add_option("--b", o.b);
  catalog->add_option("--a0", o.a0)->expected(2);
  catalog->add_option("--a1", o.a1)->expected(2);
  catalog->add_option("--c", o.c)->expected(2);
  catalog->add_option("--k", o.k)->check(CLI::IsMember({0, 1}));
  catalog->add_option("--h", o.h);
  catalog->add_option("--trunc", o.trunc)->capture_default_str();
  catalog->add_option("--out", o.out);

  auto* minimize = app.add_subcommand("minimize", "minimize G_mu on the unit sphere");
  minimize->add_option("--mu", o.mu)->required();
  minimize->add_option("--out", o.out, "write the minimizer's coefficients");
  add_optimizer_flags(minimize, o.cfg);

  auto* scan = app.add_subcommand("scan", "minimize over a grid of mu and write CSV");
  scan->add_option("--from", o.from)->capture_default_str();
  scan->add_option("--to", o.to)->capture_default_str();
  scan->add_option("--step", o.step)->capture_default_str();
  scan->add_option("--out", o.out);
  add_optimizer_flags(scan, o.cfg);

  auto* mu0 = app.add_subcommand("mu0", "bracket the onset of phi_1 as global minimizer");
  add_optimizer_flags(mu0, o.cfg);

  auto* semi = app.add_subcommand("semiclassical", "regime report in semi-classical variables");
  semi->add_option("--Na", o.Na, "product N*a")->required();
  semi->add_option("--h", o.h)->required();

  auto* zeros = app.add_subcommand("zeros", "zeros of the polynomial part of a coefficient file");
  zeros->add_option("--in", o.in)->required()->check(CLI::ExistingFile);
  zeros->add_option("--R", o.radius)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*block) return do_block(o, out);
    if (*certify) return do_certify(o, out, err);
    if (*functionals_cmd) {
      out << report_to_json(functionals(read_coefficients(o.in), o.mu)).dump(2) << '\n';
      return kOk;
    }
    if (*catalog) return do_catalog(o, out);
    if (*minimize) return do_minimize(o, out);
    if (*scan) return do_scan(o, out);
    if (*mu0) return do_mu0(o, out);
    if (*semi) {
      out << semiclassical_to_json(semiclassical(o.Na, 1.0, o.h)).dump(2) << '\n';
      return kOk;
    }
    if (*zeros) return do_zeros(o, out);
  } catch (const CertificateFailed& e) {
    err << "certificate failure: " << e.what() << '\n';
    return kCertificateFailure;
  } catch (const NoConvergence& e) {
    err << "no convergence: " << e.what() << '\n';
    return kNoConvergence;
  } catch (const InconsistentBracket& e) {
    err << "inconsistent bracket: " << e.what() << '\n';
    return kNoConvergence;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("lll");
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace lll::cli
