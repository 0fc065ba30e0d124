#include "multitile/admissibility.hpp"
#include "multitile/error.hpp"
#include "multitile/exponential_system.hpp"
#include "multitile/io.hpp"
#include "multitile/reconstruction.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace multitile;

namespace {

enum Exit { kOk = 0, kInput = 1, kMath = 2, kInternal = 3 };

struct Options {
  std::string domain;
  std::vector<double> v;
  std::vector<std::int64_t> q;
  std::vector<std::int64_t> eta;
  int v_max = 0;
  int q_max = 0;
  int grid = 8;
  int radius = 2;
  std::uint64_t seed = 0;
  bool oracle = false;
  std::string out;
  std::string samples;
  std::string mode = "pointwise";
  std::string function;
  std::vector<std::int64_t> l;
  std::size_t s = 0;
  double tol = 1e-9;
};

template <typename T>
std::string tuple(const std::vector<T>& xs) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) os << ", ";
    if constexpr (std::is_floating_point_v<T>)
      os << io::format_real(xs[i]);
    else
      os << xs[i];
  }
  os << ')';
  return os.str();
}

std::string tuple(const Eigen::VectorXd& x) { return tuple(std::vector<double>(x.data(), x.data() + x.size())); }

std::string diag(const std::vector<double>& xs) { return "diag" + tuple(xs); }

void emit(const Options& opt, const std::string& contents) {
  if (opt.out.empty())
    std::cout << contents;
  else
    io::write_atomic(opt.out, contents);
}

std::string describe(const Collision& c, std::int64_t modulus) {
  std::ostringstream os;
  os << "collision: cell " << c.cell << ", level " << c.level << ", parent " << c.parent << ": z=" << io::format_real(c.first)
     << " and z=" << io::format_real(c.second) << " share residue " << io::format_real(c.residue) << " mod " << modulus;
  return os.str();
}

/// Checks the given (v, q) or searches for one. Returns nullopt after
/// printing the violation when the given pair is not admissible.
std::optional<AdmissibilityCertificate> certificate(const MultiTileDomain& dom, const Options& opt,
                                                    AdmissibilityReport* report_out = nullptr) {
  const auto d = static_cast<std::size_t>(dom.dimension());
  if (opt.q.empty()) {
    if (!opt.v.empty()) throw Error(ErrorCode::InvalidInput, "--v requires --q");
    const int bound = std::max(4, 4 * dom.k());
    auto cert = find_pair(dom, opt.v_max > 0 ? opt.v_max : bound, opt.q_max > 0 ? opt.q_max : bound);
    if (report_out) *report_out = check_admissibility(dom, cert.v, cert.q);
    return cert;
  }
  std::vector<double> v = opt.v.empty() ? std::vector<double>(d, 1.0) : opt.v;
  if (v.size() != d || opt.q.size() != d)
    throw Error(ErrorCode::InvalidInput, "--v and --q need " + std::to_string(d) + " entries");
  AdmissibilityReport report = check_admissibility(dom, v, opt.q);
  if (report_out) *report_out = report;
  if (!report.certificate) {
    const auto level = static_cast<std::size_t>(report.collision->level - 1);
    std::cout << "none, v=" << tuple(v) << ", q=" << tuple(opt.q) << '\n'
              << describe(*report.collision, opt.q[level]) << '\n';
    return std::nullopt;
  }
  return report.certificate;
}

IntVector eta_for(const MultiTileDomain& dom, const Options& opt) {
  if (opt.eta.empty()) return {};
  if (opt.eta.size() != static_cast<std::size_t>(dom.dimension()))
    throw Error(ErrorCode::InvalidInput, "--eta needs one integer per dimension");
  return {opt.eta.begin(), opt.eta.end()};
}

int cmd_check(const Options& opt) {
  const auto dom = io::load_domain(opt.domain);
  AdmissibilityReport report;
  const auto cert = certificate(dom, opt, &report);
  if (!opt.out.empty()) io::write_atomic(opt.out, io::certificate_json(report));
  if (!cert) return kMath;
  std::cout << to_string(cert->cls) << ", v=" << tuple(cert->v) << ", q=" << tuple(cert->q)
            << ", delta=" << diag(cert->delta()) << '\n';
  std::cout << "q*=" << tuple(cert->q_star) << '\n';
  for (const auto& w : cert->witnesses)
    std::cout << "cell " << w.cell << " level " << w.level << " parent " << tuple(w.prefix) << ": children "
              << tuple(w.children) << " residues " << tuple(w.residues) << '\n';
  return kOk;
}

int cmd_shifts(const Options& opt) {
  const auto dom = io::load_domain(opt.domain);
  const auto cert = certificate(dom, opt);
  if (!cert) return kMath;
  const ShiftSet shifts = make_shifts(dom, cert->delta(), eta_for(dom, opt));
  std::cout << "delta=" << diag(shifts.delta) << (shifts.uniform ? "" : ", index sets differ between cells") << '\n';
  for (std::size_t c = 0; c < shifts.indices.size(); ++c) {
    std::cout << "cell " << c << '\n';
    for (std::size_t s = 0; s < shifts.indices[c].size(); ++s)
      std::cout << "  s=" << s << " j=" << tuple(shifts.indices[c][s]) << " a=" << tuple(shifts.shift(dom.lattice(), c, s))
                << '\n';
  }
  return kOk;
}

int cmd_dual(const Options& opt) {
  const auto dom = io::load_domain(opt.domain);
  const auto cert = certificate(dom, opt);
  if (!cert) return kMath;
  const ExponentialSystem sys(dom, make_shifts(dom, cert->delta(), eta_for(dom, opt)));
  IntVector l(opt.l.begin(), opt.l.end());
  if (l.empty()) l.assign(static_cast<std::size_t>(dom.dimension()), 0);
  if (l.size() != static_cast<std::size_t>(dom.dimension())) throw Error(ErrorCode::InvalidInput, "--l needs d integers");
  if (opt.s >= static_cast<std::size_t>(dom.k())) throw Error(ErrorCode::InvalidInput, "--s must be below k");
  std::vector<io::ResultRow> rows;
  for (const auto& gp : dom.sample_grid(opt.grid))
    for (int r = 0; r < dom.k(); ++r) {
      const Eigen::VectorXd y = dom.omega(r, gp.u);
      rows.push_back({y, dual_eval(sys, l, opt.s, y), 0.0});
    }
  emit(opt, io::result_csv(rows, dom.dimension()));
  return kOk;
}

int cmd_verify(const Options& opt) {
  const auto dom = io::load_domain(opt.domain);
  const auto cert = certificate(dom, opt);
  if (!cert) return kMath;
  const ExponentialSystem sys(dom, make_shifts(dom, cert->delta(), eta_for(dom, opt)));
  const auto report = verify_biorthogonality(sys, opt.radius);
  std::cout << "radius=" << opt.radius << " pairs=" << report.pairs << " max_residual=" << io::format_real(report.max_residual)
            << '\n';
  return report.max_residual <= opt.tol ? kOk : kMath;
}

int cmd_bounds(const Options& opt) {
  const auto dom = io::load_domain(opt.domain);
  const auto cert = certificate(dom, opt);
  if (!cert) return kMath;
  const ExponentialSystem sys(dom, make_shifts(dom, cert->delta(), eta_for(dom, opt)));
  const auto b = riesz_bounds(sys);
  std::cout << "alpha=" << io::format_real(b.alpha) << " beta=" << io::format_real(b.beta) << '\n'
            << "A=" << io::format_real(b.frame_lower) << " B=" << io::format_real(b.frame_upper) << '\n'
            << "cell,kappa,sigma_min_sq,sigma_max_sq,factored_lower,factored_upper,block_kappa\n";
  for (const auto& c : b.cells) {
    std::cout << c.cell << ',' << io::format_real(c.condition) << ',' << io::format_real(c.sigma_min_sq) << ','
              << io::format_real(c.sigma_max_sq) << ',' << io::format_real(c.factored_lower) << ','
              << io::format_real(c.factored_upper) << ',';
    for (std::size_t l = 0; l < c.levels.size(); ++l) std::cout << (l ? " " : "") << io::format_real(c.levels[l].condition());
    std::cout << '\n';
  }
  return kOk;
}

// "random" draws an independent smooth exponential sum per region;
// "exp:re,im@l_1,...,l_d;..." is a finite exponential sum on all of Omega.
struct TestFunction {
  std::vector<ExponentialSum> per_region;
  bool global = false;

  Complex operator()(int region, const Eigen::VectorXd& y) const {
    return per_region[global ? 0 : static_cast<std::size_t>(region)](y);
  }
};

std::vector<double> numbers(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw Error(ErrorCode::InvalidInput, "bad number '" + item + "' in --function");
    out.push_back(x);
  }
  return out;
}

TestFunction parse_function(const std::string& spec, int d, int k, std::uint64_t seed) {
  TestFunction f;
  if (spec == "random") {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> freq(-2.0, 2.0);
    std::normal_distribution<double> coef;
    for (int r = 0; r < k; ++r) {
      ExponentialSum sum;
      for (int t = 0; t < 3; ++t) {
        Eigen::VectorXd l(d);
        for (int i = 0; i < d; ++i) l[i] = freq(rng);
        sum.frequencies.push_back(l);
        sum.coefficients.emplace_back(coef(rng), coef(rng));
      }
      f.per_region.push_back(std::move(sum));
    }
    return f;
  }
  if (spec.rfind("exp:", 0) != 0) throw Error(ErrorCode::InvalidInput, "--function must be 'random' or 'exp:...'");
  f.global = true;
  ExponentialSum sum;
  std::stringstream terms(spec.substr(4));
  std::string term;
  while (std::getline(terms, term, ';')) {
    const auto at = term.find('@');
    if (at == std::string::npos) throw Error(ErrorCode::InvalidInput, "exponential term needs 're,im@l'");
    const auto c = numbers(term.substr(0, at));
    const auto l = numbers(term.substr(at + 1));
    if (c.size() != 2 || l.size() != static_cast<std::size_t>(d))
      throw Error(ErrorCode::InvalidInput, "exponential term needs 2 coefficients and d frequencies");
    sum.frequencies.push_back(Eigen::Map<const Eigen::VectorXd>(l.data(), d));
    sum.coefficients.emplace_back(c[0], c[1]);
  }
  if (sum.frequencies.empty()) throw Error(ErrorCode::InvalidInput, "empty exponential sum");
  f.per_region.push_back(std::move(sum));
  return f;
}

int cmd_synthesize(const Options& opt) {
  const auto dom = io::load_domain(opt.domain);
  const auto cert = certificate(dom, opt);
  if (!cert) return kMath;
  if (opt.out.empty()) throw Error(ErrorCode::InvalidInput, "synthesize needs --out");
  const ShiftSet shifts = make_shifts(dom, cert->delta(), eta_for(dom, opt));
  const ExponentialSystem sys(dom, shifts);
  const std::string spec = opt.function.empty() ? "random" : opt.function;
  const TestFunction f = parse_function(spec, dom.dimension(), dom.k(), opt.seed);
  const auto grid = dom.sample_grid(opt.grid);

  SpectralData data;
  if (opt.mode == "pointwise") {
    std::vector<std::vector<Complex>> values;
    for (const auto& gp : grid) {
      std::vector<Complex> row;
      for (int r = 0; r < dom.k(); ++r) row.push_back(f(r, dom.omega(r, gp.u)));
      values.push_back(std::move(row));
    }
    data = forward_data(sys, grid, values);
  } else if (opt.mode == "coeff") {
    if (!f.global) throw Error(ErrorCode::InvalidInput, "coeff mode needs an 'exp:...' function");
    data = coefficient_data(sys, grid, f.per_region[0], opt.radius);
  } else {
    throw Error(ErrorCode::InvalidInput, "--mode must be pointwise or coeff");
  }

  io::SamplesMeta meta;
  meta.dimension = dom.dimension();
  meta.k = dom.k();
  meta.delta = shifts.delta;
  meta.eta = shifts.eta;
  meta.v = cert->v;
  meta.q = cert->q;
  meta.indices = shifts.indices;
  meta.provenance = data.provenance;
  meta.radius = data.radius;
  meta.function = spec;
  meta.seed = opt.seed;
  io::write_atomic(opt.out, io::samples_csv(data, dom.dimension(), dom.k()));
  io::write_atomic(io::meta_path(opt.out), io::serialize_meta(meta));
  std::cout << "wrote " << data.samples.size() << " samples (" << to_string(data.provenance) << ") to " << opt.out << '\n';
  return kOk;
}

int cmd_reconstruct(const Options& opt) {
  const auto dom = io::load_domain(opt.domain);
  if (opt.samples.empty()) throw Error(ErrorCode::InvalidInput, "reconstruct needs --samples");
  const auto meta = io::parse_meta(io::read_file(io::meta_path(opt.samples)));
  if (meta.dimension != dom.dimension() || meta.k != dom.k())
    throw Error(ErrorCode::InvalidInput, "samples were made for a different dimension or k");
  if (meta.delta.size() != static_cast<std::size_t>(dom.dimension()))
    throw Error(ErrorCode::InvalidInput, "metadata delta has the wrong length");
  const ShiftSet shifts = make_shifts(dom, meta.delta, meta.eta);
  if (shifts.indices != meta.indices) throw Error(ErrorCode::InvalidInput, "metadata index sets do not match the domain");
  const ExponentialSystem sys(dom, shifts);
  SpectralData data = io::parse_samples_csv(io::read_file(opt.samples), dom.dimension(), dom.k());
  data.provenance = meta.provenance;
  data.radius = meta.radius;

  const auto result = reconstruct_grid(sys, data, opt.oracle);
  emit(opt, io::result_csv(io::result_rows(result), dom.dimension()));

  std::ostream& log = opt.out.empty() ? std::cerr : std::cout;
  log << "points=" << result.points.size() << " skipped=" << result.skipped.size() << '\n';
  double worst_kappa = 1.0;
  for (const auto& c : result.cells) worst_kappa = std::max(worst_kappa, c.condition);
  log << "max_kappa=" << io::format_real(worst_kappa) << '\n';
  if (!meta.function.empty()) {
    const TestFunction f = parse_function(meta.function, dom.dimension(), dom.k(), meta.seed);
    double err = 0.0;
    for (const auto& p : result.points)
      for (int r = 0; r < dom.k(); ++r) {
        const Complex truth = f(r, p.y[static_cast<std::size_t>(r)]);
        err = std::max(err, std::abs(p.values[static_cast<std::size_t>(r)] - truth) / std::max(1.0, std::abs(truth)));
      }
    log << "max_error=" << io::format_real(err) << '\n';
  }
  if (opt.oracle) {
    log << "max_residual=" << io::format_real(result.max_residual) << '\n';
    if (result.max_residual > opt.tol) return kMath;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exponential Riesz bases on lattice multi-tiles"};
  app.require_subcommand(1);
  Options opt;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--domain", opt.domain, "domain spec (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--v", opt.v, "admissibility vector v")->delimiter(',');
    sub->add_option("--q", opt.q, "moduli q")->delimiter(',');
    sub->add_option("--v-max", opt.v_max, "search bound for v when --q is absent");
    sub->add_option("--q-max", opt.q_max, "search bound for q when --q is absent");
    sub->add_option("--eta", opt.eta, "dual lattice shift eta (integer coordinates)")->delimiter(',');
  };

  auto* check = app.add_subcommand("check", "certify admissibility or search for (v, q)");
  common(check);
  check->add_option("--out", opt.out, "write the certificate JSON here");

  auto* shifts = app.add_subcommand("shifts", "print shift indices and shift vectors");
  common(shifts);

  auto* dual = app.add_subcommand("dual", "evaluate a dual basis function on the sample grid");
  common(dual);
  dual->add_option("--l", opt.l, "dual lattice index of the frequency")->delimiter(',');
  dual->add_option("--s", opt.s, "shift index");
  dual->add_option("--grid", opt.grid, "grid points per axis and cell");
  dual->add_option("--out", opt.out, "result CSV");

  auto* verify = app.add_subcommand("verify", "biorthogonality residual");
  common(verify);
  verify->add_option("--radius", opt.radius, "max |lambda*|_inf");
  verify->add_option("--tol", opt.tol, "fail above this residual");

  auto* bounds = app.add_subcommand("bounds", "Riesz and frame bounds");
  common(bounds);

  auto* synth = app.add_subcommand("synthesize", "generate spectral samples");
  common(synth);
  synth->add_option("--mode", opt.mode, "pointwise or coeff")->check(CLI::IsMember({"pointwise", "coeff"}));
  synth->add_option("--function", opt.function, "'random' or 'exp:re,im@l_1,...,l_d;...'");
  synth->add_option("--radius", opt.radius, "truncation radius for coeff mode");
  synth->add_option("--grid", opt.grid, "grid points per axis and cell");
  synth->add_option("--seed", opt.seed, "random seed");
  synth->add_option("--out", opt.out, "samples CSV; metadata goes to <out>.meta.json")->required();

  auto* recon = app.add_subcommand("reconstruct", "recover point values from samples");
  recon->add_option("--domain", opt.domain, "domain spec (JSON)")->required()->check(CLI::ExistingFile);
  recon->add_option("--samples", opt.samples, "samples CSV")->required()->check(CLI::ExistingFile);
  recon->add_flag("--oracle", opt.oracle, "cross-check against a dense solve");
  recon->add_option("--tol", opt.tol, "fail when the oracle residual exceeds this");
  recon->add_option("--out", opt.out, "result CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*check) return cmd_check(opt);
    if (*shifts) return cmd_shifts(opt);
    if (*dual) return cmd_dual(opt);
    if (*verify) return cmd_verify(opt);
    if (*bounds) return cmd_bounds(opt);
    if (*synth) return cmd_synthesize(opt);
    if (*recon) return cmd_reconstruct(opt);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_mathematical(e.code()) ? kMath : kInput;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}
