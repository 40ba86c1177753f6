#include "app.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "nhminor/covariance.hpp"
#include "nhminor/errors.hpp"
#include "nhminor/estimators.hpp"
#include "nhminor/kernels.hpp"
#include "nhminor/mde.hpp"
#include "nhminor/resolvent.hpp"
#include "nhminor/rng.hpp"

namespace nhminor::cli {

std::string fmt(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

namespace {

double parse_real(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse " + what + ": '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument("cannot parse " + what + ": '" + s + "'");
  return v;
}

std::string strip(const std::string& s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  return out;
}

}  // namespace

cplx parse_complex(const std::string& text) {
  const std::string s = strip(text);
  if (s.empty()) throw std::invalid_argument("empty complex number");
  if (s.back() != 'i') return parse_real(s, "complex number");
  const std::string body = s.substr(0, s.size() - 1);
  std::size_t split = std::string::npos;
  for (std::size_t p = body.size(); p-- > 1;) {
    if ((body[p] == '+' || body[p] == '-') && body[p - 1] != 'e' && body[p - 1] != 'E') {
      split = p;
      break;
    }
  }
  auto imag_of = [&](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_real(t, "complex number");
  };
  if (split == std::string::npos) return cplx(0.0, imag_of(body));
  return cplx(parse_real(body.substr(0, split), "complex number"), imag_of(body.substr(split)));
}

BumpSpec BumpSpec::parse(const std::string& text) {
  const std::string s = strip(text);
  const auto at = s.find('@');
  if (at == std::string::npos) throw std::invalid_argument("bump needs CENTER@RADIUS: '" + s + "'");
  BumpSpec b;
  b.center = parse_complex(s.substr(0, at));
  std::string rest = s.substr(at + 1);
  const auto star = rest.find('*');
  if (star != std::string::npos) {
    b.amplitude = parse_complex(rest.substr(star + 1));
    rest = rest.substr(0, star);
  }
  b.radius = parse_real(rest, "bump radius");
  if (!(b.radius > 0.0)) throw std::invalid_argument("bump radius must be positive");
  return b;
}

TestFunction BumpSpec::make() const { return bump(center, radius, amplitude); }

TestFunction BumpSpec::make_scaled(cplx z0, double scale) const {
  return bump(z0 + scale * center, scale * radius, amplitude);
}

std::string BumpSpec::str() const {
  std::string s = fmt(center.real());
  s += center.imag() < 0 ? "-" : "+";
  s += fmt(std::abs(center.imag())) + "i@" + fmt(radius);
  if (amplitude != 1.0) s += "*" + fmt(amplitude.real()) + "+" + fmt(amplitude.imag()) + "i";
  return s;
}

int meso_level(const MesoSpec& m, int n, double y) {
  const double x = m.x0 + std::pow(static_cast<double>(n), -2.0 * m.a) * y;
  const long k = std::lround(x * n);
  if (k < 1 || k > n) throw std::invalid_argument("mesoscopic level offset leaves [1, n]");
  return static_cast<int>(k);
}

namespace {

std::pair<std::string, std::string> split_stat(const std::string& s) {
  const auto c = s.find(':');
  if (c == std::string::npos) throw std::invalid_argument("statistic needs LEVEL:BUMP: '" + s + "'");
  return {s.substr(0, c), s.substr(c + 1)};
}

void write_config(std::ostream& os, const std::string& config_text) {
  std::istringstream in(config_text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) os << "# config: " << line << '\n';
}

}  // namespace

SimulateReport simulate(const SimulateConfig& cfg) {
  if (!cfg.seed) throw std::invalid_argument("a master seed is required");
  if (cfg.stats.empty()) throw std::invalid_argument("no statistics requested");
  if (!(cfg.rel_tol >= 0.0)) throw std::invalid_argument("relative tolerance must be non-negative");
  const EntryLaw law = EntryLaw::make(cfg.law, cfg.beta);
  if (cfg.n < 2) throw std::invalid_argument("n must be at least 2");

  std::optional<MesoContext> mc;
  if (cfg.meso) {
    mc = MesoContext{cfg.meso->x0, cfg.meso->z0, cfg.meso->a};
    mc->validate();
  }
  const double scale = cfg.meso ? std::pow(static_cast<double>(cfg.n), -cfg.meso->a) : 1.0;

  std::vector<double> offsets;
  std::vector<TestFunction> unscaled, fs;
  SimulateReport rep;
  for (const auto& s : cfg.stats) {
    const auto [lvl, bmp] = split_stat(strip(s));
    const BumpSpec b = BumpSpec::parse(bmp);
    if (cfg.meso) {
      const double y = parse_real(lvl, "level offset");
      offsets.push_back(y);
      rep.levels.push_back(meso_level(*cfg.meso, cfg.n, y));
      unscaled.push_back(b.make());
      fs.push_back(b.make_scaled(cfg.meso->z0, scale));
    } else {
      const double k = parse_real(lvl, "level");
      if (k != std::floor(k) || k < 1 || k > cfg.n)
        throw std::invalid_argument("statistic level must be an integer in [1, n]");
      rep.levels.push_back(static_cast<int>(k));
      fs.push_back(b.make());
    }
  }

  if (!cfg.from_replicas.empty()) {
    std::ifstream in(cfg.from_replicas);
    if (!in) throw std::invalid_argument("cannot open replica file " + cfg.from_replicas);
    rep.values = read_replicas(in, rep.levels);
  } else {
    SimulationPlan plan;
    plan.n = cfg.n;
    plan.law = law;
    plan.master_seed = *cfg.seed;
    plan.replicas = cfg.replicas;
    plan.workers = cfg.workers;
    for (std::size_t s = 0; s < fs.size(); ++s) plan.statistics.push_back({rep.levels[s], fs[s]});
    SimulationResult res = run_replicas(plan);
    rep.values = std::move(res.values);
    rep.resampled = res.resampled;
  }

  const int S = static_cast<int>(fs.size());
  if (cfg.covariances) {
    for (int i = 0; i < S; ++i) {
      for (int j = i; j < S; ++j) {
        ComparisonRow row;
        row.kind = "cov";
        row.i = i;
        row.j = j;
        row.level_i = rep.levels[i];
        row.level_j = rep.levels[j];
        const auto est = covariance_estimate(rep.values[i], rep.values[j], cfg.batches);
        row.estimate = est.cov;
        row.std_error = est.std_error;
        if (mc) {
          row.theory = C_meso(*mc, cfg.beta, offsets[i], unscaled[i], offsets[j], unscaled[j]).value;
        } else {
          const double n = cfg.n;
          row.theory = C_beta(cfg.beta, law.kappa4(), rep.levels[i] / n, fs[i], rep.levels[j] / n,
                              fs[j]).total;
        }
        row.deviation = std::abs(row.estimate - row.theory);
        row.tolerance = std::max(3.0 * row.std_error, cfg.rel_tol * std::abs(row.theory));
        row.z_score = row.std_error > 0.0 ? row.deviation / row.std_error : INFINITY;
        row.pass = row.deviation <= row.tolerance;
        rep.rows.push_back(row);
      }
    }
  }
  if (cfg.cumulants) {
    for (int i = 0; i < S; ++i) {
      for (int order : {3, 4}) {
        const auto ce = cumulant_estimate(rep.values[i], order, cfg.batches);
        ComparisonRow row;
        row.kind = order == 3 ? "k3" : "k4";
        row.i = row.j = i;
        row.level_i = row.level_j = rep.levels[i];
        row.estimate = ce.value;
        row.std_error = ce.std_error;
        row.theory = 0.0;
        row.deviation = ce.standardized;
        row.tolerance = order == 3 ? cfg.k3_max : cfg.k4_max;
        row.z_score = ce.std_error > 0.0 ? std::abs(ce.value) / ce.std_error : INFINITY;
        row.pass = row.deviation <= row.tolerance;
        rep.rows.push_back(row);
      }
    }
  }
  for (const auto& r : rep.rows) rep.all_pass = rep.all_pass && r.pass;
  return rep;
}

void write_replicas(std::ostream& os, const SimulateReport& rep, const std::string& config_text) {
  write_config(os, config_text);
  os << "replica,level_k,statistic_re,statistic_im\n";
  const std::size_t R = rep.values.empty() ? 0 : rep.values.front().size();
  for (std::size_t r = 0; r < R; ++r)
    for (std::size_t s = 0; s < rep.values.size(); ++s)
      os << r << ',' << rep.levels[s] << ',' << fmt(rep.values[s][r].real()) << ','
         << fmt(rep.values[s][r].imag()) << '\n';
}

std::vector<std::vector<cplx>> read_replicas(std::istream& is, const std::vector<int>& levels) {
  const std::size_t S = levels.size();
  std::vector<std::vector<cplx>> values(S);
  std::string line;
  std::size_t row = 0;
  long current = -1;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (strip(line) != "replica,level_k,statistic_re,statistic_im")
        throw std::invalid_argument("replica file has an unexpected header");
      header = true;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(strip(c));
    if (cells.size() != 4) throw std::invalid_argument("replica row needs four columns");
    const std::size_t s = row % S;
    const long r = std::stol(cells[0]);
    if (s == 0) {
      if (r != current + 1) throw std::invalid_argument("replica indices must be consecutive");
      current = r;
    } else if (r != current) {
      throw std::invalid_argument("replica has the wrong number of statistics");
    }
    if (std::stoi(cells[1]) != levels[s])
      throw std::invalid_argument("replica file levels do not match the configured statistics");
    values[s].emplace_back(parse_real(cells[2], "statistic"), parse_real(cells[3], "statistic"));
    ++row;
  }
  if (!header || row == 0 || row % S != 0) throw std::invalid_argument("replica file is incomplete");
  return values;
}

void write_comparison(std::ostream& os, const SimulateReport& rep, const std::string& config_text) {
  write_config(os, config_text);
  os << "kind,i,j,level_i,level_j,estimate_re,estimate_im,std_error,theory_re,theory_im,"
        "deviation,tolerance,z_score,verdict\n";
  for (const auto& r : rep.rows)
    os << r.kind << ',' << r.i << ',' << r.j << ',' << r.level_i << ',' << r.level_j << ','
       << fmt(r.estimate.real()) << ',' << fmt(r.estimate.imag()) << ',' << fmt(r.std_error) << ','
       << fmt(r.theory.real()) << ',' << fmt(r.theory.imag()) << ',' << fmt(r.deviation) << ','
       << fmt(r.tolerance) << ',' << fmt(r.z_score) << ',' << (r.pass ? "PASS" : "FAIL") << '\n';
}

namespace {

// Routes CSV and summary text.
class Output {
 public:
  Output(const std::string& path, std::ostream& out, std::ostream& log) : out_(out), log_(log) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::invalid_argument("cannot open output file " + path);
    }
  }
  std::ostream& csv() { return file_.is_open() ? static_cast<std::ostream&>(file_) : out_; }
  std::ostream& summary() { return file_.is_open() ? out_ : log_; }

 private:
  std::ofstream file_;
  std::ostream& out_;
  std::ostream& log_;
};

struct MdeArgs {
  std::vector<double> x, eta;
  std::vector<std::string> z;
  std::string out;
};

struct KernelArgs {
  double x1 = 0.5, x2 = 1.0;
  std::string z1 = "0", z2 = "0";
  std::optional<double> eta1, eta2;
  bool integrate = false;
  int eta_nodes = 128;
  std::string out;
};

struct CovArgs {
  std::vector<double> x1, x2;
  std::vector<std::string> f1, f2;
  int beta = 2;
  std::string law = "gaussian";
  std::optional<double> kappa4;
  int radial = 32, angular = 64;
  double tolerance = 1e-4;
  std::string out;
};

struct SimArgs {
  SimulateConfig cfg;
  std::optional<double> meso_x0, meso_a;
  std::string meso_z0;
  std::string out;
};

struct LawArgs {
  std::vector<int> ns{64, 128, 256};
  int samples = 64;
  std::optional<std::uint64_t> seed;
  std::string law = "gaussian";
  int beta = 2;
  double x1 = 0.5, x2 = 1.0;
  std::vector<std::string> z1{"0.2", "-0.2+0.2i", "0.3i", "-0.1-0.3i"};
  std::vector<std::string> z2{"0.1+0.1i", "0.3", "-0.3+0.2i", "0.4-0.2i"};
  double eta1 = 0.2, eta2 = 0.2;
  std::string B1 = "E+", B2 = "E+";
  std::string mode = "both";
  double slope = -1.0, band = 0.3;
  std::string out;
};

struct GirkoArgs {
  int n = 32;
  std::optional<int> k;
  std::optional<std::uint64_t> seed;
  std::string law = "gaussian";
  int beta = 2;
  int samples = 3;
  std::vector<double> T{1e3, 1e4};
  std::string f = "0.1+0.05i@0.6";
  int radial = 64, angular = 128;
  double quad_tol = 2e-3;
  double gap_tol = 1e-3;
  std::string out;
};

std::string config_text(const CLI::App& cmd) {
  return "[" + cmd.get_name() + "]\n" + cmd.config_to_str(true, false);
}

int cmd_mde(const MdeArgs& a, Output& o, const std::string& conf) {
  if (a.x.empty() || a.z.empty() || a.eta.empty()) throw std::invalid_argument("empty (x, z, eta) grid");
  std::vector<cplx> zs;
  for (const auto& s : a.z) zs.push_back(parse_complex(s));
  write_config(o.csv(), conf);
  o.csv() << "x,z_re,z_im,eta,m_re,m_im,u_re,u_im,rho,dm_re,dm_im,residual,flag\n";
  int flagged = 0, rows = 0;
  const MdeTolerances tol;
  for (double x : a.x)
    for (cplx z : zs)
      for (double eta : a.eta) {
        const auto p = SpectralPoint::on_axis(x, z, eta);
        const auto s = solve_m(p);
        const bool bad = !(s.residual <= tol.residual);
        flagged += bad;
        ++rows;
        o.csv() << fmt(x) << ',' << fmt(z.real()) << ',' << fmt(z.imag()) << ',' << fmt(eta) << ','
                << fmt(s.m.real()) << ',' << fmt(s.m.imag()) << ',' << fmt(s.u.real()) << ','
                << fmt(s.u.imag()) << ',' << fmt(s.rho) << ',' << fmt(s.m_eta_deriv.real()) << ','
                << fmt(s.m_eta_deriv.imag()) << ',' << fmt(s.residual) << ','
                << (bad ? "residual" : "ok") << '\n';
      }
  o.summary() << "mde: " << rows << " points, " << flagged << " above residual tolerance\n";
  return exit_ok;
}

int cmd_kernel(const KernelArgs& a, Output& o, const std::string& conf) {
  const LevelPair lp{a.x1, parse_complex(a.z1), a.x2, parse_complex(a.z2)};
  const double K = kernel_K(lp), Th = kernel_Theta(lp);
  write_config(o.csv(), conf);
  o.csv() << "x1,z1_re,z1_im,x2,z2_re,z2_im,K,Theta";
  const bool at_eta = a.eta1 && a.eta2;
  if (a.eta1.has_value() != a.eta2.has_value()) throw std::invalid_argument("give both etas or neither");
  if (at_eta) o.csv() << ",eta1,eta2,log_arg_re,log_arg_im,V12,V12_conj";
  if (a.integrate) o.csv() << ",V_integral,V_integral_error";
  o.csv() << '\n';
  o.csv() << fmt(lp.x1) << ',' << fmt(lp.z1.real()) << ',' << fmt(lp.z1.imag()) << ',' << fmt(lp.x2)
          << ',' << fmt(lp.z2.real()) << ',' << fmt(lp.z2.imag()) << ',' << fmt(K) << ',' << fmt(Th);
  if (at_eta) {
    const auto pp = PairPoint::make(SpectralPoint::on_axis(lp.x1, lp.z1, *a.eta1),
                                    SpectralPoint::on_axis(lp.x2, lp.z2, *a.eta2));
    const cplx la = log_argument(pp);
    o.csv() << ',' << fmt(*a.eta1) << ',' << fmt(*a.eta2) << ',' << fmt(la.real()) << ','
            << fmt(la.imag()) << ',' << fmt(V12(pp)) << ',' << fmt(V12_conj(pp));
  }
  if (a.integrate) {
    QuadratureSpec spec;
    spec.eta_nodes = a.eta_nodes;
    spec.tolerance = 1e-8;
    const auto r = integrate_V12(lp, spec);
    o.csv() << ',' << fmt(r.value) << ',' << fmt(r.error);
    o.summary() << "kernel: int int V12 = " << fmt(r.value) << ", -Theta = " << fmt(-Th) << '\n';
  }
  o.csv() << std::endl;
  o.summary() << "kernel: K = " << fmt(K) << ", Theta = " << fmt(Th) << '\n';
  return exit_ok;
}

int cmd_cov(const CovArgs& a, Output& o, const std::string& conf) {
  const std::size_t P = a.x1.size();
  if (P == 0 || a.x2.size() != P || a.f1.size() != P || a.f2.size() != P)
    throw std::invalid_argument("x1, f1, x2, f2 must be non-empty lists of equal length");
  const double k4 = a.kappa4 ? *a.kappa4 : EntryLaw::make(a.law, a.beta).kappa4();
  CovarianceSettings s;
  s.spec.radial_nodes = a.radial;
  s.spec.angular_nodes = a.angular;
  s.spec.tolerance = a.tolerance;
  s.spec.validate();
  write_config(o.csv(), conf);
  o.csv() << "x1,f1,x2,f2,beta,kappa4,gaussian_re,gaussian_im,kappa4_part_re,kappa4_part_im,"
             "total_re,total_im,error,finite_differences,fourier_truncated\n";
  for (std::size_t p = 0; p < P; ++p) {
    const BumpSpec b1 = BumpSpec::parse(a.f1[p]), b2 = BumpSpec::parse(a.f2[p]);
    const auto v = C_beta(a.beta, k4, a.x1[p], b1.make(), a.x2[p], b2.make(), s);
    o.csv() << fmt(a.x1[p]) << ',' << b1.str() << ',' << fmt(a.x2[p]) << ',' << b2.str() << ','
            << a.beta << ',' << fmt(k4) << ',' << fmt(v.gaussian_part.real()) << ','
            << fmt(v.gaussian_part.imag()) << ',' << fmt(v.kappa4_part.real()) << ','
            << fmt(v.kappa4_part.imag()) << ',' << fmt(v.total.real()) << ','
            << fmt(v.total.imag()) << ',' << fmt(v.error) << ',' << v.finite_differences << ','
            << v.fourier_truncated << '\n';
    o.summary() << "cov-theory: pair " << p << " total = " << fmt(v.total.real()) << " + "
                << fmt(v.total.imag()) << "i\n";
  }
  return exit_ok;
}

int cmd_simulate(SimArgs& a, Output& o, const std::string& conf) {
  if (a.meso_x0 || a.meso_a || !a.meso_z0.empty()) {
    if (!a.meso_x0 || !a.meso_a || a.meso_z0.empty())
      throw std::invalid_argument("mesoscopic runs need --meso-x0, --meso-z0 and --meso-a");
    a.cfg.meso = MesoSpec{*a.meso_x0, parse_complex(a.meso_z0), *a.meso_a};
  }
  a.cfg.config_text = conf;
  const SimulateReport rep = simulate(a.cfg);
  if (!a.cfg.replicas_out.empty()) {
    std::ofstream f(a.cfg.replicas_out);
    if (!f) throw std::invalid_argument("cannot open " + a.cfg.replicas_out);
    write_replicas(f, rep, conf);
  }
  write_comparison(o.csv(), rep, conf);
  for (const auto& r : rep.rows)
    o.summary() << (r.pass ? "PASS " : "FAIL ") << r.kind << '(' << r.i << ',' << r.j
                << ") estimate=" << fmt(r.estimate.real()) << (r.estimate.imag() < 0 ? "" : "+")
                << fmt(r.estimate.imag()) << "i theory=" << fmt(r.theory.real())
                << " z=" << fmt(r.z_score) << '\n';
  if (rep.resampled > 0) o.summary() << "resampled replicas: " << rep.resampled << '\n';
  return rep.all_pass ? exit_ok : exit_failed;
}

int cmd_locallaw(const LawArgs& a, Output& o, const std::string& conf) {
  if (!a.seed) throw std::invalid_argument("a master seed is required");
  if (a.ns.size() < 2) throw std::invalid_argument("the n sweep needs at least two sizes");
  if (a.samples < 1) throw std::invalid_argument("sample count must be positive");
  if (a.mode != "single" && a.mode != "two" && a.mode != "both")
    throw std::invalid_argument("mode must be single, two or both");
  const EntryLaw law = EntryLaw::make(a.law, a.beta);
  if (a.z1.empty() || a.z1.size() != a.z2.size())
    throw std::invalid_argument("--z1 and --z2 must be non-empty lists of equal length");
  std::vector<cplx> z1, z2;
  for (std::size_t p = 0; p < a.z1.size(); ++p) {
    z1.push_back(parse_complex(a.z1[p]));
    z2.push_back(parse_complex(a.z2[p]));
  }
  const Observable B1 = parse_observable(a.B1), B2 = parse_observable(a.B2);
  if (a.x1 > a.x2) throw std::invalid_argument("two-resolvent law needs x1 <= x2");

  write_config(o.csv(), conf);
  o.csv() << "n,k1,k2,z1_re,z1_im,z2_re,z2_im,eta1,eta2,B1,B2,error,bound_ref\n";
  auto row = [&](const LocalLawRecord& r) {
    o.csv() << r.n << ',' << r.k1 << ',' << r.k2 << ',' << fmt(r.z1.real()) << ','
            << fmt(r.z1.imag()) << ',' << fmt(r.z2.real()) << ',' << fmt(r.z2.imag()) << ','
            << fmt(r.eta1) << ',' << fmt(r.eta2) << ',' << observable_tag(r.B1) << ','
            << observable_tag(r.B2) << ',' << fmt(r.lhs_error) << ',' << fmt(r.bound_reference)
            << '\n';
  };
  // per n, the geometric mean of the errors over all points
  std::vector<double> nn, e1, e2;
  for (int n : a.ns) {
    if (n < 2) throw std::invalid_argument("n must be at least 2");
    const int k1 = static_cast<int>(std::lround(a.x1 * n));
    const int k2 = static_cast<int>(std::lround(a.x2 * n));
    if (k1 < 1 || k2 > n) throw std::invalid_argument("levels must lie in (0, 1]");
    std::vector<Matrix> samples;
    for (int r = 0; r < a.samples; ++r)
      samples.push_back(sample_matrix(n, law, replica_seed(*a.seed, r, static_cast<std::uint64_t>(n))));
    nn.push_back(n);
    double log1 = 0.0, log2 = 0.0;
    for (std::size_t p = 0; p < z1.size(); ++p) {
      if (a.mode != "two") {
        const auto r = single_law_error(samples, k1, z1[p], a.eta1, B1);
        row(r);
        log1 += std::log(r.lhs_error);
      }
      if (a.mode != "single") {
        const auto r = two_law_error(samples, k1, z1[p], a.eta1, k2, z2[p], a.eta2, B1, B2);
        row(r);
        log2 += std::log(r.lhs_error);
      }
    }
    const double P = static_cast<double>(z1.size());
    if (a.mode != "two") e1.push_back(std::exp(log1 / P));
    if (a.mode != "single") e2.push_back(std::exp(log2 / P));
  }
  bool ok = true;
  auto verdict = [&](const char* name, const std::vector<double>& e) {
    if (e.empty()) return;
    const double s = fit_log_slope(nn, e);
    const bool pass = std::abs(s - a.slope) <= a.band;
    ok = ok && pass;
    o.summary() << (pass ? "PASS " : "FAIL ") << name << " slope=" << fmt(s) << " target="
                << fmt(a.slope) << "+-" << fmt(a.band) << '\n';
  };
  verdict("single", e1);
  verdict("two", e2);
  return ok ? exit_ok : exit_failed;
}

int cmd_girko(const GirkoArgs& a, Output& o, const std::string& conf) {
  if (!a.seed) throw std::invalid_argument("a master seed is required");
  if (a.T.empty()) throw std::invalid_argument("no cutoff T given");
  const EntryLaw law = EntryLaw::make(a.law, a.beta);
  const int k = a.k ? *a.k : a.n;
  const TestFunction f = BumpSpec::parse(a.f).make();
  QuadratureSpec grid;
  grid.radial_nodes = a.radial;
  grid.angular_nodes = a.angular;
  grid.tolerance = a.quad_tol;
  grid.max_refinements = 2;
  grid.validate();
  write_config(o.csv(), conf);
  o.csv() << "sample,n,k,T,lhs_re,lhs_im,rhs_re,rhs_im,gap,quadrature_error,verdict\n";
  bool ok = true;
  for (int r = 0; r < a.samples; ++r) {
    const Matrix X = sample_matrix(a.n, law, replica_seed(*a.seed, r));
    const auto results = girko_check(X, k, f, a.T, grid);
    for (std::size_t t = 0; t < a.T.size(); ++t) {
      const auto& g = results[t];
      const bool pass = g.gap <= a.gap_tol * (1.0 + std::abs(g.lhs));
      ok = ok && pass;
      o.csv() << r << ',' << a.n << ',' << k << ',' << fmt(a.T[t]) << ',' << fmt(g.lhs.real())
              << ',' << fmt(g.lhs.imag()) << ',' << fmt(g.rhs.real()) << ',' << fmt(g.rhs.imag())
              << ',' << fmt(g.gap) << ',' << fmt(g.quadrature_error) << ','
              << (pass ? "PASS" : "FAIL") << '\n';
      o.summary() << (pass ? "PASS " : "FAIL ") << "sample " << r << " T=" << fmt(a.T[t])
                  << " gap=" << fmt(g.gap) << '\n';
    }
  }
  return ok ? exit_ok : exit_failed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& log) {
  CLI::App app{"Eigenvalue statistics of nested minors of non-Hermitian random matrices", "nhminor"};
  app.set_config("--config", "", "TOML config file; command-line flags override it");
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();

  MdeArgs mde;
  auto* c_mde = app.add_subcommand("mde", "Solve the scalar Dyson equation on an (x, z, eta) grid");
  c_mde->add_option("--x", mde.x, "Level fractions")->delimiter(',');
  c_mde->add_option("--z", mde.z, "Hermitization parameters, e.g. 0.3+0.1i")->delimiter(',');
  c_mde->add_option("--eta", mde.eta, "Imaginary parts of the spectral parameter")->delimiter(',');
  c_mde->add_option("--out", mde.out, "CSV output file");

  KernelArgs ker;
  auto* c_ker = app.add_subcommand("kernel", "Evaluate K, Theta and V12 for one pair of points");
  c_ker->add_option("--x1", ker.x1);
  c_ker->add_option("--z1", ker.z1);
  c_ker->add_option("--x2", ker.x2);
  c_ker->add_option("--z2", ker.z2);
  c_ker->add_option("--eta1", ker.eta1);
  c_ker->add_option("--eta2", ker.eta2);
  c_ker->add_flag("--integrate", ker.integrate, "Integrate V12 over both eta axes");
  c_ker->add_option("--eta-nodes", ker.eta_nodes);
  c_ker->add_option("--out", ker.out);

  CovArgs cov;
  auto* c_cov = app.add_subcommand("cov-theory", "Limiting covariance of bump statistics");
  c_cov->add_option("--x1", cov.x1)->delimiter(',');
  c_cov->add_option("--f1", cov.f1, "Bumps CENTER@RADIUS")->delimiter(',');
  c_cov->add_option("--x2", cov.x2)->delimiter(',');
  c_cov->add_option("--f2", cov.f2)->delimiter(',');
  c_cov->add_option("--beta", cov.beta)->check(CLI::IsMember({1, 2}));
  c_cov->add_option("--law", cov.law, "Entry law giving kappa4");
  c_cov->add_option("--kappa4", cov.kappa4, "Override kappa4");
  c_cov->add_option("--radial", cov.radial);
  c_cov->add_option("--angular", cov.angular);
  c_cov->add_option("--tolerance", cov.tolerance);
  c_cov->add_option("--out", cov.out);

  SimArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Monte-Carlo covariances compared with theory");
  c_sim->add_option("--n", sim.cfg.n)->required();
  c_sim->add_option("--law", sim.cfg.law);
  c_sim->add_option("--beta", sim.cfg.beta)->check(CLI::IsMember({1, 2}));
  c_sim->add_option("--replicas", sim.cfg.replicas);
  c_sim->add_option("--seed", sim.cfg.seed, "Master seed (required)");
  c_sim->add_option("--workers", sim.cfg.workers);
  c_sim->add_option("--batches", sim.cfg.batches);
  c_sim->add_option("--levels,--stat", sim.cfg.stats, "Statistics LEVEL:BUMP (or Y:BUMP with --meso-*)");
  c_sim->add_option("--meso-x0", sim.meso_x0);
  c_sim->add_option("--meso-z0", sim.meso_z0);
  c_sim->add_option("--meso-a", sim.meso_a);
  c_sim->add_option("--rel-tol", sim.cfg.rel_tol);
  c_sim->add_flag("--cumulants", sim.cfg.cumulants, "Also test third and fourth cumulants");
  c_sim->add_option("--k3-max", sim.cfg.k3_max);
  c_sim->add_option("--k4-max", sim.cfg.k4_max);
  c_sim->add_option("--replicas-out", sim.cfg.replicas_out, "Write replica-level CSV");
  c_sim->add_option("--from-replicas", sim.cfg.from_replicas, "Read replica CSV instead of sampling");
  c_sim->add_option("--out", sim.out);

  LawArgs lw;
  auto* c_law = app.add_subcommand("locallaw", "Local-law error scaling over an n sweep");
  c_law->add_option("--n", lw.ns)->delimiter(',');
  c_law->add_option("--samples", lw.samples);
  c_law->add_option("--seed", lw.seed);
  c_law->add_option("--law", lw.law);
  c_law->add_option("--beta", lw.beta)->check(CLI::IsMember({1, 2}));
  c_law->add_option("--x1", lw.x1);
  c_law->add_option("--z1", lw.z1, "Bulk points at level x1")->delimiter(',');
  c_law->add_option("--eta1", lw.eta1);
  c_law->add_option("--x2", lw.x2);
  c_law->add_option("--z2", lw.z2, "Bulk points at level x2, paired with --z1")->delimiter(',');
  c_law->add_option("--eta2", lw.eta2);
  c_law->add_option("--B1", lw.B1);
  c_law->add_option("--B2", lw.B2);
  c_law->add_option("--mode", lw.mode);
  c_law->add_option("--slope", lw.slope);
  c_law->add_option("--slope-band", lw.band);
  c_law->add_option("--out", lw.out);

  GirkoArgs gk;
  auto* c_gk = app.add_subcommand("girko-check", "Hermitization identity for sampled matrices");
  c_gk->add_option("--n", gk.n);
  c_gk->add_option("--k", gk.k);
  c_gk->add_option("--seed", gk.seed);
  c_gk->add_option("--law", gk.law);
  c_gk->add_option("--beta", gk.beta)->check(CLI::IsMember({1, 2}));
  c_gk->add_option("--samples", gk.samples);
  c_gk->add_option("--T", gk.T)->delimiter(',');
  c_gk->add_option("--f", gk.f);
  c_gk->add_option("--radial", gk.radial);
  c_gk->add_option("--angular", gk.angular);
  c_gk->add_option("--quad-tol", gk.quad_tol);
  c_gk->add_option("--gap-tol", gk.gap_tol);
  c_gk->add_option("--out", gk.out);

  std::vector<const char*> argv{"nhminor"};
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, log);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, log);
    return exit_config;
  }

  const std::string conf = config_text(*app.get_subcommands().front());
  try {
    if (c_mde->parsed()) {
      Output o(mde.out, out, log);
      return cmd_mde(mde, o, conf);
    }
    if (c_ker->parsed()) {
      Output o(ker.out, out, log);
      return cmd_kernel(ker, o, conf);
    }
    if (c_cov->parsed()) {
      Output o(cov.out, out, log);
      return cmd_cov(cov, o, conf);
    }
    if (c_sim->parsed()) {
      Output o(sim.out, out, log);
      return cmd_simulate(sim, o, conf);
    }
    if (c_law->parsed()) {
      Output o(lw.out, out, log);
      return cmd_locallaw(lw, o, conf);
    }
    Output o(gk.out, out, log);
    return cmd_girko(gk, o, conf);
  } catch (const std::invalid_argument& e) {
    log << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const InsufficientReplicas& e) {
    log << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const NumericalError& e) {
    log << "numerical failure: " << e.what() << '\n';
    return exit_numerical;
  }
}

}  // namespace nhminor::cli
