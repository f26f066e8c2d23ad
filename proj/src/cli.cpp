#include "robin/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <numbers>

#include "robin/asymptotics.hpp"
#include "robin/constants.hpp"
#include "robin/disc.hpp"
#include "robin/effective.hpp"
#include "robin/model1d.hpp"
#include "robin/sweep.hpp"
#include "robin/tubular2d.hpp"

namespace robin::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write(const fs::path& path) const {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path.string());
    for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
      for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
      out << "\n";
    }
  }
};

struct DomainData {
  std::shared_ptr<const CurvatureProfile> profile;
  DomainMetrics metrics;
  bool has_metrics = false;
};

DomainData load_domain(const std::string& id, int ncurve) {
  DomainData out;
  if (id.rfind("csv:", 0) == 0 || (id.size() > 4 && id.substr(id.size() - 4) == ".csv")) {
    std::string path = id.rfind("csv:", 0) == 0 ? id.substr(4) : id;
    auto [prof, m] = arc_length_reparametrize(BoundaryCurve::from_csv(path), ncurve);
    out.profile = std::make_shared<const CurvatureProfile>(std::move(prof));
    out.metrics = m;
    out.has_metrics = true;
    return out;
  }
  auto [prof, m] = arc_length_reparametrize(BoundaryCurve::from_preset(id), ncurve);
  out.profile = std::make_shared<const CurvatureProfile>(std::move(prof));
  out.metrics = m;
  out.has_metrics = true;
  return out;
}

// "lo:hi:npts" geometric in |value| (sign from lo), or a comma list, or one value
std::vector<double> parse_sweep(const std::string& text) {
  std::vector<double> out;
  if (text.empty()) return out;
  if (text.find(':') != std::string::npos) {
    double lo, hi;
    int npts;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d", &lo, &hi, &npts) != 3 || npts < 1)
      throw std::invalid_argument("bad sweep spec (want lo:hi:npts): " + text);
    if (lo == 0.0 || hi == 0.0 || (lo < 0) != (hi < 0))
      throw std::invalid_argument("sweep endpoints must be nonzero with one sign: " + text);
    if (npts == 1) return {lo};
    double s = (lo < 0) ? -1.0 : 1.0;
    double la = std::log(std::abs(lo)), lb = std::log(std::abs(hi));
    for (int i = 0; i < npts; ++i) out.push_back(s * std::exp(la + (lb - la) * i / (npts - 1)));
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

void write_echo(const fs::path& dir, const json& echo) {
  std::ofstream out(dir / "config_echo.json");
  out << echo.dump(2) << "\n";
}

double resolve_h(double h, double gamma) {
  if (gamma != 0.0) {
    if (!(gamma < 0.0)) throw std::invalid_argument("gamma must be negative");
    double hg = 1.0 / (gamma * gamma);
    if (h > 0.0 && std::abs(h * gamma * gamma - 1.0) > 1e-12)
      throw std::invalid_argument("h and gamma inconsistent (h = gamma^-2)");
    return hg;
  }
  if (!(h > 0.0)) throw std::invalid_argument("need --h or --gamma");
  return h;
}

EffectiveVariant parse_variant(const std::string& v, int* sign) {
  *sign = +1;
  if (v == "semiclassical") return EffectiveVariant::semiclassical;
  if (v == "gamma") return EffectiveVariant::gamma_form;
  if (v == "full") return EffectiveVariant::full;
  if (v == "disc") return EffectiveVariant::disc_effective;
  if (v == "bracket+") return EffectiveVariant::bracket;
  if (v == "bracket-") {
    *sign = -1;
    return EffectiveVariant::bracket;
  }
  throw std::invalid_argument("unknown variant: " + v);
}

// ---------------------------------------------------------------------------

struct App {
  std::string out_dir = "out";
  int threads = 0;
  json echo;

  fs::path prepare_out() const {
    fs::path dir(out_dir);
    fs::create_directories(dir);
    return dir;
  }
};

int cmd_solve_effective(App& app, const std::string& domain, int ncurve, double h, double gamma,
                        double b, double beta0_opt, const std::string& variant, double c,
                        double alpha, int M, int k, const std::string& h_sweep) {
  auto dom = load_domain(domain, ncurve);
  double beta0 = beta0_opt > 0.0 ? beta0_opt : dom.metrics.beta0;
  int sign = +1;
  auto var = parse_variant(variant, &sign);
  std::vector<double> hs = h_sweep.empty() ? std::vector<double>{resolve_h(h, gamma)}
                                           : parse_sweep(h_sweep);

  double kmax = dom.profile->max_info.kappa_max;
  double kpp = dom.profile->max_info.kappa_pp;
  bool expand_ok = dom.profile->max_info.max_nondegenerate;

  Csv csv;
  csv.header = {"h",        "index",   "computed", "expansion",
                "residual", "normalized_residual", "cutoff"};
  std::vector<std::vector<std::vector<std::string>>> slot(hs.size());
  run_indexed((int)hs.size(), [&](int i) {
    EffectiveSpec spec;
    spec.profile = dom.profile;
    spec.h = hs[i];
    spec.b = b;
    spec.beta0 = beta0;
    spec.variant = var;
    spec.bracket_sign = sign;
    spec.c = c;
    spec.alpha = alpha;
    auto res = solve_effective(spec, M, k);
    for (int j = 0; j < k; ++j) {
      double expansion = std::nan("");
      if (expand_ok && var != EffectiveVariant::disc_effective)
        expansion = effective_expansion(-1.0 / std::sqrt(hs[i]), j + 1, kmax, kpp);
      double resid = res.eigenvalues[j] - expansion;
      slot[i].push_back({fmt(hs[i]), std::to_string(j + 1), fmt(res.eigenvalues[j]),
                         fmt(expansion), fmt(resid), fmt(resid / std::pow(hs[i], 0.75)),
                         std::to_string(res.cutoff)});
    }
  }, app.threads);
  for (auto& group : slot)
    for (auto& row : group) csv.rows.push_back(std::move(row));

  auto dir = app.prepare_out();
  csv.write(dir / "effective.csv");
  write_echo(dir, app.echo);
  return 0;
}

int cmd_disc_effective(App& app, double h, double gamma, double b, int k) {
  double hh = resolve_h(h, gamma);
  auto closed = disc_effective_lambda(hh, b, k);
  auto dom = load_domain("circle:1", 256);
  EffectiveSpec spec;
  spec.profile = dom.profile;
  spec.h = hh;
  spec.b = b;
  spec.beta0 = 0.5;
  spec.variant = EffectiveVariant::disc_effective;
  auto res = solve_effective(spec, 0, k);
  Csv csv;
  csv.header = {"h", "index", "computed", "expansion", "residual", "normalized_residual", "cutoff"};
  for (int j = 0; j < k; ++j) {
    double resid = res.eigenvalues[j] - closed[j];
    csv.rows.push_back({fmt(hh), std::to_string(j + 1), fmt(res.eigenvalues[j]), fmt(closed[j]),
                        fmt(resid), fmt(resid / hh), std::to_string(res.cutoff)});
  }
  auto dir = app.prepare_out();
  csv.write(dir / "disc_effective.csv");
  write_echo(dir, app.echo);
  return 0;
}

int cmd_solve_disc(App& app, double h, double gamma, double b, int nr) {
  DiscParams p;
  p.gamma = (gamma != 0.0) ? gamma : -1.0 / std::sqrt(resolve_h(h, gamma));
  p.b = b;
  p.n_r = nr;
  auto table = solve_disc_full(p);
  double hh = p.h();
  auto expand = disc_expansion_gamma(p.gamma, b);

  Csv csv;
  csv.header = {"m", "lambda1_P", "residual_vs_expansion", "grid_nr"};
  for (size_t j = 0; j < table.modes.size(); ++j)
    csv.rows.push_back({std::to_string(table.modes[j]), fmt(table.lambda1[j]),
                        fmt(table.lambda1[j] - expand.p_form), std::to_string(nr)});
  Csv summary;
  summary.header = {"h", "gamma", "b", "argmin_m", "mu1", "residual_offset", "target_offset"};
  summary.rows.push_back({fmt(hh), fmt(p.gamma), fmt(b), std::to_string(table.argmin_m),
                          fmt(table.mu1), fmt(table.residual),
                          fmt(magnetic_offset(b).value - 0.5)});
  auto dir = app.prepare_out();
  csv.write(dir / "disc_modes.csv");
  summary.write(dir / "disc_summary.csv");
  write_echo(dir, app.echo);
  return 0;
}

int cmd_solve_tubular(App& app, const std::string& domain, int ncurve, double h, double b,
                      double rho, double beta0_opt, int ns, int ntau, int k, bool sandwich,
                      double c, double alpha, double eta) {
  auto dom = load_domain(domain, ncurve);
  TubularSpec spec;
  spec.profile = dom.profile;
  spec.h = h;
  spec.b = b;
  spec.rho = rho;
  spec.beta0 = beta0_opt > 0.0 ? beta0_opt : dom.metrics.beta0;
  spec.n_s = ns;
  spec.n_tau = ntau;

  auto dir = app.prepare_out();
  if (sandwich) {
    auto rep = sandwich_report(spec, c, alpha, k, eta);
    Csv csv;
    csv.header = {"index",        "lower",        "mu",  "upper",     "defect_lower",
                  "defect_upper", "g_allowance",  "fd_estimate", "truncation_estimate",
                  "h_power",      "ordering_ok"};
    for (const auto& row : rep.rows)
      csv.rows.push_back({std::to_string(row.index), fmt(row.lower), fmt(row.mu), fmt(row.upper),
                          fmt(row.defect_lower), fmt(row.defect_upper), fmt(rep.g),
                          fmt(rep.fd_estimate), fmt(rep.truncation_estimate), fmt(rep.h_power),
                          rep.ordering_ok ? "1" : "0"});
    csv.write(dir / "sandwich.csv");
  } else {
    auto res = solve_tubular(spec, k, /*want_vectors=*/true);  // residuals come with vectors
    Csv csv;
    csv.header = {"h", "index", "mu", "residual", "grid"};
    for (int j = 0; j < k; ++j)
      csv.rows.push_back({fmt(h), std::to_string(j + 1), fmt(res.eigenvalues[j]),
                          fmt(res.residuals[j]),
                          std::to_string(ns) + "x" + std::to_string(ntau)});
    csv.write(dir / "tubular.csv");
  }
  write_echo(dir, app.echo);
  return 0;
}

int cmd_model1d(App& app, const std::string& op, double T, int n, const std::string& b_list,
                double kappa, const std::string& h_list, double rho, const std::string& domain,
                int ncurve, int ns) {
  auto dir = app.prepare_out();
  Csv csv;
  if (op == "h00") {
    auto res = solve_H00(T, n > 0 ? n : HalfLineSpec::default_grid(T));
    csv.header = {"T", "index", "lambda", "residual", "n"};
    for (size_t j = 0; j < res.eigenvalues.size(); ++j)
      csv.rows.push_back({fmt(T), std::to_string(j + 1), fmt(res.eigenvalues[j]),
                          fmt(res.residuals.empty() ? 0.0 : res.residuals[j]),
                          std::to_string(res.n)});
    csv.write(dir / "model1d_h00.csv");
  } else if (op == "hbt") {
    auto bs = parse_sweep(b_list.empty() ? "0.01" : b_list);
    csv.header = {"B", "T", "lambda1", "expansion", "residual", "normalized_residual", "n"};
    std::vector<std::vector<std::string>> slot(bs.size());
    run_indexed((int)bs.size(), [&](int i) {
      HalfLineSpec spec;
      // keep the weight positive: cap T where a positive slope would cross it
      spec.T = (bs[i] > 0.0) ? std::min(T, 0.8 / bs[i]) : T;
      spec.B = bs[i];
      spec.n = n > 0 ? n : HalfLineSpec::default_grid(spec.T);
      auto res = solve_HBT(spec, 1, false);
      double expansion = -1.0 - bs[i];
      double resid = res.eigenvalues[0] - expansion;
      slot[i] = {fmt(bs[i]), fmt(spec.T), fmt(res.eigenvalues[0]), fmt(expansion), fmt(resid),
                 fmt(resid / (bs[i] * bs[i])), std::to_string(spec.n)};
    }, app.threads);
    csv.rows = std::move(slot);
    csv.write(dir / "model1d_hbt.csv");
  } else if (op == "transverse") {
    auto hs = parse_sweep(h_list.empty() ? "1e-3" : h_list);
    csv.header = {"h", "lambda1", "lambda2", "expansion", "residual", "normalized_residual", "n"};
    std::vector<std::vector<std::string>> slot(hs.size());
    run_indexed((int)hs.size(), [&](int i) {
      TransverseSpec ts;
      ts.kappa_s = kappa;
      ts.h = hs[i];
      ts.rho = rho;
      auto res = solve_transverse(ts, n);
      double expansion = -1.0 - kappa * std::sqrt(hs[i]) - 0.5 * kappa * kappa * hs[i];
      double resid = res.lambda1 - expansion;
      slot[i] = {fmt(hs[i]), fmt(res.lambda1), fmt(res.lambda2), fmt(expansion), fmt(resid),
                 fmt(resid / hs[i]), std::to_string(res.n)};
    }, app.threads);
    csv.rows = std::move(slot);
    csv.write(dir / "model1d_transverse.csv");
  } else if (op == "bo") {
    auto dom = load_domain(domain, ncurve);
    auto hs = parse_sweep(h_list.empty() ? "1e-3" : h_list);
    csv.header = {"h", "max_R", "max_R_over_h", "n_s"};
    for (double hv : hs) {
      auto rep = born_oppenheimer_correction(*dom.profile, hv, rho, ns, n);
      csv.rows.push_back({fmt(hv), fmt(rep.max_R), fmt(rep.max_R / hv), std::to_string(ns)});
    }
    csv.write(dir / "model1d_bo.csv");
  } else {
    throw std::invalid_argument("unknown model1d op: " + op);
  }
  write_echo(dir, app.echo);
  return 0;
}

int cmd_expansion_table(App& app, const std::string& domain, int ncurve,
                        const std::string& gamma_sweep, const std::string& n_list, double b) {
  auto dom = load_domain(domain, ncurve);
  auto gammas = parse_sweep(gamma_sweep);
  auto ns = parse_int_list(n_list);
  if (gammas.empty() || ns.empty()) throw std::invalid_argument("empty sweep or index list");
  for (double g : gammas)
    if (!(g < 0.0)) throw std::invalid_argument("gamma sweep must be negative");
  double kmax = dom.profile->max_info.kappa_max;
  double kpp = dom.profile->max_info.kappa_pp;
  int kneed = 0;
  for (int nn : ns) kneed = std::max(kneed, nn);

  std::vector<std::vector<double>> computed(gammas.size(), std::vector<double>(ns.size()));
  std::vector<int> cutoffs(gammas.size());
  run_indexed((int)gammas.size(), [&](int i) {
    double g = gammas[i];
    EffectiveSpec spec;
    spec.profile = dom.profile;
    spec.h = 1.0 / (g * g);
    spec.gamma = g;
    spec.b = b;
    spec.beta0 = dom.metrics.beta0;
    spec.variant = EffectiveVariant::gamma_form;
    auto res = solve_effective(spec, 0, kneed);
    cutoffs[i] = res.cutoff;
    for (size_t t = 0; t < ns.size(); ++t)
      computed[i][t] = g * g * res.eigenvalues[ns[t] - 1];
  }, app.threads);

  // one report per eigenvalue label; remainder scale of the three-term
  // expansion is |gamma|^{1/2}
  Csv csv;
  csv.header = {"gamma", "index", "computed_P", "expansion_P", "residual", "normalized_residual",
                "cutoff"};
  Csv slopes;
  slopes.header = {"index", "loglog_slope"};
  std::vector<ExpansionReport> reports(ns.size());
  for (size_t t = 0; t < ns.size(); ++t) {
    std::vector<double> sweep, comp, expans, scale;
    std::vector<int> idx;
    for (size_t i = 0; i < gammas.size(); ++i) {
      sweep.push_back(std::abs(gammas[i]));
      idx.push_back(ns[t]);
      comp.push_back(computed[i][t]);
      expans.push_back(expansion_three_term(gammas[i], ns[t], kmax, kpp));
      scale.push_back(std::sqrt(std::abs(gammas[i])));
    }
    reports[t] = build_expansion_report(std::move(sweep), std::move(idx), std::move(comp),
                                        std::move(expans), std::move(scale));
    slopes.rows.push_back({std::to_string(ns[t]), fmt(reports[t].slope)});
  }
  for (size_t i = 0; i < gammas.size(); ++i)
    for (size_t t = 0; t < ns.size(); ++t) {
      const auto& rep = reports[t];
      csv.rows.push_back({fmt(gammas[i]), std::to_string(rep.index[i]), fmt(rep.computed[i]),
                          fmt(rep.expansion[i]), fmt(rep.residual[i]),
                          fmt(rep.normalized_residual[i]), std::to_string(cutoffs[i])});
    }

  auto dir = app.prepare_out();
  csv.write(dir / "expansion.csv");
  slopes.write(dir / "expansion_slopes.csv");
  write_echo(dir, app.echo);
  return 0;
}

int cmd_convergence(App& app, const std::string& target, const std::string& domain, int ncurve,
                    int base_n, double h, double b, double rho, double T) {
  Csv csv;
  csv.header = {"grid", "lambda1", "difference", "order_estimate", "second_order_ok"};
  std::vector<double> vals;
  std::vector<std::string> labels;
  bool spectral = false;

  if (target == "h00") {
    for (int m = 1; m <= 4; m *= 2) {
      vals.push_back(solve_H00(T, base_n * m, 1, false).eigenvalues[0]);
      labels.push_back(std::to_string(base_n * m));
    }
  } else if (target == "effective-fd") {
    auto dom = load_domain(domain, ncurve);
    EffectiveSpec spec;
    spec.profile = dom.profile;
    spec.h = h;
    spec.b = b;
    spec.beta0 = dom.metrics.beta0;
    spec.variant = EffectiveVariant::full;
    for (int m = 1; m <= 4; m *= 2) {
      vals.push_back(solve_effective_fd(spec, base_n * m, 2).eigenvalues[1]);
      labels.push_back(std::to_string(base_n * m));
    }
  } else if (target == "effective-fourier") {
    spectral = true;
    auto dom = load_domain(domain, ncurve);
    EffectiveSpec spec;
    spec.profile = dom.profile;
    spec.h = h;
    spec.b = b;
    spec.beta0 = dom.metrics.beta0;
    spec.variant = EffectiveVariant::full;
    int m0 = std::max(8, default_cutoff(spec) / 2);
    for (int m = 1; m <= 4; m *= 2) {
      vals.push_back(solve_effective(spec, m0 * m, 1).eigenvalues[0]);
      labels.push_back("M=" + std::to_string(m0 * m));
    }
  } else if (target == "tubular") {
    auto dom = load_domain(domain, ncurve);
    TubularSpec spec;
    spec.profile = dom.profile;
    spec.h = h;
    spec.b = b;
    spec.rho = rho;
    spec.beta0 = dom.metrics.beta0;
    spec.force_iterative = true;
    for (int m = 1; m <= 4; m *= 2) {
      spec.n_s = base_n * m;
      spec.n_tau = base_n * m;
      vals.push_back(solve_tubular(spec, 1).eigenvalues[0]);
      labels.push_back(std::to_string(spec.n_s) + "x" + std::to_string(spec.n_tau));
    }
  } else if (target == "disc-radial") {
    DiscParams p = DiscParams::from_h(h);
    p.b = b;
    for (int m = 1; m <= 4; m *= 2) {
      p.n_r = base_n * m;
      vals.push_back(solve_disc_radial(p, magnetic_offset(b).m));
      labels.push_back(std::to_string(p.n_r));
    }
  } else {
    throw std::invalid_argument("unknown convergence target: " + target);
  }

  for (size_t i = 0; i < vals.size(); ++i) {
    std::string diff = i ? fmt(vals[i] - vals[i - 1]) : "";
    std::string order, ok;
    if (i >= 2) {
      double e1 = std::abs(vals[i - 1] - vals[i - 2]);
      double e2 = std::abs(vals[i] - vals[i - 1]);
      if (spectral) {
        double ratio = e1 / std::max(e2, 1e-300);
        order = fmt(ratio);
        ok = ratio > 10.0 ? "1" : "0";  // super-algebraic contraction
      } else {
        double p = std::log2(e1 / std::max(e2, 1e-300));
        order = fmt(p);
        ok = (p >= 1.7) ? "1" : "0";
      }
    }
    csv.rows.push_back({labels[i], fmt(vals[i]), diff, order, ok});
  }
  auto dir = app.prepare_out();
  csv.write(dir / "convergence.csv");
  write_echo(dir, app.echo);
  return 0;
}

int cmd_agmon_check(App& app, const std::string& domain, int ncurve, const std::string& hbar_list,
                    double epsilon, double rho, int n) {
  auto dom = load_domain(domain, ncurve);
  auto hbars = parse_sweep(hbar_list);
  double omega = std::sqrt(std::max(-dom.profile->max_info.kappa_pp, 1e-12) / 2.0);
  Csv csv;
  csv.header = {"hbar", "lambda1", "ratio", "tail_mass", "n"};
  for (double hb : hbars) {
    int ng = n > 0 ? n : std::max(2048, (int)std::ceil(2.0 * dom.profile->L /
                                                       (std::sqrt(hb / omega) / 15.0)));
    auto r = dirichlet_fluxfree(*dom.profile, hb, ng, 1, true);
    auto chk = agmon_weight_check(*dom.profile, r.real_vectors[0], r.eigenvalues[0], hb, epsilon,
                                  rho);
    csv.rows.push_back({fmt(hb), fmt(r.eigenvalues[0]), fmt(chk.ratio), fmt(chk.tail_mass),
                        std::to_string(ng)});
  }
  auto dir = app.prepare_out();
  csv.write(dir / "agmon.csv");
  write_echo(dir, app.echo);
  return 0;
}

json scan_config(int argc, const char* const* argv) {
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") {
      std::ifstream in(argv[i + 1]);
      if (!in) throw std::invalid_argument(std::string("cannot read config ") + argv[i + 1]);
      json j;
      in >> j;
      return j;
    }
  return json::object();
}

template <typename T>
void from_config(const json& cfg, const char* key, T& value) {
  if (cfg.contains(key)) value = cfg.at(key).get<T>();
}

}  // namespace

int run(int argc, const char* const* argv) {
  try {
    json cfg = scan_config(argc, argv);

    CLI::App cli{"Boundary spectral toolkit for strong-coupling Robin problems with magnetic flux"};
    cli.require_subcommand(0, 1);
    cli.set_help_flag("--help", "print help");  // --h is a parameter name here
    auto sub = [&cli](const char* name, const char* desc) {
      auto* sc = cli.add_subcommand(name, desc);
      sc->set_help_flag("--help", "print help");
      sc->fallthrough();  // --out/--threads/--config may follow the subcommand
      return sc;
    };
    std::string config_path;
    cli.add_option("--config", config_path, "JSON config file; flags override its fields");

    App app;
    from_config(cfg, "out", app.out_dir);
    from_config(cfg, "threads", app.threads);
    cli.add_option("--out", app.out_dir, "output directory")->capture_default_str();
    cli.add_option("--threads", app.threads, "worker pool bound (0: ROBIN_SPECTRA_THREADS or cores)")
        ->capture_default_str();

    // shared option state, filled by config first, flags second
    std::string domain = "circle:1";
    int ncurve = 512;
    double h = 0.0, gamma = 0.0, b = 0.0, beta0 = 0.0, rho = 0.2, c = 1.0, alpha = 0.5, eta = 0.0;
    double T = 20.0, kappa = 1.0, epsilon = 0.5;
    int M = 0, k = 4, nr = 1024, ns = 32, ntau = 32, n = 0, base_n = 512;
    std::string variant = "semiclassical", h_sweep, b_list, h_list, gamma_sweep = "-10:-100:5",
                n_list = "1,2,3", op = "h00", target = "h00", hbar_list = "1e-1,1e-2";
    bool sandwich = false;
    from_config(cfg, "domain", domain);
    from_config(cfg, "ncurve", ncurve);
    from_config(cfg, "h", h);
    from_config(cfg, "gamma", gamma);
    from_config(cfg, "b", b);
    from_config(cfg, "beta0", beta0);
    from_config(cfg, "rho", rho);
    from_config(cfg, "c", c);
    from_config(cfg, "alpha", alpha);
    from_config(cfg, "eta", eta);
    from_config(cfg, "T", T);
    from_config(cfg, "kappa", kappa);
    from_config(cfg, "epsilon", epsilon);
    from_config(cfg, "M", M);
    from_config(cfg, "k", k);
    from_config(cfg, "nr", nr);
    from_config(cfg, "ns", ns);
    from_config(cfg, "ntau", ntau);
    from_config(cfg, "n", n);
    from_config(cfg, "base-n", base_n);
    from_config(cfg, "variant", variant);
    from_config(cfg, "h-sweep", h_sweep);
    from_config(cfg, "B", b_list);
    from_config(cfg, "h-list", h_list);
    from_config(cfg, "gamma-sweep", gamma_sweep);
    from_config(cfg, "levels", n_list);
    from_config(cfg, "op", op);
    from_config(cfg, "target", target);
    from_config(cfg, "hbar-sweep", hbar_list);
    from_config(cfg, "sandwich", sandwich);

    auto add_domain = [&](CLI::App* sc) {
      sc->add_option("--domain", domain, "circle:R, ellipse:a:b, or csv:path")
          ->capture_default_str();
      sc->add_option("--n-curve", ncurve, "boundary samples")->capture_default_str();
    };

    auto* se = sub("solve-effective", "periodic effective boundary operator");
    add_domain(se);
    se->add_option("--h", h, "semiclassical parameter");
    se->add_option("--gamma", gamma, "Robin parameter (negative), h = gamma^-2");
    se->add_option("--b", b, "field intensity")->capture_default_str();
    se->add_option("--beta0", beta0, "flux constant override");
    se->add_option("--variant", variant, "semiclassical|gamma|full|bracket+|bracket-|disc")
        ->capture_default_str();
    se->add_option("--c", c, "bracket constant")->capture_default_str();
    se->add_option("--alpha", alpha, "bracket exponent")->capture_default_str();
    se->add_option("--M", M, "Fourier cutoff (0: automatic)")->capture_default_str();
    se->add_option("--k", k, "eigenvalue count")->capture_default_str();
    se->add_option("--h-sweep", h_sweep, "lo:hi:npts geometric sweep");

    auto* de = sub("disc-effective", "closed-form disc spectrum vs solver");
    de->add_option("--h", h, "semiclassical parameter");
    de->add_option("--gamma", gamma, "Robin parameter");
    de->add_option("--b", b, "field intensity")->capture_default_str();
    de->add_option("--k", k, "eigenvalue count")->capture_default_str();

    auto* sd = sub("solve-disc", "radial 2D solver on the unit disc");
    sd->add_option("--h", h, "semiclassical parameter");
    sd->add_option("--gamma", gamma, "Robin parameter");
    sd->add_option("--b", b, "field intensity")->capture_default_str();
    sd->add_option("--n-r", nr, "radial grid points")->capture_default_str();

    auto* st = sub("solve-tubular", "boundary-layer operator on the strip");
    add_domain(st);
    st->add_option("--h", h, "semiclassical parameter");
    st->add_option("--b", b, "field intensity")->capture_default_str();
    st->add_option("--rho", rho, "strip exponent")->capture_default_str();
    st->add_option("--beta0", beta0, "flux constant override");
    st->add_option("--n-s", ns, "tangential grid")->capture_default_str();
    st->add_option("--n-tau", ntau, "transverse grid")->capture_default_str();
    st->add_option("--k", k, "eigenvalue count")->capture_default_str();
    st->add_flag("--sandwich", sandwich, "emit the bracket comparison report");
    st->add_option("--c", c, "bracket constant")->capture_default_str();
    st->add_option("--alpha", alpha, "bracket exponent")->capture_default_str();
    st->add_option("--eta", eta, "field-strength bookkeeping exponent")->capture_default_str();

    auto* m1 = sub("model1d", "half-line and transverse 1D models");
    m1->add_option("--op", op, "h00|hbt|transverse|bo")->capture_default_str();
    m1->add_option("--T", T, "truncation length")->capture_default_str();
    m1->add_option("--n", n, "grid points (0: automatic)")->capture_default_str();
    m1->add_option("--B", b_list, "weight slopes, comma list or lo:hi:npts");
    m1->add_option("--kappa", kappa, "frozen curvature value")->capture_default_str();
    m1->add_option("--h-list", h_list, "h values, comma list or sweep");
    m1->add_option("--rho", rho, "strip exponent")->capture_default_str();
    add_domain(m1);
    m1->add_option("--n-s", ns, "s stations for the adiabatic correction")->capture_default_str();

    auto* ex = sub("expansion-table", "computed vs three-term expansion");
    add_domain(ex);
    ex->add_option("--gamma-sweep", gamma_sweep, "g1:g2:npts (negative)")->capture_default_str();
    ex->add_option("--n", n_list, "eigenvalue labels, comma list")->capture_default_str();
    ex->add_option("--b", b, "field intensity")->capture_default_str();

    auto* cv = sub("convergence", "grid refinement study");
    cv->add_option("--target", target, "h00|effective-fd|effective-fourier|tubular|disc-radial")
        ->capture_default_str();
    add_domain(cv);
    cv->add_option("--base-n", base_n, "coarsest grid")->capture_default_str();
    cv->add_option("--h", h, "semiclassical parameter");
    cv->add_option("--b", b, "field intensity")->capture_default_str();
    cv->add_option("--rho", rho, "strip exponent")->capture_default_str();
    cv->add_option("--T", T, "half-line truncation")->capture_default_str();

    auto* ag = sub("agmon-check", "weighted-norm localization check");
    add_domain(ag);
    ag->add_option("--hbar-sweep", hbar_list, "hbar values")->capture_default_str();
    ag->add_option("--epsilon", epsilon, "weight exponent in (0,1)")->capture_default_str();
    ag->add_option("--rho", rho, "tail exponent")->capture_default_str();
    ag->add_option("--n", n, "grid points (0: automatic)")->capture_default_str();

    try {
      cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      int code = cli.exit(e);
      return code == 0 ? 0 : 2;
    }

    // materialized configuration for the echo file
    app.echo["out"] = app.out_dir;
    app.echo["threads"] = app.threads;
    app.echo["domain"] = domain;
    app.echo["ncurve"] = ncurve;
    app.echo["h"] = h;
    app.echo["gamma"] = gamma;
    app.echo["b"] = b;
    app.echo["beta0"] = beta0;
    app.echo["rho"] = rho;
    app.echo["c"] = c;
    app.echo["alpha"] = alpha;
    app.echo["eta"] = eta;
    app.echo["T"] = T;
    app.echo["kappa"] = kappa;
    app.echo["epsilon"] = epsilon;
    app.echo["M"] = M;
    app.echo["k"] = k;
    app.echo["nr"] = nr;
    app.echo["ns"] = ns;
    app.echo["ntau"] = ntau;
    app.echo["n"] = n;
    app.echo["base-n"] = base_n;
    app.echo["variant"] = variant;
    app.echo["op"] = op;
    app.echo["target"] = target;

    if (se->parsed())
      return cmd_solve_effective(app, domain, ncurve, h, gamma, b, beta0, variant, c, alpha, M, k,
                                 h_sweep);
    if (de->parsed()) return cmd_disc_effective(app, h, gamma, b, k);
    if (sd->parsed()) return cmd_solve_disc(app, h, gamma, b, nr);
    if (st->parsed())
      return cmd_solve_tubular(app, domain, ncurve, h, b, rho, beta0, ns, ntau, k, sandwich, c,
                               alpha, eta);
    if (m1->parsed())
      return cmd_model1d(app, op, T, n, b_list, kappa, h_list, rho, domain, ncurve, ns);
    if (ex->parsed()) return cmd_expansion_table(app, domain, ncurve, gamma_sweep, n_list, b);
    if (cv->parsed()) return cmd_convergence(app, target, domain, ncurve, base_n, h, b, rho, T);
    if (ag->parsed()) return cmd_agmon_check(app, domain, ncurve, hbar_list, epsilon, rho, n);

    std::printf("%s\n", cli.help().c_str());
    return 0;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return 3;
  }
}

}  // namespace robin::cli
