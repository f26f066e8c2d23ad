#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "robin/asymptotics.hpp"
#include "robin/disc.hpp"
#include "robin/effective.hpp"
#include "robin/model1d.hpp"
#include "robin/tubular2d.hpp"

namespace py = pybind11;
using namespace robin;

namespace {

struct PyProfile {
  std::shared_ptr<const CurvatureProfile> profile;
  DomainMetrics metrics;
};

PyProfile make_profile(const std::string& domain, int n) {
  BoundaryCurve curve = (domain.size() > 4 && domain.substr(domain.size() - 4) == ".csv")
                            ? BoundaryCurve::from_csv(domain)
                            : BoundaryCurve::from_preset(domain);
  auto [prof, m] = arc_length_reparametrize(curve, n);
  return {std::make_shared<const CurvatureProfile>(std::move(prof)), m};
}

EffectiveVariant variant_from(const std::string& v, int* sign) {
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

}  // namespace

PYBIND11_MODULE(robin_spectra, m) {
  m.doc() = "Boundary spectral toolkit: strong-coupling Robin problems with magnetic flux";

  py::class_<PyProfile>(m, "Profile")
      .def_property_readonly("L", [](const PyProfile& p) { return p.profile->L; })
      .def_property_readonly("perimeter", [](const PyProfile& p) { return p.metrics.perimeter; })
      .def_property_readonly("area", [](const PyProfile& p) { return p.metrics.area; })
      .def_property_readonly("beta0", [](const PyProfile& p) { return p.metrics.beta0; })
      .def_property_readonly("kappa_max",
                             [](const PyProfile& p) { return p.profile->max_info.kappa_max; })
      .def_property_readonly("kappa_pp",
                             [](const PyProfile& p) { return p.profile->max_info.kappa_pp; })
      .def_property_readonly("assumption_a",
                             [](const PyProfile& p) { return p.profile->max_info.assumption_a; })
      .def_property_readonly(
          "max_nondegenerate",
          [](const PyProfile& p) { return p.profile->max_info.max_nondegenerate; })
      .def("kappa", [](const PyProfile& p, double s) { return p.profile->kappa(s); })
      .def("agmon_distance",
           [](const PyProfile& p, double s) { return agmon_distance(*p.profile, s); });

  m.def("profile", &make_profile, py::arg("domain"), py::arg("n") = 512,
        "Arc-length curvature profile of 'circle:R', 'ellipse:a:b' or a CSV path");

  m.def(
      "effective_eigenvalues",
      [](const PyProfile& p, double h, double b, const std::string& variant, int k, int M,
         double beta0, double c, double alpha) {
        EffectiveSpec spec;
        spec.profile = p.profile;
        spec.h = h;
        spec.b = b;
        spec.beta0 = beta0 > 0.0 ? beta0 : p.metrics.beta0;
        spec.c = c;
        spec.alpha = alpha;
        spec.variant = variant_from(variant, &spec.bracket_sign);
        return solve_effective(spec, M, k).eigenvalues;
      },
      py::arg("profile"), py::arg("h"), py::arg("b") = 0.0,
      py::arg("variant") = "semiclassical", py::arg("k") = 4, py::arg("M") = 0,
      py::arg("beta0") = 0.0, py::arg("c") = 1.0, py::arg("alpha") = 0.5,
      "Lowest eigenvalues of the periodic effective boundary operator (Fourier basis)");

  m.def(
      "effective_eigenvalues_fd",
      [](const PyProfile& p, double h, double b, const std::string& variant, int k, int n,
         double beta0) {
        EffectiveSpec spec;
        spec.profile = p.profile;
        spec.h = h;
        spec.b = b;
        spec.beta0 = beta0 > 0.0 ? beta0 : p.metrics.beta0;
        spec.variant = variant_from(variant, &spec.bracket_sign);
        return solve_effective_fd(spec, n, k).eigenvalues;
      },
      py::arg("profile"), py::arg("h"), py::arg("b") = 0.0,
      py::arg("variant") = "semiclassical", py::arg("k") = 4, py::arg("n") = 2048,
      py::arg("beta0") = 0.0, "Same operator through the gauge-covariant link-phase stencil");

  m.def("disc_effective", &disc_effective_lambda, py::arg("h"), py::arg("b"), py::arg("k") = 4,
        "Closed-form disc spectrum -1 - sqrt(h) - h/2 + h (m - b/2)^2");

  m.def(
      "magnetic_offset",
      [](double b) {
        auto off = magnetic_offset(b);
        return py::make_tuple(off.value, off.m);
      },
      py::arg("b"), "inf_m (m - b/2)^2 and its minimizer");

  m.def(
      "disc_full",
      [](double h, double b, int n_r) {
        DiscParams p = DiscParams::from_h(h);
        p.b = b;
        p.n_r = n_r;
        auto table = solve_disc_full(p);
        py::dict out;
        out["mu1"] = table.mu1;
        out["lambda_min"] = table.lambda_min;
        out["residual"] = table.residual;
        out["argmin_m"] = table.argmin_m;
        return out;
      },
      py::arg("h"), py::arg("b") = 0.0, py::arg("n_r") = 1024,
      "Radial 2D disc solve minimized over angular modes");

  m.def(
      "h00", [](double T, int n) { return solve_H00(T, n, 4, false).eigenvalues; }, py::arg("T"),
      py::arg("n"), "Half-line Robin model, Dirichlet wall at T");

  m.def(
      "hbt",
      [](double B, double T, int n, bool weighted) {
        HalfLineSpec spec;
        spec.B = B;
        spec.T = T;
        spec.n = n > 0 ? n : HalfLineSpec::default_grid(T);
        auto res = weighted ? solve_HBT_weighted(spec, 4, false) : solve_HBT(spec, 4, false);
        return res.eigenvalues;
      },
      py::arg("B"), py::arg("T") = 20.0, py::arg("n") = 0, py::arg("weighted") = false,
      "Weighted half-line model, transformed or generalized route");

  m.def(
      "transverse",
      [](double kappa, double h, double rho) {
        auto res = solve_transverse({kappa, h, rho});
        return py::make_tuple(res.lambda1, res.lambda2);
      },
      py::arg("kappa"), py::arg("h"), py::arg("rho") = 0.2,
      "Two lowest transverse levels at frozen curvature");

  m.def(
      "tubular_eigenvalues",
      [](const PyProfile& p, double h, double b, double rho, int n_s, int n_tau, int k,
         double beta0) {
        TubularSpec spec;
        spec.profile = p.profile;
        spec.h = h;
        spec.b = b;
        spec.rho = rho;
        spec.beta0 = beta0 > 0.0 ? beta0 : p.metrics.beta0;
        spec.n_s = n_s;
        spec.n_tau = n_tau;
        return solve_tubular(spec, k).eigenvalues;
      },
      py::arg("profile"), py::arg("h"), py::arg("b") = 0.0, py::arg("rho") = 0.2,
      py::arg("n_s") = 32, py::arg("n_tau") = 32, py::arg("k") = 2, py::arg("beta0") = 0.0,
      "Boundary-layer operator on the periodic strip");

  m.def(
      "sandwich",
      [](const PyProfile& p, double h, double b, double rho, int n_s, int n_tau, int k, double c,
         double alpha, double eta, double beta0) {
        TubularSpec spec;
        spec.profile = p.profile;
        spec.h = h;
        spec.b = b;
        spec.rho = rho;
        spec.beta0 = beta0 > 0.0 ? beta0 : p.metrics.beta0;
        spec.n_s = n_s;
        spec.n_tau = n_tau;
        spec.force_iterative = true;
        auto rep = sandwich_report(spec, c, alpha, k, eta);
        py::dict out;
        out["ordering_ok"] = rep.ordering_ok;
        out["g"] = rep.g;
        out["fd_estimate"] = rep.fd_estimate;
        out["truncation_estimate"] = rep.truncation_estimate;
        py::list rows;
        for (const auto& row : rep.rows) {
          py::dict r;
          r["index"] = row.index;
          r["lower"] = row.lower;
          r["mu"] = row.mu;
          r["upper"] = row.upper;
          rows.append(r);
        }
        out["rows"] = rows;
        return out;
      },
      py::arg("profile"), py::arg("h"), py::arg("b") = 0.0, py::arg("rho") = 0.2,
      py::arg("n_s") = 32, py::arg("n_tau") = 32, py::arg("k") = 2, py::arg("c") = 1.0,
      py::arg("alpha") = 0.5, py::arg("eta") = 0.0, py::arg("beta0") = 0.0,
      "Bracket comparison of the strip operator against the effective pair");

  m.def(
      "dirichlet_fluxfree_eigenvalues",
      [](const PyProfile& p, double hbar, int n, int k) {
        return dirichlet_fluxfree(*p.profile, hbar, n, k).eigenvalues;
      },
      py::arg("profile"), py::arg("hbar"), py::arg("n") = 4096, py::arg("k") = 4,
      "Flux-free Dirichlet operator -hbar^2 dds + kappa_max - kappa");

  m.def("expansion_two_term", &expansion_two_term, py::arg("gamma"), py::arg("kappa_max"));
  m.def("expansion_three_term", &expansion_three_term, py::arg("gamma"), py::arg("n"),
        py::arg("kappa_max"), py::arg("kappa_pp"));
  m.def("harmonic_eigenvalue", &harmonic_eigenvalue, py::arg("n"), py::arg("kappa_pp"));
  m.def(
      "disc_expansion",
      [](double h, double b) {
        auto e = disc_expansion_h(h, b);
        return py::make_tuple(e.p_form, e.semiclassical);
      },
      py::arg("h"), py::arg("b") = 0.0);
  m.def(
      "hermite_trial",
      [](const PyProfile& p, int n, double hbar) {
        auto rep = hermite_trial_residual(*p.profile, n, hbar);
        return py::make_tuple(rep.residual, rep.norm, rep.level);
      },
      py::arg("profile"), py::arg("n"), py::arg("hbar"));
}
