#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "holokit/boundary.hpp"
#include "holokit/closed_forms.hpp"
#include "holokit/fridman.hpp"
#include "holokit/metrics.hpp"
#include "holokit/scaling.hpp"

namespace py = pybind11;
using namespace holokit;

namespace {

MetricConfig cfgFromKwargs(int N, int M, int iterations, double eta,
                           unsigned seed, bool closedForm) {
    MetricConfig c;
    c.N = N;
    c.M = M;
    c.iterations = iterations;
    c.eta = eta;
    c.seed = seed;
    c.preferClosedForm = closedForm;
    return c;
}

py::dict estimateDict(const MetricEstimate& e) {
    py::dict d;
    d["value"] = e.value;
    d["bound"] = to_string(e.boundKind);
    d["vacuous"] = e.vacuous;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "invariant metrics, boundary rescaling and embedding bounds "
              "for polynomial domains";

    py::register_exception<Error>(m, "HolokitError");

    py::class_<Domain>(m, "Domain")
        .def_static("preset", &presetDomain, py::arg("spec"))
        .def_static("from_json", &domainFromJson, py::arg("text"))
        .def("to_json", &domainToJson)
        .def("validate", &Domain::validate)
        .def_property_readonly("n", [](const Domain& d) { return d.n; })
        .def_property_readonly(
            "domain_class",
            [](const Domain& d) { return to_string(d.classTag); })
        .def_property_readonly(
            "base_point", [](const Domain& d) { return d.basePoint; })
        .def("rho", &evalRho, py::arg("z"))
        .def("boundary_distance", [](const Domain& d, const Point& z) {
            const auto r = boundaryDistance(d, z);
            py::dict out;
            out["distance"] = r.distance;
            out["foot"] = r.foot;
            out["method"] = r.method;
            return out;
        });

    m.def(
        "kobayashi_metric",
        [](const Domain& d, const Point& z, const Point& v, int N, int M,
           int iterations, double eta, unsigned seed, bool closed_form) {
            return estimateDict(kobayashiInfEstimate(
                d, z, v,
                cfgFromKwargs(N, M, iterations, eta, seed, closed_form)));
        },
        py::arg("domain"), py::arg("z"), py::arg("v"), py::arg("N") = 8,
        py::arg("M") = 256, py::arg("iterations") = 2000,
        py::arg("eta") = 0.0, py::arg("seed") = 1,
        py::arg("closed_form") = false);

    m.def(
        "caratheodory_metric",
        [](const Domain& d, const Point& z, const Point& v, int N, int M,
           int iterations, double eta, unsigned seed) {
            return estimateDict(caratheodoryInfLower(
                d, z, v, cfgFromKwargs(N, M, iterations, eta, seed, false)));
        },
        py::arg("domain"), py::arg("z"), py::arg("v"), py::arg("N") = 8,
        py::arg("M") = 256, py::arg("iterations") = 2000,
        py::arg("eta") = 0.0, py::arg("seed") = 1);

    m.def(
        "kobayashi_distance",
        [](const Domain& d, const Point& p, const Point& q, int N, int M,
           int iterations, double eta, unsigned seed, bool closed_form) {
            const auto e = kobayashiDistanceEstimate(
                d, p, q,
                cfgFromKwargs(N, M, iterations, eta, seed, closed_form));
            py::dict out;
            out["value"] = e.value;
            out["bound"] = to_string(e.boundKind);
            return out;
        },
        py::arg("domain"), py::arg("p"), py::arg("q"), py::arg("N") = 8,
        py::arg("M") = 256, py::arg("iterations") = 2000,
        py::arg("eta") = 0.0, py::arg("seed") = 1,
        py::arg("closed_form") = false);

    m.def(
        "closed_form_metric",
        [](const std::string& kind, const Point& z, const Point& v) {
            return closedFormInfMetric(kind, z, v).value;
        },
        py::arg("kind"), py::arg("z"), py::arg("v"));
    m.def(
        "closed_form_distance",
        [](const std::string& kind, const Point& p, const Point& q) {
            return closedFormDistance(kind, p, q).value;
        },
        py::arg("kind"), py::arg("p"), py::arg("q"));

    m.def(
        "scaling_step",
        [](const Domain& d, const Point& p, int j) {
            const bool ft = d.classTag == DomainClass::FiniteType2D;
            ScalingEntry e =
                ft ? catlinScaledDomain(d, p, d.declaredType.value_or(2), j)
                         .entry
                   : spscScaledDomain(d, p, j);
            py::dict out;
            out["j"] = e.j;
            out["center"] = e.center;
            out["image"] = e.image;
            out["scales"] = e.scales;
            out["scaled"] = e.scaled;
            return out;
        },
        py::arg("domain"), py::arg("p"), py::arg("j") = 0);

    m.def(
        "herbort_rho_star",
        [](const Domain& d, const Point& a, const Point& b, int type_bound) {
            const auto r = herbortRhoStar(d, a, b, type_bound);
            py::dict out;
            out["value"] = r.value;
            out["d_pair"] = r.dPair;
            out["d_boundary"] = r.dBoundary;
            out["tangential"] = r.tangential;
            out["bracket_failed"] = r.bracketFailed;
            return out;
        },
        py::arg("domain"), py::arg("a"), py::arg("b"),
        py::arg("type_bound") = 0);

    m.def(
        "sandwich_constants",
        [](const Domain& d, const std::vector<Point>& qs, double R,
           int directions, int N, int iterations, unsigned seed,
           bool closed_form) {
            const auto fit = sandwichConstants(
                d, qs, R, directions,
                cfgFromKwargs(N, 96, iterations, 0.0, seed, closed_form));
            py::dict out;
            out["c1"] = fit.c1;
            out["c2"] = fit.c2;
            out["law"] = fit.law;
            return out;
        },
        py::arg("domain"), py::arg("qs"), py::arg("R") = 1.0,
        py::arg("directions") = 8, py::arg("N") = 4,
        py::arg("iterations") = 60, py::arg("seed") = 1,
        py::arg("closed_form") = false);

    m.def(
        "fridman_zero_cert",
        [](const Domain& d, const Point& p, const std::string& model) {
            const auto zc = fridmanZeroCert(d, p, model);
            py::dict out;
            out["certified"] = zc.certified;
            out["biholomorphism"] = zc.biholomorphism;
            out["reason"] = zc.reason;
            out["exhaustion"] = zc.exhaustion;
            return out;
        },
        py::arg("domain"), py::arg("p"), py::arg("model") = "ball");

    m.def(
        "fridman_boundary_experiment",
        [](const Domain& d, const std::vector<Point>& seq,
           const std::string& model, int N, int iterations, unsigned seed,
           bool closed_form, int extra_directions) {
            const auto rows = fridmanBoundaryExperiment(
                d, seq, model,
                cfgFromKwargs(N, 96, iterations, 0.0, seed, closed_form),
                extra_directions);
            py::list out;
            for (const auto& r : rows) {
                py::dict row;
                row["j"] = r.j;
                row["d"] = r.dj;
                row["best_r"] = r.bestR;
                row["upper"] = r.upper;
                row["candidate"] = r.candidateId;
                row["error"] = r.error;
                out.append(row);
            }
            return out;
        },
        py::arg("domain"), py::arg("seq"), py::arg("model") = "ball",
        py::arg("N") = 4, py::arg("iterations") = 60, py::arg("seed") = 1,
        py::arg("closed_form") = false, py::arg("extra_directions") = 8);

    m.def("fmt17", &fmt17, py::arg("x"),
          "17-significant-digit float rendering used by the reports");
}
