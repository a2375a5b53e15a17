#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "maxstable/config.hpp"
#include "maxstable/dehaan.hpp"
#include "maxstable/estimators.hpp"
#include "maxstable/runner.hpp"
#include "maxstable/spectral.hpp"
#include "maxstable/variogram.hpp"
#include "maxstable/verify.hpp"

namespace py = pybind11;
using namespace maxstable;

namespace {

struct Model {
  ModelRef ref;
};

Window to_window(const std::string& s) { return parse_window(s); }

LatticePoint to_point(const std::vector<std::int64_t>& c) {
  return LatticePoint(std::span<const std::int64_t>(c));
}

std::vector<LatticePoint> to_points(const std::vector<std::vector<std::int64_t>>& pts) {
  std::vector<LatticePoint> out;
  for (const auto& p : pts) out.push_back(to_point(p));
  return out;
}

py::dict to_dict(const EstimateReport& r) {
  py::dict d;
  d["method"] = r.method;
  d["estimate"] = r.estimate;
  d["stderr"] = r.std_error;
  d["replicates"] = r.replicates;
  d["window"] = r.window.dim() ? format_window(r.window) : std::string();
  d["diagnostics"] = r.diagnostics;
  d["warnings"] = r.warnings;
  return d;
}

py::list to_list(const std::vector<EstimateReport>& rs) {
  py::list l;
  for (const auto& r : rs) l.append(to_dict(r));
  return l;
}

py::dict identity_dict(const IdentityReport& r) {
  py::dict d;
  d["name"] = r.name;
  d["lhs"] = to_dict(r.lhs);
  d["rhs"] = to_dict(r.rhs);
  d["z_score"] = r.z_score;
  d["allowance"] = r.allowance;
  d["pass"] = r.pass;
  return d;
}

py::array_t<double> to_array(const FieldSample& f) {
  std::vector<py::ssize_t> shape;
  for (int j = 0; j < f.window().dim(); ++j) shape.push_back(f.window().extent(j));
  py::array_t<double> a(shape);
  auto v = f.values();
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

AnchorMap anchor_map(const std::string& kind, const std::string& order) {
  AnchorMap m;
  m.kind = parse_anchor_kind(kind);
  if (order == "lexicographic") {
    m.order = LatticeOrder::lexicographic;
  } else if (order == "reversed_lexicographic") {
    m.order = LatticeOrder::reversed_lexicographic;
  } else {
    throw UsageError("unknown order '" + order + "'");
  }
  return m;
}

BlockOptions::Mode block_mode(const std::string& s) {
  if (s == "identity") return BlockOptions::Mode::identity;
  if (s == "raw") return BlockOptions::Mode::raw;
  if (s == "calibrated") return BlockOptions::Mode::calibrated;
  throw UsageError("unknown block mode '" + s + "'");
}

IdentityKind identity_kind(const std::string& s) {
  if (s == "tsf_Z") return IdentityKind::tsf_Z;
  if (s == "tsf_theta") return IdentityKind::tsf_theta;
  if (s == "tilt") return IdentityKind::tilt;
  throw UsageError("unknown identity '" + s + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Max-stable random fields on the lattice: samplers, extremal index estimators and identity checks";

  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
  py::register_exception<ModelError>(m, "ModelError", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<Model>(m, "Model")
      .def_property_readonly("name", [](const Model& x) { return model_name(*x.ref); })
      .def_property_readonly("dim", [](const Model& x) { return model_dim(*x.ref); })
      .def_property_readonly("alpha", [](const Model& x) { return model_alpha(*x.ref); })
      .def("__repr__", [](const Model& x) { return "<Model " + model_name(*x.ref) + ">"; });

  m.def(
      "brown_resnick",
      [](double scale, double exponent, int dim, double alpha) {
        return Model{brown_resnick(Variogram::power(dim, scale, exponent), alpha)};
      },
      py::arg("scale") = 1.0, py::arg("exponent") = 1.0, py::arg("dim") = 1, py::arg("alpha") = 1.0);
  m.def(
      "sequence", [](const std::vector<double>& c, double alpha) { return Model{sequence_model_1d(c, alpha)}; },
      py::arg("coeffs"), py::arg("alpha") = 1.0);
  m.def(
      "independent", [](int dim, double alpha) { return Model{independent_model(dim, alpha)}; },
      py::arg("dim") = 1, py::arg("alpha") = 1.0);
  m.def(
      "alternating", [](double alpha) { return Model{alternating_model(alpha)}; }, py::arg("alpha") = 1.0);
  m.def("product", [](const Model& a, const Model& b) { return Model{product_model(a.ref, b.ref)}; });
  m.def("mixture", [](double p, const Model& a, const Model& b) { return Model{mixture_model(p, a.ref, b.ref)}; });

  m.def(
      "sample_theta",
      [](const Model& x, const std::string& w, std::uint64_t seed) {
        Engine eng = RngStream(seed).engine();
        return to_array(sample_theta(*x.ref, to_window(w), eng));
      },
      py::arg("model"), py::arg("window"), py::arg("seed"));
  m.def(
      "sample_y",
      [](const Model& x, const std::string& w, std::uint64_t seed) {
        Engine eng = RngStream(seed).engine();
        return to_array(sample_Y(*x.ref, to_window(w), eng));
      },
      py::arg("model"), py::arg("window"), py::arg("seed"));
  m.def(
      "simulate",
      [](const Model& x, const std::string& w, std::uint64_t seed) {
        Engine eng = RngStream(seed).engine();
        return to_array(simulate_maxstable(*x.ref, to_window(w), SeriesControl{}, eng).field);
      },
      py::arg("model"), py::arg("window"), py::arg("seed"));

  m.def(
      "theta_ratio",
      [](const Model& x, const std::string& w, std::size_t n, std::uint64_t seed) {
        return to_dict(theta_ratio(*x.ref, to_window(w), n, RngStream(seed)));
      },
      py::arg("model"), py::arg("window"), py::arg("replicates"), py::arg("seed"));
  m.def(
      "theta_exceed",
      [](const Model& x, const std::string& w, std::size_t n, std::uint64_t seed) {
        return to_dict(theta_exceed(*x.ref, to_window(w), n, RngStream(seed)));
      },
      py::arg("model"), py::arg("window"), py::arg("replicates"), py::arg("seed"));
  m.def(
      "theta_anchor",
      [](const Model& x, const std::string& w, const std::string& kind, std::size_t n, std::uint64_t seed,
         const std::string& order) {
        return to_dict(theta_anchor(*x.ref, to_window(w), anchor_map(kind, order), n, RngStream(seed)));
      },
      py::arg("model"), py::arg("window"), py::arg("kind"), py::arg("replicates"), py::arg("seed"),
      py::arg("order") = "lexicographic");
  m.def(
      "theta_difference",
      [](const Model& x, const std::string& w, std::size_t n, std::uint64_t seed) {
        return to_dict(theta_difference(*x.ref, to_window(w), n, RngStream(seed)));
      },
      py::arg("model"), py::arg("window"), py::arg("replicates"), py::arg("seed"));
  m.def(
      "theta_pickands",
      [](const Model& x, std::int64_t n, std::size_t reps, std::uint64_t seed) {
        return to_dict(theta_pickands(*x.ref, n, reps, RngStream(seed)));
      },
      py::arg("model"), py::arg("n"), py::arg("replicates"), py::arg("seed"));
  m.def(
      "theta_pickands_sweep",
      [](const Model& x, const std::vector<std::int64_t>& ns, std::size_t reps, std::uint64_t seed) {
        return to_list(theta_pickands_sweep(*x.ref, ns, reps, RngStream(seed)));
      },
      py::arg("model"), py::arg("ns"), py::arg("replicates"), py::arg("seed"));
  m.def(
      "theta_block",
      [](const Model& x, double n, std::int64_t r, double tau, std::size_t reps, std::uint64_t seed,
         const std::string& mode) {
        BlockOptions opt;
        opt.mode = block_mode(mode);
        return to_dict(theta_block(*x.ref, n, r, tau, reps, RngStream(seed), opt));
      },
      py::arg("model"), py::arg("n"), py::arg("r"), py::arg("tau"), py::arg("replicates"), py::arg("seed"),
      py::arg("mode") = "identity");
  m.def(
      "br_lower_bound",
      [](double scale, double exponent, const std::string& w) {
        const auto b = br_lower_bound(Variogram::power(to_window(w).dim(), scale, exponent), to_window(w));
        py::dict d;
        d["value"] = b.value;
        d["support_sum"] = b.support_sum;
        d["tail_bound"] = b.tail_bound;
        d["tail_known"] = b.tail_known;
        d["divergent"] = b.divergent;
        return d;
      },
      py::arg("scale"), py::arg("exponent"), py::arg("window"));
  m.def(
      "anti_clustering_probe",
      [](const Model& x, const std::vector<std::int64_t>& ms, const std::string& w, std::size_t n,
         std::uint64_t seed) { return to_list(anti_clustering_probe(*x.ref, ms, to_window(w), n, RngStream(seed))); },
      py::arg("model"), py::arg("ms"), py::arg("window"), py::arg("replicates"), py::arg("seed"));

  m.def(
      "fidi_neglog",
      [](const Model& x, const std::vector<std::vector<std::int64_t>>& pts, const std::vector<double>& th,
         std::size_t n, std::uint64_t seed) { return to_dict(fidi_neglog(*x.ref, to_points(pts), th, n, RngStream(seed))); },
      py::arg("model"), py::arg("points"), py::arg("thresholds"), py::arg("replicates"), py::arg("seed"));
  m.def(
      "fidi_neglog_anchored",
      [](const Model& x, const std::vector<std::vector<std::int64_t>>& pts, const std::vector<double>& th,
         std::size_t n, std::uint64_t seed) {
        return to_dict(fidi_neglog_anchored(*x.ref, to_points(pts), th, n, RngStream(seed)));
      },
      py::arg("model"), py::arg("points"), py::arg("thresholds"), py::arg("replicates"), py::arg("seed"));
  m.def(
      "y_fidi_cdf",
      [](const Model& x, const std::vector<std::int64_t>& h, const std::vector<std::vector<std::int64_t>>& pts,
         const std::vector<double>& th, std::size_t n, std::uint64_t seed) {
        return to_dict(y_fidi_cdf(*x.ref, to_point(h), to_points(pts), th, n, RngStream(seed)));
      },
      py::arg("model"), py::arg("h"), py::arg("points"), py::arg("thresholds"), py::arg("replicates"),
      py::arg("seed"));

  m.def(
      "identity_suite",
      [](const std::string& kind, const Model& x, std::size_t count, std::size_t n, std::uint64_t seed) {
        py::list l;
        for (const auto& r : identity_suite(identity_kind(kind), *x.ref, count, n, RngStream(seed))) {
          l.append(identity_dict(r));
        }
        return l;
      },
      py::arg("kind"), py::arg("model"), py::arg("count"), py::arg("replicates"), py::arg("seed"));

  m.def(
      "run_config",
      [](const std::string& text, std::map<std::string, std::string> overrides) {
        const auto c = parse_config(text, overrides);
        std::ostringstream out;
        write_json(out, c, run_experiment(c));
        return out.str();
      },
      py::arg("text"), py::arg("overrides") = std::map<std::string, std::string>{});
}
