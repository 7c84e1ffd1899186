#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "htvseg/cluster.hpp"
#include "htvseg/degrade.hpp"
#include "htvseg/grid.hpp"
#include "htvseg/image_io.hpp"
#include "htvseg/metrics.hpp"
#include "htvseg/phantom.hpp"
#include "htvseg/pipeline.hpp"
#include "htvseg/restore.hpp"
#include "htvseg/weight.hpp"

namespace py = pybind11;
using namespace htvseg;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;
using IntArray = py::array_t<int, py::array::c_style | py::array::forcecast>;

ScalarField to_field(const Array& a) {
  if (a.ndim() != 2) throw std::invalid_argument("expected a 2-D array");
  const auto m = static_cast<int>(a.shape(0)), n = static_cast<int>(a.shape(1));
  return ScalarField(m, n, std::vector<double>(a.data(), a.data() + a.size()));
}

py::array_t<double> to_array(const ScalarField& f) {
  py::array_t<double> out({f.rows(), f.cols()});
  std::copy(f.values().begin(), f.values().end(), out.mutable_data());
  return out;
}

template <std::size_t C>
py::array_t<double> to_array(const VecField<C>& p) {
  py::array_t<double> out({static_cast<py::ssize_t>(C), static_cast<py::ssize_t>(p.rows()),
                           static_cast<py::ssize_t>(p.cols())});
  double* dst = out.mutable_data();
  for (const auto& c : p.comp) dst = std::copy(c.values().begin(), c.values().end(), dst);
  return out;
}

template <std::size_t C>
VecField<C> to_vec(const Array& a) {
  if (a.ndim() != 3 || a.shape(0) != static_cast<py::ssize_t>(C))
    throw std::invalid_argument("expected an array of shape (" + std::to_string(C) + ", rows, cols)");
  const auto m = static_cast<int>(a.shape(1)), n = static_cast<int>(a.shape(2));
  VecField<C> p;
  const std::size_t plane = static_cast<std::size_t>(m) * n;
  for (std::size_t c = 0; c < C; ++c)
    p.comp[c] = ScalarField(m, n, std::vector<double>(a.data() + c * plane, a.data() + (c + 1) * plane));
  return p;
}

cluster::LabelMap to_labels(const IntArray& a) {
  if (a.ndim() != 2) throw std::invalid_argument("expected a 2-D label array");
  return {static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)), std::vector<int>(a.data(), a.data() + a.size())};
}

py::array_t<int> to_array(const cluster::LabelMap& l) {
  py::array_t<int> out({l.rows, l.cols});
  std::copy(l.labels.begin(), l.labels.end(), out.mutable_data());
  return out;
}

py::array_t<double> kernel_array(const BlurKernel& k) {
  py::array_t<double> out({k.rows(), k.cols()});
  std::copy(k.taps().begin(), k.taps().end(), out.mutable_data());
  return out;
}

pipeline::PipelineConfig make_config(const py::dict& options) {
  pipeline::PipelineConfig c;
  for (const auto& [k, v] : options) {
    std::string key = py::str(k);
    std::replace(key.begin(), key.end(), '_', '-');
    std::string value;
    if (py::isinstance<py::bool_>(v))
      value = v.cast<bool>() ? "true" : "false";
    else if (py::isinstance<py::list>(v) || py::isinstance<py::tuple>(v)) {
      for (const auto& x : v) value += (value.empty() ? "" : ",") + std::string(py::str(py::repr(x)));
    } else if (py::isinstance<py::float_>(v))
      value = py::str(py::repr(v));
    else
      value = py::str(v);
    c.set(key, value);
  }
  return c;
}

py::dict history_dict(const restore::ConvergenceReport& r) {
  const auto n = static_cast<py::ssize_t>(r.history.size());
  py::array_t<double> rq(n), rv(n), rz(n), ib(n), ic(n), id(n), obj(n);
  for (py::ssize_t k = 0; k < n; ++k) {
    const auto& h = r.history[k];
    rq.mutable_data()[k] = h.residual_q;
    rv.mutable_data()[k] = h.residual_v;
    rz.mutable_data()[k] = h.residual_z;
    ib.mutable_data()[k] = h.increment_b;
    ic.mutable_data()[k] = h.increment_c;
    id.mutable_data()[k] = h.increment_d;
    obj.mutable_data()[k] = h.objective;
  }
  py::dict d;
  d["residual_q"] = rq;
  d["residual_v"] = rv;
  d["residual_z"] = rz;
  d["increment_b"] = ib;
  d["increment_c"] = ic;
  d["increment_d"] = id;
  d["objective"] = obj;
  return d;
}

}  // namespace

PYBIND11_MODULE(_htvseg, m) {
  m.doc() = "Hybrid-TV restoration and K-means thresholding segmentation";

  py::register_exception<restore::DivergenceError>(m, "DivergenceError", PyExc_RuntimeError);
  py::register_exception<io::FormatError>(m, "FormatError", PyExc_ValueError);

  m.def("grad", [](const Array& u) { return to_array(grid::grad(to_field(u))); });
  m.def("grad2", [](const Array& u) { return to_array(grid::grad2(to_field(u))); });
  m.def("div", [](const Array& p) { return to_array(grid::div(to_vec<2>(p))); });
  m.def("div2", [](const Array& p) { return to_array(grid::div2(to_vec<4>(p))); });

  m.def("gaussian_kernel", [](int s, double sigma) { return kernel_array(gaussian_kernel(s, sigma)); },
        py::arg("size"), py::arg("sigma"));
  m.def("motion_kernel", [](double length, double theta) { return kernel_array(motion_kernel(length, theta)); },
        py::arg("length"), py::arg("theta"));
  m.def(
      "blur",
      [](const Array& g, const std::string& spec) {
        const auto f = to_field(g);
        return to_array(pipeline::DegradeSpec::parse(spec).make_operator(f.rows(), f.cols()).apply(f));
      },
      py::arg("image"), py::arg("spec"), "Apply 'none', 'gaussian:<size>:<sigma>' or 'motion:<length>:<theta>'.");
  m.def(
      "add_noise",
      [](const Array& g, double variance, std::uint64_t seed) {
        return to_array(add_gaussian_noise(to_field(g), variance, seed));
      },
      py::arg("image"), py::arg("variance"), py::arg("seed") = 0);
  m.def(
      "edge_indicator",
      [](const Array& f, double sigma, double varsigma) {
        return to_array(edge_indicator(to_field(f), sigma, varsigma).omega);
      },
      py::arg("image"), py::arg("sigma") = 1.0, py::arg("varsigma") = 10.0);

  m.def(
      "restore",
      [](const Array& image, const std::string& degrade, double lambda, double gamma, double mu1, double mu2,
         double mu3, double iota, double eps, int max_iter, bool constrained, const std::string& stop_rule,
         double weight_sigma, double weight_varsigma) {
        const auto f = to_field(image);
        restore::SolverParams p;
        p.lambda = lambda;
        p.gamma = gamma;
        p.mu1 = mu1;
        p.mu2 = mu2;
        p.mu3 = mu3;
        p.iota = iota;
        p.epsilon = eps;
        p.max_iter = max_iter;
        p.constrained = constrained;
        p.stop_rule = restore::parse_stop_rule(stop_rule);
        const auto A = pipeline::DegradeSpec::parse(degrade).make_operator(f.rows(), f.cols());
        const auto w = edge_indicator(f, weight_sigma, weight_varsigma);
        restore::RestoreResult r;
        {
          py::gil_scoped_release release;
          r = restore::run(f, A, p, w);
        }
        py::dict d;
        d["restored"] = to_array(r.restored);
        d["g"] = to_array(r.state.g);
        d["iterations"] = r.report.iterations();
        d["termination"] = restore::to_string(r.report.reason);
        d["warnings"] = r.report.warnings;
        d["history"] = history_dict(r.report);
        return d;
      },
      py::arg("image"), py::arg("degrade") = "none", py::arg("lam") = 0.1, py::arg("gamma") = 1.95,
      py::arg("mu1") = 10.0, py::arg("mu2") = 100.0, py::arg("mu3") = 10.0, py::arg("iota") = 1.0,
      py::arg("eps") = 1e-6, py::arg("max_iter") = 1000, py::arg("constrained") = true,
      py::arg("stop_rule") = "all", py::arg("weight_sigma") = 1.0, py::arg("weight_varsigma") = 10.0);

  m.def("stretch", [](const Array& g) { return to_array(cluster::stretch(to_field(g))); });
  m.def(
      "kmeans_1d",
      [](const Array& values, int K, int restarts, std::uint64_t seed) {
        const auto v = values.cast<py::array_t<double, py::array::c_style>>();
        const auto r = cluster::kmeans_1d(std::span<const double>(v.data(), v.size()), K, restarts, seed);
        py::dict d;
        d["centers"] = r.centers;
        d["wcss"] = r.wcss;
        d["best_restart"] = r.best_restart;
        d["restart_wcss"] = r.restart_wcss;
        return d;
      },
      py::arg("values"), py::arg("k"), py::arg("restarts") = 10, py::arg("seed") = 0);
  m.def(
      "label",
      [](const Array& g, const std::vector<double>& centers) {
        const auto p = cluster::label(to_field(g), centers);
        py::dict d;
        d["labels"] = to_array(p.labels);
        d["thresholds"] = p.thresholds;
        d["means"] = p.means;
        d["reconstruction"] = to_array(cluster::piecewise_constant(p));
        return d;
      },
      py::arg("stretched"), py::arg("centers"));
  m.def(
      "sa",
      [](const IntArray& pred, const IntArray& truth, int phases, bool match) {
        return metrics::sa(to_labels(pred), metrics::GroundTruth{to_labels(truth), phases}, match);
      },
      py::arg("pred"), py::arg("truth"), py::arg("phases"), py::arg("match_permutations") = false);

  m.def(
      "phantom",
      [](const std::string& shape, int rows, int cols, const std::vector<double>& contrast, double feature_size) {
        const auto ph = shape == "three"
                            ? phantom::make_three_phase(rows, cols, contrast.at(0), contrast.at(1), contrast.at(2),
                                                        feature_size)
                            : phantom::make_two_phase(rows, cols, phantom::parse_shape(shape), contrast.at(0),
                                                      contrast.at(1), feature_size);
        return py::make_tuple(to_array(ph.image), to_array(ph.truth.labels));
      },
      py::arg("shape") = "disk", py::arg("rows") = 128, py::arg("cols") = 128,
      py::arg("contrast") = std::vector<double>{0.2, 0.8}, py::arg("feature_size") = -1.0,
      "Returns (image, labels).");

  m.def("load_image", [](const std::string& path) { return to_array(io::load_image(path)); });
  m.def(
      "save_pgm", [](const Array& f, const std::string& path, int bits) { io::save_pgm(to_field(f), path, bits); },
      py::arg("image"), py::arg("path"), py::arg("bits") = 8);
  m.def("save_raw", [](const Array& f, const std::string& path) { io::save_raw(to_field(f), path); });
  m.def("load_labels", [](const std::string& path) { return to_array(io::load_labels(path)); });

  m.def("config_keys", &pipeline::config_keys);
  m.def(
      "run_pipeline",
      [](const py::dict& options) {
        const auto c = make_config(options);
        pipeline::RunReport r;
        {
          py::gil_scoped_release release;
          r = pipeline::run_pipeline(c);
        }
        py::dict d;
        d["report"] = pipeline::report_json(r);
        d["degraded"] = to_array(r.degraded);
        d["restored"] = to_array(r.restored);
        d["stretched"] = to_array(r.stretched);
        d["labels"] = to_array(r.labeling.labels);
        d["reconstruction"] = to_array(r.reconstruction);
        d["sa"] = r.sa ? py::cast(*r.sa) : py::none();
        d["iterations"] = r.iterations;
        return d;
      },
      py::arg("options") = py::dict(),
      "Runs the full pipeline. Keys are the CLI flag names with '-' or '_'.");
}
