#include <filesystem>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mpt/core/dataset.hpp"
#include "mpt/core/error.hpp"
#include "mpt/core/geometry.hpp"
#include "mpt/core/mot_io.hpp"
#include "mpt/core/records.hpp"
#include "mpt/metrics/metrics.hpp"
#include "mpt/synthgen/synthgen.hpp"
#include "mpt/trackers/assignment.hpp"
#include "mpt/trackers/pipeline.hpp"

namespace py = pybind11;
namespace fs = std::filesystem;

namespace {

mpt::SequenceDir open_sequence(const fs::path& path) {
  mpt::SequenceDir dir;
  dir.path = path;
  dir.meta = mpt::parse_seqinfo(mpt::read_text_file(path / "seqinfo.ini"));
  return dir;
}

py::dict summary_dict(const mpt::metrics::Summary& s) {
  py::dict d;
  d["mota"] = s.mota;
  d["idf1"] = s.idf1;
  d["fp"] = s.fp;
  d["fn"] = s.fn;
  d["idsw"] = s.idsw;
  d["gt_total"] = s.gt_total;
  d["idtp"] = s.idtp;
  d["idfp"] = s.idfp;
  d["idfn"] = s.idfn;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bindings for the mpt tracking benchmark library";

  auto error = py::register_exception<mpt::Error>(m, "Error", PyExc_RuntimeError);
  // Subclasses are registered after the base so the most derived translator wins.
  py::register_exception<mpt::ParseError>(m, "ParseError", error.ptr());
  py::register_exception<mpt::ValidationError>(m, "ValidationError", error.ptr());
  py::register_exception<mpt::GenerationError>(m, "GenerationError", error.ptr());
  py::register_exception<mpt::ShapeError>(m, "ShapeError", error.ptr());
  py::register_exception<mpt::IoError>(m, "IoError", error.ptr());

  py::class_<mpt::BoundingBox>(m, "BoundingBox")
      .def(py::init<double, double, double, double>(), py::arg("x"), py::arg("y"), py::arg("w"), py::arg("h"))
      .def_static("from_corners", &mpt::BoundingBox::from_corners)
      .def_static("from_center", &mpt::BoundingBox::from_center)
      .def_property_readonly("x", &mpt::BoundingBox::x)
      .def_property_readonly("y", &mpt::BoundingBox::y)
      .def_property_readonly("w", &mpt::BoundingBox::w)
      .def_property_readonly("h", &mpt::BoundingBox::h)
      .def_property_readonly("area", &mpt::BoundingBox::area)
      .def("__eq__", [](const mpt::BoundingBox& a, const mpt::BoundingBox& b) { return a == b; })
      .def("__repr__", [](const mpt::BoundingBox& b) {
        return "BoundingBox(" + mpt::format_real(b.x()) + ", " + mpt::format_real(b.y()) + ", " +
               mpt::format_real(b.w()) + ", " + mpt::format_real(b.h()) + ")";
      });
  m.def("iou", &mpt::iou, py::arg("a"), py::arg("b"));

  py::class_<mpt::GtRecord>(m, "GtRecord")
      .def(py::init([](int frame, int id, const mpt::BoundingBox& box, double conf, int class_id, double visibility) {
             return mpt::GtRecord{frame, id, box, conf, class_id, visibility};
           }),
           py::arg("frame"), py::arg("id"), py::arg("box"), py::arg("conf") = 1.0, py::arg("class_id") = 0,
           py::arg("visibility") = 1.0)
      .def_readwrite("frame", &mpt::GtRecord::frame)
      .def_readwrite("id", &mpt::GtRecord::id)
      .def_readwrite("box", &mpt::GtRecord::box)
      .def_readwrite("conf", &mpt::GtRecord::conf)
      .def_readwrite("class_id", &mpt::GtRecord::class_id)
      .def_readwrite("visibility", &mpt::GtRecord::visibility)
      .def("__eq__", [](const mpt::GtRecord& a, const mpt::GtRecord& b) { return a == b; });

  m.def("parse_mot", [](const std::string& text) { return mpt::parse_mot(std::string_view(text)); },
        py::arg("text"));
  m.def("serialize_mot", &mpt::serialize_mot, py::arg("records"));
  m.def("read_mot_file", &mpt::read_mot_file, py::arg("path"));
  m.def("write_mot_file", &mpt::write_mot_file, py::arg("path"), py::arg("records"));

  m.def(
      "hungarian_assign",
      [](const Eigen::MatrixXd& cost, double gate) {
        const auto a = mpt::trackers::hungarian_assign(cost, gate);
        return py::make_tuple(a.pairs, a.unmatched_rows, a.unmatched_cols);
      },
      py::arg("cost"), py::arg("gate") = std::numeric_limits<double>::infinity(),
      "Minimum-cost assignment; returns (pairs, unmatched_rows, unmatched_cols).");

  m.def(
      "compute_clearmot",
      [](const std::vector<mpt::GtRecord>& gt, const std::vector<mpt::GtRecord>& pred) {
        const auto c = mpt::metrics::compute_clearmot(gt, pred);
        py::dict d;
        d["mota"] = c.mota;
        d["fp"] = c.fp;
        d["fn"] = c.fn;
        d["idsw"] = c.idsw;
        d["gt_total"] = c.gt_total;
        d["matches"] = c.matches;
        return d;
      },
      py::arg("gt"), py::arg("pred"));
  m.def(
      "compute_id_scores",
      [](const std::vector<mpt::GtRecord>& gt, const std::vector<mpt::GtRecord>& pred) {
        const auto s = mpt::metrics::compute_id_scores(gt, pred);
        py::dict d;
        d["idf1"] = s.idf1;
        d["idtp"] = s.idtp;
        d["idfp"] = s.idfp;
        d["idfn"] = s.idfn;
        return d;
      },
      py::arg("gt"), py::arg("pred"));

  py::class_<mpt::metrics::Summary>(m, "Summary")
      .def_readonly("mota", &mpt::metrics::Summary::mota)
      .def_readonly("idf1", &mpt::metrics::Summary::idf1)
      .def_readonly("fp", &mpt::metrics::Summary::fp)
      .def_readonly("fn", &mpt::metrics::Summary::fn)
      .def_readonly("idsw", &mpt::metrics::Summary::idsw)
      .def_readonly("gt_total", &mpt::metrics::Summary::gt_total)
      .def("to_dict", &summary_dict);

  py::class_<mpt::metrics::EvalReport>(m, "EvalReport")
      .def_readonly("aggregate", &mpt::metrics::EvalReport::aggregate)
      .def_property_readonly("mota", &mpt::metrics::EvalReport::mota)
      .def_property_readonly("idf1", &mpt::metrics::EvalReport::idf1)
      .def_property_readonly("per_sequence",
                             [](const mpt::metrics::EvalReport& r) {
                               py::dict d;
                               for (const auto& s : r.per_sequence) d[py::str(s.name)] = s.summary;
                               return d;
                             })
      .def_property_readonly("per_background",
                             [](const mpt::metrics::EvalReport& r) {
                               py::dict d;
                               for (const auto& [label, s] : r.per_background) d[py::str(label)] = s;
                               return d;
                             })
      .def("to_json", &mpt::metrics::EvalReport::to_json)
      .def("to_table", &mpt::metrics::EvalReport::to_table);

  m.def("evaluate_dataset", &mpt::metrics::evaluate_dataset, py::arg("dataset_root"), py::arg("results_root"),
        py::arg("split") = "all", py::arg("jobs") = 1, py::call_guard<py::gil_scoped_release>());

  m.def("default_scenario_config", [] { return mpt::synth::ScenarioConfig{}.to_json(); },
        "Default scenario configuration as JSON text.");
  m.def(
      "generate_benchmark",
      [](const std::string& config_json, const fs::path& root, int jobs) {
        const auto config = mpt::synth::ScenarioConfig::from_json(config_json);
        mpt::synth::BenchmarkManifest manifest;
        {
          py::gil_scoped_release release;
          manifest = mpt::synth::generate_benchmark(config, root, jobs);
        }
        return py::make_tuple(manifest.checksum(), manifest.to_csv());
      },
      py::arg("config_json"), py::arg("root"), py::arg("jobs") = 1,
      "Writes the benchmark under root; returns (checksum, manifest_csv).");

  m.def(
      "list_sequences",
      [](const fs::path& root, const std::string& split) {
        std::vector<fs::path> paths;
        for (const auto& s : mpt::list_sequences(root, split)) paths.push_back(s.path);
        return paths;
      },
      py::arg("root"), py::arg("split") = "all");

  m.def("default_pipeline_config", [] { return mpt::trackers::PipelineConfig{}.to_json(); },
        "Default tracking pipeline configuration as JSON text.");
  m.def(
      "track_sequence",
      [](const fs::path& sequence, const std::string& config_json) {
        const auto config = mpt::trackers::PipelineConfig::from_json(config_json);
        py::gil_scoped_release release;
        const auto input = mpt::trackers::load_sequence(open_sequence(sequence));
        return mpt::trackers::run_sequence(input, config).tracks;
      },
      py::arg("sequence"), py::arg("config_json") = "{}",
      "Tracks one sequence directory and returns the output records.");
}
