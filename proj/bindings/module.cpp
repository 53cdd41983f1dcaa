#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "fidkit/errors.hpp"
#include "fidkit/fit.hpp"
#include "fidkit/ingest.hpp"
#include "fidkit/model.hpp"
#include "fidkit/plan.hpp"
#include "fidkit/sim.hpp"
#include "fidkit/stats.hpp"

namespace py = pybind11;
using namespace fidkit;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Logistic disturbance response toolkit: model evaluation and "
              "FID extraction, model fitting, KS testing, protocol "
              "simulation and standoff planning.";

    py::register_exception<Error>(m, "FidkitError");

    py::enum_<AbscissaKind>(m, "AbscissaKind")
        .value("RobotDistance", AbscissaKind::RobotDistance)
        .value("TimeAlongTransect", AbscissaKind::TimeAlongTransect);

    py::enum_<SampleLabel>(m, "SampleLabel")
        .value("Control", SampleLabel::Control)
        .value("Transect", SampleLabel::Transect);

    py::class_<DisturbanceModel>(m, "DisturbanceModel")
        .def(py::init([](double l_control, double l_hide, double k, double x0,
                         AbscissaKind kind) {
                 DisturbanceModel model{l_control, l_hide, k, x0, kind};
                 validate(model);
                 return model;
             }),
             py::arg("l_control"), py::arg("l_hide"), py::arg("k"),
             py::arg("x0"),
             py::arg("abscissa_kind") = AbscissaKind::RobotDistance)
        .def_readonly("l_control", &DisturbanceModel::l_control)
        .def_readonly("l_hide", &DisturbanceModel::l_hide)
        .def_readonly("k", &DisturbanceModel::k)
        .def_readonly("x0", &DisturbanceModel::x0)
        .def_readonly("abscissa_kind", &DisturbanceModel::abscissa_kind)
        .def("to_json", [](const DisturbanceModel& model) {
            return to_json(model).dump();
        })
        .def_static("from_json", [](const std::string& text) {
            return model_from_json(nlohmann::json::parse(text));
        });

    m.def("evaluate", &evaluate, py::arg("model"), py::arg("x"));
    m.def(
        "fid",
        [](const DisturbanceModel& model, double alpha) {
            return fid(model, FidQuery{alpha});
        },
        py::arg("model"), py::arg("alpha") = kDefaultAlpha);
    m.def("invert", &invert, py::arg("model"), py::arg("target_distance"));

    py::class_<ObservationSample>(m, "ObservationSample")
        .def(py::init<double, double, SampleLabel, double>(), py::arg("x"),
             py::arg("distance"), py::arg("label") = SampleLabel::Transect,
             py::arg("weight") = 1.0)
        .def_readonly("x", &ObservationSample::x)
        .def_readonly("distance", &ObservationSample::distance)
        .def_readonly("label", &ObservationSample::label)
        .def_readonly("weight", &ObservationSample::weight);

    py::class_<FitResult>(m, "FitResult")
        .def_readonly("model", &FitResult::model)
        .def_readonly("rss", &FitResult::rss)
        .def_readonly("iterations", &FitResult::iterations)
        .def_readonly("converged", &FitResult::converged)
        .def_readonly("residual_stddev", &FitResult::residual_stddev)
        .def_readonly("identifiable", &FitResult::identifiable);

    m.def(
        "fit_model",
        [](const std::vector<ObservationSample>& samples, AbscissaKind kind) {
            FitOptions options;
            options.abscissa_kind = kind;
            return fit_model(samples, options);
        },
        py::arg("samples"),
        py::arg("abscissa_kind") = AbscissaKind::RobotDistance);

    py::class_<KsResult>(m, "KsResult")
        .def_readonly("d_statistic", &KsResult::d_statistic)
        .def_readonly("p_value", &KsResult::p_value)
        .def_readonly("n1", &KsResult::n1)
        .def_readonly("n2", &KsResult::n2)
        .def_readonly("mean1", &KsResult::mean1)
        .def_readonly("mean2", &KsResult::mean2);

    m.def(
        "ks_two_sample",
        [](const std::vector<double>& control,
           const std::vector<double>& transect) {
            return ks_two_sample(control, transect);
        },
        py::arg("control"), py::arg("transect"));
    m.def(
        "compare_groups",
        [](const std::vector<ObservationSample>& samples) {
            return compare_groups(samples);
        },
        py::arg("samples"));

    py::class_<ProtocolConfig>(m, "ProtocolConfig")
        .def(py::init([](double altitude, double speed,
                         double transect_half_length, double wait_seconds,
                         double standoff_during_wait, int n_transects,
                         int n_fish, double noise_stddev,
                         std::uint64_t seed) {
                 ProtocolConfig c{altitude, speed, transect_half_length,
                                  wait_seconds, standoff_during_wait,
                                  n_transects, n_fish, noise_stddev, seed};
                 validate(c);
                 return c;
             }),
             py::arg("altitude") = 1.0, py::arg("speed") = 0.5,
             py::arg("transect_half_length") = 4.0,
             py::arg("wait_seconds") = 60.0,
             py::arg("standoff_during_wait") = 4.0, py::arg("n_transects") = 1,
             py::arg("n_fish") = 1, py::arg("noise_stddev") = 0.0,
             py::arg("seed") = 0)
        .def_readwrite("altitude", &ProtocolConfig::altitude)
        .def_readwrite("speed", &ProtocolConfig::speed)
        .def_readwrite("transect_half_length",
                       &ProtocolConfig::transect_half_length)
        .def_readwrite("wait_seconds", &ProtocolConfig::wait_seconds)
        .def_readwrite("standoff_during_wait",
                       &ProtocolConfig::standoff_during_wait)
        .def_readwrite("n_transects", &ProtocolConfig::n_transects)
        .def_readwrite("n_fish", &ProtocolConfig::n_fish)
        .def_readwrite("noise_stddev", &ProtocolConfig::noise_stddev)
        .def_readwrite("seed", &ProtocolConfig::seed);

    py::class_<SimFrame>(m, "SimFrame")
        .def_readonly("t", &SimFrame::t)
        .def_readonly("robot_distance", &SimFrame::robot_distance)
        .def_readonly("altitude", &SimFrame::altitude)
        .def_readonly("fish_distances", &SimFrame::fish_distances)
        .def_readonly("label", &SimFrame::label)
        .def_readonly("transect_index", &SimFrame::transect_index);

    m.def(
        "simulate",
        [](const DisturbanceModel& truth, const ProtocolConfig& config,
           double frame_rate) { return simulate(truth, config, frame_rate); },
        py::arg("truth"), py::arg("config"), py::arg("frame_rate") = 5.0);
    m.def(
        "to_observations",
        [](const std::vector<SimFrame>& frames, AbscissaKind kind) {
            return to_observations(frames, kind);
        },
        py::arg("frames"), py::arg("abscissa_kind"));

    py::class_<StandoffPlan>(m, "StandoffPlan")
        .def_readonly("fid", &StandoffPlan::fid)
        .def_readonly("alpha", &StandoffPlan::alpha)
        .def_readonly("min_altitude", &StandoffPlan::min_altitude)
        .def_readonly("sensor_range", &StandoffPlan::sensor_range)
        .def_readonly("feasible", &StandoffPlan::feasible)
        .def_readonly("margin", &StandoffPlan::margin);

    py::class_<Waypoint>(m, "Waypoint")
        .def_readonly("t", &Waypoint::t)
        .def_readonly("x_horizontal", &Waypoint::x_horizontal)
        .def_readonly("altitude", &Waypoint::altitude);

    m.def("plan_standoff", &plan_standoff, py::arg("model"), py::arg("alpha"),
          py::arg("sensor_range"));
    m.def("plan_transect", &plan_transect, py::arg("model"), py::arg("alpha"),
          py::arg("speed"), py::arg("half_length"), py::arg("sensor_range"));

    m.def(
        "parse_annotations_csv",
        [](const std::string& path) {
            std::ifstream in(path);
            if (!in) throw InvalidArgument("cannot open '" + path + "'");
            const auto records = parse_annotations(in, AnnotationFormat::Csv);
            const auto dataset = compute_distances(records);
            return dataset.samples;
        },
        py::arg("path"),
        "Parse an annotation CSV and return time-domain observation samples.");
}
