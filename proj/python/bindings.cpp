#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dcm/scenario_io.hpp"
#include "dcm/sim.hpp"

namespace py = pybind11;
using namespace dcm;

PYBIND11_MODULE(_dcm, m) {
    m.doc() = "Data-driven connectivity maintenance core";

    py::class_<Arena>(m, "Arena")
        .def(py::init<>())
        .def_readwrite("x_min", &Arena::x_min)
        .def_readwrite("x_max", &Arena::x_max)
        .def_readwrite("y_min", &Arena::y_min)
        .def_readwrite("y_max", &Arena::y_max);

    py::class_<FieldSpec>(m, "FieldSpec")
        .def(py::init<>())
        .def_readwrite("seed", &FieldSpec::seed)
        .def_readwrite("p0", &FieldSpec::p0)
        .def_readwrite("path_loss_exp", &FieldSpec::path_loss_exp)
        .def_readwrite("n_bumps", &FieldSpec::n_bumps)
        .def_readwrite("bump_amp", &FieldSpec::bump_amp)
        .def_readwrite("bump_len", &FieldSpec::bump_len)
        .def_readwrite("asym_gain_range", &FieldSpec::asym_gain_range)
        .def_readwrite("floor_db", &FieldSpec::floor_db)
        .def_readwrite("arena", &FieldSpec::arena);

    py::class_<PairSample>(m, "PairSample")
        .def(py::init<>())
        .def(py::init([](const Vec2& tx, const Vec2& rx, double y) {
                 return PairSample{tx, rx, y};
             }),
             py::arg("tx_pos"), py::arg("rx_pos"), py::arg("y"))
        .def_readwrite("tx_pos", &PairSample::tx_pos)
        .def_readwrite("rx_pos", &PairSample::rx_pos)
        .def_readwrite("y", &PairSample::y);

    m.def("rssi", &rssi, py::arg("field"), py::arg("tx_id"), py::arg("tx_pos"), py::arg("rx_id"),
          py::arg("rx_pos"));
    m.def("try_measure", &try_measure, py::arg("field"), py::arg("tx_id"), py::arg("tx_pos"),
          py::arg("rx_id"), py::arg("rx_pos"), py::arg("psi"), py::arg("epsilon"));

    py::class_<GpHyper>(m, "GpHyper")
        .def(py::init<>())
        .def_readwrite("sigma_f", &GpHyper::sigma_f)
        .def_readwrite("length_scale", &GpHyper::length_scale)
        .def_readwrite("noise_var", &GpHyper::noise_var);

    py::class_<GpEval>(m, "GpEval")
        .def_readonly("h", &GpEval::h)
        .def_readonly("mu", &GpEval::mu)
        .def_readonly("var", &GpEval::var)
        .def_readonly("grad_tx", &GpEval::grad_tx)
        .def_readonly("grad_rx", &GpEval::grad_rx);

    py::class_<GpModel>(m, "GpModel")
        .def(py::init<>())
        .def_static("fit", &GpModel::fit, py::arg("hyper"), py::arg("samples"))
        .def("evaluate", &GpModel::evaluate, py::arg("tx_pos"), py::arg("rx_pos"))
        .def("admit",
             py::overload_cast<const PairSample&, double, std::size_t>(&GpModel::admit,
                                                                       py::const_),
             py::arg("sample"), py::arg("dedup_res"), py::arg("cap"))
        .def_property_readonly("fitted", &GpModel::fitted)
        .def_property_readonly("samples", &GpModel::samples);

    py::class_<CommGraph>(m, "CommGraph")
        .def(py::init<>())
        .def_readwrite("n", &CommGraph::n)
        .def_readwrite("edges", &CommGraph::edges)
        .def_readwrite("weights", &CommGraph::weights);

    py::class_<SpanningTree>(m, "SpanningTree")
        .def_readonly("n", &SpanningTree::n)
        .def_readonly("tree_edges", &SpanningTree::tree_edges);

    m.def("build_graph", &build_graph, py::arg("rssi_matrix"), py::arg("epsilon"));
    m.def("is_strongly_connected", &is_strongly_connected, py::arg("graph"));
    m.def("min_spanning_tree", &min_spanning_tree, py::arg("graph"));
    m.def("algebraic_connectivity", &algebraic_connectivity, py::arg("graph"));

    py::enum_<QpStatus>(m, "QpStatus")
        .value("Optimal", QpStatus::Optimal)
        .value("Relaxed", QpStatus::Relaxed)
        .value("Infeasible", QpStatus::Infeasible);

    py::class_<ConstraintRow>(m, "ConstraintRow")
        .def(py::init<>())
        .def_readwrite("coeffs", &ConstraintRow::coeffs)
        .def_readwrite("rhs", &ConstraintRow::rhs)
        .def_readwrite("relaxable", &ConstraintRow::relaxable);

    py::class_<QpProblem>(m, "QpProblem")
        .def(py::init<>())
        .def_readwrite("n_robots", &QpProblem::n_robots)
        .def_readwrite("u_ref", &QpProblem::u_ref)
        .def_readwrite("rows", &QpProblem::rows)
        .def_readwrite("alpha", &QpProblem::alpha)
        .def_readwrite("slack_penalty", &QpProblem::slack_penalty);

    py::class_<QpSolution>(m, "QpSolution")
        .def_readonly("u", &QpSolution::u)
        .def_readonly("slacks", &QpSolution::slacks)
        .def_readonly("status", &QpSolution::status);

    m.def("solve_qp", &solve, py::arg("problem"));

    py::class_<RobotSpec>(m, "RobotSpec")
        .def(py::init<>())
        .def_readwrite("start", &RobotSpec::start)
        .def_readwrite("goal", &RobotSpec::goal)
        .def_readwrite("alpha", &RobotSpec::alpha);

    py::class_<ObstacleSet>(m, "ObstacleSet")
        .def(py::init<>())
        .def_readwrite("points", &ObstacleSet::points)
        .def_readwrite("r_obs", &ObstacleSet::r_obs);

    py::class_<Scenario>(m, "Scenario")
        .def(py::init<>())
        .def_readwrite("robots", &Scenario::robots)
        .def_readwrite("obstacles", &Scenario::obstacles)
        .def_readwrite("field", &Scenario::field)
        .def_readwrite("psi", &Scenario::psi)
        .def_readwrite("epsilon", &Scenario::epsilon)
        .def_readwrite("gamma", &Scenario::gamma)
        .def_readwrite("r_s", &Scenario::r_s)
        .def_readwrite("dt", &Scenario::dt)
        .def_readwrite("steps", &Scenario::steps)
        .def_readwrite("gp_hyper", &Scenario::gp_hyper)
        .def_readwrite("dedup_res", &Scenario::dedup_res)
        .def_readwrite("cap", &Scenario::cap)
        .def_readwrite("seed", &Scenario::seed)
        .def("set_controller",
             [](Scenario& s, const std::string& type, double r_c) {
                 if (type == "dcm") {
                     s.controller = DcmController{};
                 } else if (type == "mccst") {
                     s.controller = MccstController{r_c};
                 } else {
                     throw UsageError("unknown controller type: " + type);
                 }
             },
             py::arg("type"), py::arg("r_c") = 0.7)
        .def("controller_type", [](const Scenario& s) {
            return std::holds_alternative<DcmController>(s.controller) ? "dcm" : "mccst";
        });

    py::class_<StepRecord>(m, "StepRecord")
        .def_readonly("t", &StepRecord::t)
        .def_readonly("x", &StepRecord::x)
        .def_readonly("u_ref", &StepRecord::u_ref)
        .def_readonly("u_star", &StepRecord::u_star)
        .def_readonly("min_dist", &StepRecord::min_dist)
        .def_readonly("lambda2", &StepRecord::lambda2)
        .def_readonly("perturbation", &StepRecord::perturbation)
        .def_readonly("tree_edges", &StepRecord::tree_edges)
        .def_readonly("relaxed", &StepRecord::relaxed)
        .def_readonly("infeasible", &StepRecord::infeasible);

    py::class_<RunSummary>(m, "RunSummary")
        .def_readonly("min_min_dist", &RunSummary::min_min_dist)
        .def_readonly("min_lambda2", &RunSummary::min_lambda2)
        .def_readonly("mean_perturbation", &RunSummary::mean_perturbation)
        .def_readonly("std_perturbation", &RunSummary::std_perturbation)
        .def_readonly("goal_distances", &RunSummary::goal_distances)
        .def_readonly("relaxation_count", &RunSummary::relaxation_count)
        .def_readonly("infeasible_count", &RunSummary::infeasible_count)
        .def_readonly("steps", &RunSummary::steps);

    m.def("run", [](const Scenario& s) { return run(s); }, py::arg("scenario"),
          py::call_guard<py::gil_scoped_release>());
    m.def("summarize", &summarize, py::arg("scenario"), py::arg("records"));
    m.def("make_ring_scenario", &make_ring_scenario, py::arg("n_robots"), py::arg("seed"),
          py::arg("start_spacing") = 0.6, py::arg("goal_spacing") = 1.1);
    m.def("load_scenario", &load_scenario, py::arg("path"));
    m.def("format_scenario", &format_scenario, py::arg("scenario"));
}
