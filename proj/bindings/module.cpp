#include "orientstat/bench.hpp"
#include "orientstat/cluster.hpp"
#include "orientstat/io.hpp"
#include "orientstat/rounding.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

namespace py = pybind11;
using namespace orientstat;

namespace {

Metric metric_from(const std::string& name) {
    if (name == "arith" || name == "arithmetic")
        return Metric::arithmetic;
    if (name == "geo" || name == "geometric")
        return Metric::geometric;
    throw py::value_error("metric must be 'arith' or 'geo'");
}

std::vector<UnitQuaternion> quats_from(const Eigen::MatrixXd& array) {
    if (array.cols() != 4)
        throw py::value_error("expected an (N, 4) array of w x y z rows");
    std::vector<UnitQuaternion> out;
    out.reserve(array.rows());
    for (Eigen::Index i = 0; i < array.rows(); ++i)
        out.emplace_back(array(i, 0), array(i, 1), array(i, 2), array(i, 3));
    return out;
}

std::vector<Direction> dirs_from(const Eigen::MatrixXd& array) {
    if (array.cols() != 3)
        throw py::value_error("expected an (N, 3) array of x y z rows");
    std::vector<Direction> out;
    out.reserve(array.rows());
    for (Eigen::Index i = 0; i < array.rows(); ++i) {
        Direction v = array.row(i).transpose();
        const double n = v.norm();
        if (std::abs(n - 1.0) > 1e-6)
            throw py::value_error("row " + std::to_string(i) + " is not a unit vector");
        out.push_back(v / n);
    }
    return out;
}

py::dict run_pipeline(const FiniteRotationGroup& group, const NugProblem& problem,
                      const RoundingParams& rounding, double tol, int max_iters,
                      const std::function<double(const Assignment&)>& variance_of) {
    SolveOptions opts;
    opts.tol = tol;
    opts.max_iters = max_iters;
    const NugSolution solution = solve_sdp(problem, opts);
    const Assignment assignment = greedy_round(solution, problem.costs, group, rounding);

    py::dict out;
    out["representatives"] = assignment;
    out["variance"] = variance_of(assignment);
    out["sdp_objective"] = solution.objective;
    out["rounded_surrogate_cost"] = problem.costs.assignment_cost(assignment, group);
    py::dict diag;
    diag["iterations"] = solution.diag.iterations;
    diag["primal_residual"] = solution.diag.primal_residual;
    diag["dual_residual"] = solution.diag.dual_residual;
    diag["max_psd_violation"] = solution.diag.max_psd_violation;
    diag["min_lambda"] = solution.diag.min_lambda;
    out["diagnostics"] = diag;
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Means, variances, and clustering of rotations and projection "
              "directions under molecular symmetry";

    py::register_exception<DegenerateMeanError>(m, "DegenerateMeanError");
    py::register_exception<ProblemTooLargeError>(m, "ProblemTooLargeError");

    py::class_<FiniteRotationGroup, std::shared_ptr<FiniteRotationGroup>>(m, "Group")
        .def(py::init([](const std::string& name) {
                 return std::make_shared<FiniteRotationGroup>(
                     build_group(GroupSpec::parse(name)));
             }),
             py::arg("name"))
        .def_property_readonly("name",
                               [](const FiniteRotationGroup& g) { return g.spec().name(); })
        .def_property_readonly("order", &FiniteRotationGroup::order)
        .def("element",
             [](const FiniteRotationGroup& g, int i) {
                 const auto& q = g.element(i);
                 return py::make_tuple(q.w, q.x, q.y, q.z);
             },
             py::arg("index"), "Element as a (w, x, y, z) tuple")
        .def("element_matrix", &FiniteRotationGroup::element_matrix, py::arg("index"))
        .def("multiply", &FiniteRotationGroup::multiply, py::arg("i"), py::arg("j"))
        .def("inverse", &FiniteRotationGroup::inverse, py::arg("i"))
        .def("__len__", &FiniteRotationGroup::order)
        .def("__repr__", [](const FiniteRotationGroup& g) {
            return "<Group " + g.spec().name() + " of order " + std::to_string(g.order()) + ">";
        });

    m.def("quat_to_matrix",
          [](double w, double x, double y, double z) {
              return UnitQuaternion(w, x, y, z).matrix();
          },
          py::arg("w"), py::arg("x"), py::arg("y"), py::arg("z"));

    m.def("dist_rotation",
          [](const Eigen::Matrix3d& r1, const Eigen::Matrix3d& r2, const std::string& metric) {
              return dist_so3(r1, r2, metric_from(metric));
          },
          py::arg("r1"), py::arg("r2"), py::arg("metric") = "arith");

    m.def("dist_direction",
          [](const Direction& n1, const Direction& n2, const std::string& metric) {
              return dist_s2(n1.normalized(), n2.normalized(), metric_from(metric));
          },
          py::arg("n1"), py::arg("n2"), py::arg("metric") = "arith");

    m.def("quotient_dist_rotation",
          [](const Eigen::Matrix3d& r1, const Eigen::Matrix3d& r2,
             const FiniteRotationGroup& group, const std::string& metric) {
              return quotient_dist_so3(r1, r2, group, metric_from(metric));
          },
          py::arg("r1"), py::arg("r2"), py::arg("group"), py::arg("metric") = "arith",
          "Returns (distance, argmin element index)");

    m.def("quotient_dist_direction",
          [](const Direction& n1, const Direction& n2, const FiniteRotationGroup& group,
             const std::string& metric) {
              return quotient_dist_s2(n1.normalized(), n2.normalized(), group,
                                      metric_from(metric));
          },
          py::arg("n1"), py::arg("n2"), py::arg("group"), py::arg("metric") = "arith");

    m.def("mean_variance_rotations",
          [](const Eigen::MatrixXd& quats, const FiniteRotationGroup& group,
             const std::string& metric, int m_cap, double c, double tol, int max_iters) {
              const auto data = quats_from(quats);
              const Metric met = metric_from(metric);
              const auto irreps = irreps_of(group);
              const NugProblem problem = build_problem(data, group, irreps, met);
              return run_pipeline(group, problem, {m_cap, c}, tol, max_iters,
                                  [&](const Assignment& a) {
                                      return eval_L_so3(data, a, group, met);
                                  });
          },
          py::arg("quaternions"), py::arg("group"), py::arg("metric") = "arith",
          py::arg("m") = 20, py::arg("c") = 0.99, py::arg("tol") = 1e-6,
          py::arg("max_iters") = 20000,
          "Symmetry-aware mean/variance of an (N, 4) quaternion array");

    m.def("mean_variance_directions",
          [](const Eigen::MatrixXd& dirs, const FiniteRotationGroup& group,
             const std::string& metric, int m_cap, double c, double tol, int max_iters) {
              const auto data = dirs_from(dirs);
              const Metric met = metric_from(metric);
              const auto irreps = irreps_of(group);
              const NugProblem problem = build_problem(data, group, irreps, met);
              return run_pipeline(group, problem, {m_cap, c}, tol, max_iters,
                                  [&](const Assignment& a) {
                                      return eval_L_s2(data, a, group, met);
                                  });
          },
          py::arg("directions"), py::arg("group"), py::arg("metric") = "arith",
          py::arg("m") = 20, py::arg("c") = 0.99, py::arg("tol") = 1e-6,
          py::arg("max_iters") = 20000,
          "Symmetry-aware mean/variance of an (N, 3) direction array");

    m.def("brute_force_rotations",
          [](const Eigen::MatrixXd& quats, const FiniteRotationGroup& group,
             const std::string& metric, const std::string& objective) {
              const auto data = quats_from(quats);
              const Objective obj =
                  objective == "exact" ? Objective::exact : Objective::surrogate;
              return brute_force_min(obj, data, group, metric_from(metric));
          },
          py::arg("quaternions"), py::arg("group"), py::arg("metric") = "arith",
          py::arg("objective") = "surrogate", "Returns (assignment, cost)");

    m.def("generate_benchmark_classes",
          [](const FiniteRotationGroup& group, std::uint64_t seed) {
              const LabeledPoints data = gen_synthetic(default_c3_classes(), group, seed);
              Eigen::MatrixXd points(data.points.size(), 3);
              for (std::size_t i = 0; i < data.points.size(); ++i)
                  points.row(i) = data.points[i].transpose();
              return py::make_tuple(points, data.labels);
          },
          py::arg("group"), py::arg("seed") = 0,
          "The five-class synthetic arrangement as ((N, 3) points, labels)");

    m.def("kmeans",
          [](const Eigen::MatrixXd& points, const FiniteRotationGroup& group, int k,
             const std::string& baseline, std::uint64_t seed, int subsample, int max_iters,
             const std::optional<std::vector<int>>& truth) {
              const auto data = dirs_from(points);
              ClusterConfig config;
              config.k = k;
              config.seed = seed;
              config.mean_subsample = subsample;
              config.max_iters = max_iters;
              ClusterResult result;
              if (baseline == "quotient") {
                  const auto irreps = irreps_of(group);
                  result = kmeans_quotient(data, config, group, irreps,
                                           truth ? &*truth : nullptr);
              } else if (baseline == "fundamental") {
                  result = kmeans_fundamental_baseline(data, config, group,
                                                       truth ? &*truth : nullptr);
              } else {
                  throw py::value_error("baseline must be 'quotient' or 'fundamental'");
              }
              py::dict out;
              out["labels"] = result.labels;
              Eigen::MatrixXd centers(result.centers.size(), 3);
              for (std::size_t i = 0; i < result.centers.size(); ++i)
                  centers.row(i) = result.centers[i].transpose();
              out["centers"] = centers;
              out["iterations"] = result.iterations;
              out["objective_trace"] = result.objective_trace;
              if (result.accuracy >= 0)
                  out["accuracy"] = result.accuracy;
              return out;
          },
          py::arg("points"), py::arg("group"), py::arg("k"), py::arg("baseline") = "quotient",
          py::arg("seed") = 0, py::arg("subsample") = 10, py::arg("max_iters") = 50,
          py::arg("labels") = py::none(), "K-means on unit directions");

    m.attr("__version__") = "0.1.0";
}
