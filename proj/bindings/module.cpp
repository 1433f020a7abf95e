#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pocs/diagnostics.hpp"
#include "pocs/linearization.hpp"
#include "pocs/measurement.hpp"
#include "pocs/recovery.hpp"
#include "pocs/rng.hpp"
#include "pocs/solver.hpp"

namespace py = pybind11;

namespace {

pocs::SensingMatrix wrap_matrix(Eigen::MatrixXcd phi) {
  pocs::SensingMatrix sm;
  sm.phi = std::move(phi);
  return sm;
}

pocs::SignalVector wrap_signal(Eigen::VectorXd x) {
  pocs::SignalVector sv;
  sv.values = std::move(x);
  return sv;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "phase-only compressed sensing laboratory (C++ core)";
  m.attr("kappa") = pocs::kKappa;

  m.def(
      "draw_sensing_matrix",
      [](pocs::Index rows, pocs::Index cols, std::uint64_t seed) {
        return pocs::draw_sensing_matrix(rows, cols, seed).phi;
      },
      py::arg("m"), py::arg("n"), py::arg("seed"),
      "Complex Gaussian sensing matrix with independent N(0,1)+iN(0,1) entries.");

  m.def(
      "draw_sparse_signal",
      [](pocs::Index n, int s, std::uint64_t seed) {
        pocs::Rng rng(seed);
        return pocs::draw_sparse_signal(n, s, rng).values;
      },
      py::arg("n"), py::arg("s"), py::arg("seed"),
      "Unit-norm signal with a uniformly random size-s support and Gaussian coefficients.");

  m.def(
      "phase",
      [](const Eigen::VectorXcd& v) { return pocs::phase(v); }, py::arg("values"),
      "Entrywise complex phase c/|c| with sign(0) = 1.");

  m.def(
      "phases",
      [](const Eigen::MatrixXcd& phi, const Eigen::VectorXd& x) {
        return pocs::observe(wrap_matrix(phi), wrap_signal(x)).values;
      },
      py::arg("phi"), py::arg("x"), "Observed measurement phases sign(phi @ x).");

  m.def(
      "build_linearized",
      [](const Eigen::VectorXcd& w, const Eigen::MatrixXcd& phi) {
        return pocs::build_linearized(w, wrap_matrix(phi)).A;
      },
      py::arg("w"), py::arg("phi"),
      "Real linearized sensing matrix A_w mapping the truth to e1.");

  m.def(
      "ground_truth",
      [](const Eigen::MatrixXcd& phi, const Eigen::VectorXd& x) {
        return pocs::ground_truth_scaled(wrap_matrix(phi), wrap_signal(x)).x_star;
      },
      py::arg("phi"), py::arg("x"), "Scaled ground truth satisfying A_z x_star = e1.");

  m.def(
      "sparsity_defect",
      [](const Eigen::VectorXd& x, int s) { return pocs::sparsity_defect(x, s); },
      py::arg("x"), py::arg("s"), "l1 distance to the nearest s-sparse vector.");

  m.def(
      "qcbp",
      [](const Eigen::MatrixXd& A, const Eigen::VectorXd& y, double epsilon, double tol,
         int max_iter) {
        pocs::SolverOptions opts;
        opts.tol_primal = tol;
        opts.tol_dual = tol;
        opts.max_iter = max_iter;
        const pocs::SolveReport rep = pocs::qcbp(A, y, epsilon, opts);
        return py::make_tuple(rep.solution, rep.converged, rep.iterations, rep.objective);
      },
      py::arg("A"), py::arg("y"), py::arg("epsilon"), py::arg("tol") = 1e-9,
      py::arg("max_iter") = 50000,
      "min ||u||_1 s.t. ||A u - y|| <= epsilon; returns (u, converged, iterations, objective).");

  m.def("lp_oracle", &pocs::lp_oracle, py::arg("A"), py::arg("y"), py::arg("weights"),
        "Exact weighted l1 minimizer for A u = y at desk scale (simplex reference).");

  m.def(
      "recover_phases",
      [](const Eigen::MatrixXcd& phi, const Eigen::VectorXcd& z, int s, double epsilon,
         double tol) {
        const pocs::SensingMatrix sm = wrap_matrix(phi);
        const pocs::LinearizedSystem sys = pocs::build_linearized(z, sm, epsilon);
        Eigen::VectorXd e1 = Eigen::VectorXd::Zero(sys.rows());
        e1[0] = 1.0;
        pocs::SolverOptions opts;
        opts.tol_primal = tol;
        opts.tol_dual = tol;
        const pocs::SolveReport rep = pocs::qcbp(sys.A, e1, epsilon, opts);
        Eigen::VectorXd x_sharp = Eigen::VectorXd::Zero(rep.solution.size());
        if (rep.solution.norm() > 1e-9) x_sharp = rep.solution / rep.solution.norm();
        return py::make_tuple(x_sharp, rep.converged, rep.iterations);
      },
      py::arg("phi"), py::arg("z"), py::arg("s"), py::arg("epsilon") = 0.0,
      py::arg("tol") = 1e-9,
      "End-to-end estimate from observed phases; returns (x_sharp, converged, iterations).");

  m.def(
      "rip_monte_carlo",
      [](const Eigen::MatrixXd& A, int t, long samples, std::uint64_t seed) {
        return pocs::rip_monte_carlo(A, t, samples, seed).delta_lower;
      },
      py::arg("A"), py::arg("t"), py::arg("samples"), py::arg("seed"),
      "Sampled lower bound on the isometry distortion over t-sparse unit vectors.");

  m.def(
      "l1_concentration",
      [](const Eigen::MatrixXcd& phi, const Eigen::VectorXd& x) {
        return pocs::l1_concentration(wrap_matrix(phi), wrap_signal(x));
      },
      py::arg("phi"), py::arg("x"), "|| phi x ||_1 / (kappa m) distance from 1.");
}
