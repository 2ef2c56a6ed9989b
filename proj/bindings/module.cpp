#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "levelcs/analysis.hpp"
#include "levelcs/experiments.hpp"
#include "levelcs/gen.hpp"
#include "levelcs/levels.hpp"
#include "levelcs/linalg.hpp"
#include "levelcs/solvers.hpp"

namespace py = pybind11;
using namespace levelcs;

namespace {

DenseMatrix to_matrix(const py::array_t<double, py::array::c_style | py::array::forcecast>& array) {
    if (array.ndim() != 2) throw std::invalid_argument("expected a 2-D array");
    DenseMatrix A(static_cast<int>(array.shape(0)), static_cast<int>(array.shape(1)));
    std::copy(array.data(), array.data() + array.size(), A.entries().begin());
    return A;
}

DenseVector to_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& array) {
    if (array.ndim() != 1) throw std::invalid_argument("expected a 1-D array");
    DenseVector x(static_cast<int>(array.shape(0)));
    std::copy(array.data(), array.data() + array.size(), x.entries().begin());
    return x;
}

py::array_t<double> from_vector(const DenseVector& x) {
    py::array_t<double> out(static_cast<py::ssize_t>(x.dim()));
    std::copy(x.entries().begin(), x.entries().end(), out.mutable_data());
    return out;
}

py::array_t<double> from_matrix(const DenseMatrix& A) {
    py::array_t<double> out({static_cast<py::ssize_t>(A.rows()), static_cast<py::ssize_t>(A.cols())});
    std::copy(A.entries().begin(), A.entries().end(), out.mutable_data());
    return out;
}

LevelStructure structure_from(const py::object& obj) {
    if (py::isinstance<LevelStructure>(obj)) return obj.cast<LevelStructure>();
    if (py::isinstance<py::str>(obj)) return LevelStructure::parse(obj.cast<std::string>());
    throw std::invalid_argument("expected a LevelStructure or a \"M1,...,Mr/s1,...,sr\" string");
}

SupportSet support_from(const std::vector<int>& indices, int dim) { return SupportSet(indices, dim); }

SolveOptions make_options(int max_iter, double tol, const py::object& x0, bool record_trajectory) {
    SolveOptions opts;
    opts.max_iter = max_iter;
    opts.rel_change_tol = tol;
    opts.record_trajectory = record_trajectory;
    if (!x0.is_none())
        opts.x0 = to_vector(x0.cast<py::array_t<double, py::array::c_style | py::array::forcecast>>());
    return opts;
}

}  // namespace

PYBIND11_MODULE(levelcs, m) {
    m.doc() = "Compressed sensing with sparsity in levels: thresholding operators, recovery "
              "algorithms, restricted isometry certification and phase-transition experiments";

    py::class_<LevelStructure>(m, "LevelStructure")
        .def(py::init<std::vector<int>, std::vector<int>>(), py::arg("levels"), py::arg("sparsities"))
        .def_static("parse", &LevelStructure::parse, py::arg("text"))
        .def_property_readonly("levels", &LevelStructure::levels)
        .def_property_readonly("sparsities", &LevelStructure::sparsities)
        .def_property_readonly("dim", &LevelStructure::dim)
        .def_property_readonly("num_levels", &LevelStructure::num_levels)
        .def_property_readonly("total_sparsity", &LevelStructure::total_sparsity)
        .def("__str__", &LevelStructure::to_string)
        .def("__repr__", [](const LevelStructure& ls) { return "LevelStructure(\"" + ls.to_string() + "\")"; })
        .def("__eq__", [](const LevelStructure& a, const LevelStructure& b) { return a == b; });

    m.def("scale_sparsities",
          [](const py::object& ls, int factor) { return scale_sparsities(structure_from(ls), factor); },
          py::arg("structure"), py::arg("factor"));

    m.def("restrict_to",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x,
             const std::vector<int>& support) {
              const DenseVector vec = to_vector(x);
              return from_vector(restrict_to(vec, support_from(support, vec.dim())));
          },
          py::arg("x"), py::arg("support"), "Keep x on the 1-based support, zero elsewhere");

    m.def("level_slice",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x, const py::object& ls,
             int k) { return from_vector(level_slice(to_vector(x), structure_from(ls), k)); },
          py::arg("x"), py::arg("structure"), py::arg("k"));

    m.def("top_support",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x, const py::object& ls) {
              return top_support(to_vector(x), structure_from(ls)).indices();
          },
          py::arg("x"), py::arg("structure"), "1-based indices of the per-level largest entries");

    m.def("hard_threshold",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x, const py::object& ls) {
              return from_vector(hard_threshold(to_vector(x), structure_from(ls)));
          },
          py::arg("x"), py::arg("structure"));

    m.def("is_sparse_in_levels",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x, const py::object& ls) {
              return is_sparse_in_levels(to_vector(x), structure_from(ls));
          },
          py::arg("x"), py::arg("structure"));

    m.def("apply",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& A,
             const py::array_t<double, py::array::c_style | py::array::forcecast>& x, bool adjoint) {
              return from_vector(apply(to_matrix(A), to_vector(x), adjoint));
          },
          py::arg("A"), py::arg("x"), py::arg("adjoint") = false);

    m.def("least_squares_on_support",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& A,
             const py::array_t<double, py::array::c_style | py::array::forcecast>& y,
             const std::vector<int>& support) {
              const DenseMatrix matrix = to_matrix(A);
              return from_vector(
                  least_squares_on_support(matrix, to_vector(y), support_from(support, matrix.cols())));
          },
          py::arg("A"), py::arg("y"), py::arg("support"));

    m.def("spectral_norm",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& A, double tol,
             int max_iter) { return spectral_norm(to_matrix(A), tol, max_iter).value; },
          py::arg("A"), py::arg("tol") = 1e-12, py::arg("max_iter") = 5000);

    m.def("normalize_columns",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& A) {
              const ColumnNormalization result = normalize_columns(to_matrix(A));
              return py::make_tuple(from_matrix(result.matrix), from_vector(result.scales));
          },
          py::arg("A"), "Returns (normalized matrix, original column norms)");

    m.def("weighted_l1_norm",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x, const py::object& ls,
             const std::vector<double>& weights) {
              return weighted_l1_norm(to_vector(x), structure_from(ls), LevelWeights(weights));
          },
          py::arg("x"), py::arg("structure"), py::arg("weights"));

    m.def("default_weights",
          [](const py::object& ls) { return default_weights(structure_from(ls)).per_level(); },
          py::arg("structure"), "Per-level weights sqrt(s_total / s_k)");

    m.def("zeta_xi",
          [](const py::object& ls, const std::vector<double>& weights) {
              const ZetaXi result = zeta_xi(structure_from(ls), LevelWeights(weights));
              return py::make_tuple(result.zeta, result.xi);
          },
          py::arg("structure"), py::arg("weights"));

    m.def("best_approx_error",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x, const py::object& ls,
             const std::vector<double>& weights) {
              return best_approx_error(to_vector(x), structure_from(ls), LevelWeights(weights));
          },
          py::arg("x"), py::arg("structure"), py::arg("weights"));

    m.def("ricl_bruteforce",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& A, const py::object& ls,
             std::uint64_t cap) {
              const RiclResult result = ricl_bruteforce(to_matrix(A), structure_from(ls), cap);
              return py::make_tuple(result.delta, result.worst_support.indices());
          },
          py::arg("A"), py::arg("structure"), py::arg("cap") = 1'000'000,
          "Returns (delta, worst support indices)");

    py::class_<GuaranteeReport>(m, "GuaranteeReport")
        .def_readonly("condition_threshold", &GuaranteeReport::condition_threshold)
        .def_readonly("condition_met", &GuaranteeReport::condition_met)
        .def_readonly("rho", &GuaranteeReport::rho)
        .def_readonly("tau_bound", &GuaranteeReport::tau_bound)
        .def_readonly("notes", &GuaranteeReport::notes);

    m.def("iht_guarantee", &iht_guarantee, py::arg("delta_6s"));
    m.def("cosamp_guarantee", &cosamp_guarantee, py::arg("delta_8s"));

    m.def("qcbp_threshold",
          [](const py::object& ls, const std::vector<double>& weights) {
              return qcbp_threshold(structure_from(ls), LevelWeights(weights));
          },
          py::arg("structure"), py::arg("weights"));

    m.def("gaussian_sample_bound",
          [](const py::object& ls, double delta, double eps, double C) {
              return gaussian_sample_bound(structure_from(ls), delta, eps, C);
          },
          py::arg("structure"), py::arg("delta"), py::arg("eps"), py::arg("C"));

    m.def("gaussian_matrix",
          [](int rows, int cols, std::uint64_t seed) { return from_matrix(gaussian_matrix(rows, cols, Seed{seed})); },
          py::arg("rows"), py::arg("cols"), py::arg("seed"),
          "i.i.d. N(0, 1/rows) entries from the fixed seeded generator");

    m.def("random_levels_signal",
          [](const py::object& ls, std::uint64_t seed) {
              return from_vector(random_levels_signal(structure_from(ls), Seed{seed}));
          },
          py::arg("structure"), py::arg("seed"));

    m.def("derive_trial_seed",
          [](std::uint64_t base, std::uint64_t trial_index, const std::string& cell_tag) {
              return derive_trial_seed(Seed{base}, trial_index, cell_tag).value;
          },
          py::arg("base"), py::arg("trial_index"), py::arg("cell_tag"));

    py::class_<SolveResult>(m, "SolveResult")
        .def_property_readonly("xhat", [](const SolveResult& r) { return from_vector(r.xhat); })
        .def_readonly("iterations", &SolveResult::iterations)
        .def_readonly("residual_history", &SolveResult::residual_history)
        .def_property_readonly("stop_reason", [](const SolveResult& r) { return to_string(r.stop_reason); })
        .def_property_readonly("trajectory", [](const SolveResult& r) {
            py::list out;
            for (const DenseVector& x : r.trajectory) out.append(from_vector(x));
            return out;
        });

    m.def("solve",
          [](const std::string& algorithm, const py::array_t<double, py::array::c_style | py::array::forcecast>& A,
             const py::array_t<double, py::array::c_style | py::array::forcecast>& y, const py::object& ls,
             int max_iter, double tol, const py::object& x0, bool record_trajectory,
             const std::string& normalization) {
              const Algorithm alg = algorithm_from_name(algorithm);
              const Normalization norm = normalization == "auto" ? Normalization::None
                                                                 : normalization_from_name(normalization);
              return solve_with_normalization(alg, to_matrix(A), to_vector(y), structure_from(ls),
                                              make_options(max_iter, tol, x0, record_trajectory), norm);
          },
          py::arg("algorithm"), py::arg("A"), py::arg("y"), py::arg("structure"), py::arg("max_iter") = 1000,
          py::arg("tol") = 1e-4, py::arg("x0") = py::none(), py::arg("record_trajectory") = false,
          py::arg("normalization") = "auto",
          "Run iht/niht/cosamp/omp with the given structure; a one-level structure gives the classical "
          "algorithm. normalization \"auto\" applies none (the caller controls preprocessing).");

    m.def("phase_line",
          [](const std::string& algorithm, const py::object& structure, const std::vector<int>& m_values,
             int trials, std::uint64_t seed, const py::object& solver_structure, double success_tol, double tol,
             int max_iter, double noise_sigma, const std::string& normalization, bool identity, int threads) {
              const LevelStructure signal = structure_from(structure);
              const LevelStructure solver =
                  solver_structure.is_none() ? signal : structure_from(solver_structure);
              ExperimentConfig cfg(signal, solver);
              cfg.algorithm = algorithm_from_name(algorithm);
              cfg.m_values = m_values;
              cfg.trials = trials;
              cfg.base_seed = Seed{seed};
              cfg.success_rel_err = success_tol;
              cfg.solve_opts.rel_change_tol = tol;
              cfg.solve_opts.max_iter = max_iter;
              cfg.noise_sigma = noise_sigma;
              cfg.normalization = normalization == "auto" ? default_normalization(cfg.algorithm)
                                                          : normalization_from_name(normalization);
              cfg.identity_mode = identity;
              cfg.threads = threads;
              const SweepTable table = sweep_phase_line(cfg);
              py::list rows;
              for (const SweepRow& row : table.rows) {
                  py::dict entry;
                  entry["m"] = row.m;
                  entry["s_total"] = row.s_total;
                  entry["trials"] = row.trials;
                  entry["successes"] = row.successes;
                  entry["success_rate"] = row.success_rate;
                  entry["mean_rel_err"] = row.mean_rel_err;
                  rows.append(entry);
              }
              return rows;
          },
          py::arg("algorithm"), py::arg("structure"), py::arg("m_values"), py::arg("trials") = 100,
          py::arg("seed") = 0, py::arg("solver_structure") = py::none(), py::arg("success_tol") = 1e-2,
          py::arg("tol") = 1e-4, py::arg("max_iter") = 1000, py::arg("noise_sigma") = 0.0,
          py::arg("normalization") = "auto", py::arg("identity") = false, py::arg("threads") = 1,
          "Success probability versus m; paired seeds across algorithms and solver structures");

    py::register_exception<SolverDivergence>(m, "SolverDivergenceError", PyExc_RuntimeError);
    py::register_exception<EnumerationLimitError>(m, "EnumerationLimitError", PyExc_RuntimeError);
}
