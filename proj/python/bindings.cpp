#include <pybind11/functional.h>
#include <pybind11/iostream.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tukey_ep/distributions.hpp"
#include "tukey_ep/dragonian.hpp"
#include "tukey_ep/ep_engine.hpp"
#include "tukey_ep/harness.hpp"
#include "tukey_ep/test_functions.hpp"
#include "tukey_ep/version.hpp"

namespace py = pybind11;
using namespace tukey_ep;

namespace {

template <class Draw>
std::vector<double> draw_many(std::size_t n, std::uint64_t seed, std::uint64_t stream, Draw draw) {
  RngStream rng(seed, stream);
  std::vector<double> out(n);
  for (double& v : out) v = draw(rng);
  return out;
}

py::tuple record_tuple(const GenerationRecord& g) {
  return py::make_tuple(g.generation, g.evaluations, g.best_of_generation, g.best_so_far);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Evolutionary programming with Tukey-Lambda mutation";
  m.attr("__version__") = kVersion;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  // Distributions
  py::class_<TukeyLambdaParams>(m, "TukeyLambdaParams")
      .def(py::init([](double location, double scale, double shape) {
             TukeyLambdaParams p{location, scale, shape};
             p.validate();
             return p;
           }),
           py::arg("location") = 0.0, py::arg("scale") = 1.0, py::arg("shape") = 0.0)
      .def_readwrite("location", &TukeyLambdaParams::location)
      .def_readwrite("scale", &TukeyLambdaParams::scale)
      .def_readwrite("shape", &TukeyLambdaParams::shape)
      .def("__repr__", [](const TukeyLambdaParams& p) {
        return "TukeyLambdaParams(location=" + std::to_string(p.location) +
               ", scale=" + std::to_string(p.scale) + ", shape=" + std::to_string(p.shape) + ")";
      });

  m.def("tukey_quantile",
        [](const TukeyLambdaParams& params, double p) { return tukey_quantile(params, Probability(p)); },
        py::arg("params"), py::arg("p"));
  m.def("tukey_cdf",
        [](const TukeyLambdaParams& params, double x, double tol) {
          return tukey_cdf(params, x, tol).value();
        },
        py::arg("params"), py::arg("x"), py::arg("tol") = kDefaultCdfTolerance);
  m.def("tukey_samples",
        [](const TukeyLambdaParams& params, std::size_t n, std::uint64_t seed, std::uint64_t stream) {
          params.validate();
          return draw_many(n, seed, stream, [&](RngStream& r) { return tukey_sample(params, r); });
        },
        py::arg("params"), py::arg("n"), py::arg("seed") = 0, py::arg("stream") = 0);
  m.def("gaussian_samples",
        [](std::size_t n, std::uint64_t seed, std::uint64_t stream) {
          return draw_many(n, seed, stream, [](RngStream& r) { return gaussian_sample(r); });
        },
        py::arg("n"), py::arg("seed") = 0, py::arg("stream") = 0);
  m.def("cauchy_samples",
        [](std::size_t n, std::uint64_t seed, std::uint64_t stream) {
          return draw_many(n, seed, stream, [](RngStream& r) { return cauchy_sample(r); });
        },
        py::arg("n"), py::arg("seed") = 0, py::arg("stream") = 0);

  // Test functions
  m.def("ackley", [](const std::vector<double>& x) { return ackley(x); });
  m.def("rosenbrock", [](const std::vector<double>& x) { return rosenbrock(x); });
  m.def("sphere", [](const std::vector<double>& x) { return sphere(x); });

  // Dragonian geometry
  py::enum_<dragonian::FeedSign>(m, "FeedSign")
      .value("FRONT", dragonian::FeedSign::Front)
      .value("SIDE", dragonian::FeedSign::Side);

  py::class_<dragonian::Givens>(m, "Givens")
      .def(py::init([](double D, double theta_e, double theta_p) {
             return dragonian::Givens{D, theta_e, theta_p};
           }),
           py::arg("D") = 100.0, py::arg("theta_e") = 30.0, py::arg("theta_p") = -170.0)
      .def_readwrite("D", &dragonian::Givens::D)
      .def_readwrite("theta_e", &dragonian::Givens::theta_e)
      .def_readwrite("theta_p", &dragonian::Givens::theta_p);

  py::class_<dragonian::Vars>(m, "Vars")
      .def(py::init([](double theta_0, double f12) { return dragonian::Vars{theta_0, f12}; }),
           py::arg("theta_0") = -81.67, py::arg("f12") = 94.799)
      .def_readwrite("theta_0", &dragonian::Vars::theta_0)
      .def_readwrite("f12", &dragonian::Vars::f12);

  py::class_<dragonian::FitnessConfig>(m, "FitnessConfig")
      .def(py::init([](double d_cf0, double d_cs0, double penalty, dragonian::FeedSign sign) {
             return dragonian::FitnessConfig{d_cf0, d_cs0, penalty, sign};
           }),
           py::arg("d_cf0") = 1.0, py::arg("d_cs0") = 1.0, py::arg("penalty") = 1000.0,
           py::arg("feed_sign") = dragonian::FeedSign::Side)
      .def_readwrite("d_cf0", &dragonian::FitnessConfig::d_cf0)
      .def_readwrite("d_cs0", &dragonian::FitnessConfig::d_cs0)
      .def_readwrite("penalty", &dragonian::FitnessConfig::penalty)
      .def_readwrite("feed_sign", &dragonian::FitnessConfig::feed_sign);

  py::class_<dragonian::Derived>(m, "Derived")
      .def_readonly("theta_p", &dragonian::Derived::theta_p)
      .def_readonly("gamma", &dragonian::Derived::gamma)
      .def_readonly("alpha", &dragonian::Derived::alpha_feed)
      .def_readonly("beta", &dragonian::Derived::beta_tilt)
      .def_readonly("M", &dragonian::Derived::M)
      .def_readonly("e", &dragonian::Derived::e)
      .def_readonly("F_e", &dragonian::Derived::F_e)
      .def_readonly("F", &dragonian::Derived::F)
      .def_readonly("l_sm", &dragonian::Derived::l_sm)
      .def_readonly("d_cf", &dragonian::Derived::d_cf)
      .def_readonly("d_cs", &dragonian::Derived::d_cs)
      .def_readonly("valid", &dragonian::Derived::valid)
      .def_readonly("invalid_reason", &dragonian::Derived::invalid_reason);

  m.def("derive_geometry", &dragonian::derive_geometry, py::arg("givens"), py::arg("vars"),
        py::arg("sign") = dragonian::FeedSign::Side);
  m.def("design_condition_residuals", &dragonian::design_condition_residuals, py::arg("derived"),
        py::arg("vars"));
  m.def("dragonian_fitness", &dragonian::dragonian_fitness, py::arg("givens"), py::arg("vars"),
        py::arg("fc") = dragonian::FitnessConfig{});
  m.def("cross_section",
        [](const dragonian::Givens& g, const dragonian::Vars& v, const dragonian::Derived& d) {
          std::vector<std::tuple<std::string, double, double>> out;
          for (const auto& p : dragonian::cross_section(g, v, d)) out.emplace_back(p.label, p.x, p.z);
          return out;
        });

  // Optimizer
  py::enum_<Scheme>(m, "Scheme")
      .value("SCHEME1", Scheme::Scheme1)
      .value("SCHEME2", Scheme::Scheme2)
      .value("SCHEME3", Scheme::Scheme3);

  py::class_<SchemeConfig>(m, "SchemeConfig")
      .def(py::init<>())
      .def_readwrite("scheme", &SchemeConfig::scheme)
      .def_readwrite("k", &SchemeConfig::k)
      .def_readwrite("beta_min", &SchemeConfig::beta_min)
      .def_readwrite("beta_range", &SchemeConfig::beta_range)
      .def_readwrite("lambda_min", &SchemeConfig::lambda_min)
      .def_readwrite("lambda_range", &SchemeConfig::lambda_range)
      .def_property_readonly("population_size", &SchemeConfig::population_size);

  py::class_<EvolutionConfig>(m, "EvolutionConfig")
      .def(py::init<>())
      .def_readwrite("mu", &EvolutionConfig::mu)
      .def_readwrite("q", &EvolutionConfig::q)
      .def_readwrite("max_evaluations", &EvolutionConfig::max_evaluations)
      .def_property(
          "bounds",
          [](const EvolutionConfig& c) {
            std::vector<std::pair<double, double>> out;
            for (const auto& b : c.bounds) out.emplace_back(b.low, b.high);
            return out;
          },
          [](EvolutionConfig& c, const std::vector<std::pair<double, double>>& bounds) {
            c.bounds.clear();
            for (const auto& [lo, hi] : bounds) c.bounds.push_back({lo, hi});
          })
      .def_readwrite("eta_floor", &EvolutionConfig::eta_floor)
      .def_readwrite("eta_init", &EvolutionConfig::eta_init)
      .def_readwrite("seed", &EvolutionConfig::seed)
      .def_readwrite("stream", &EvolutionConfig::stream);

  py::class_<EvolutionResult>(m, "EvolutionResult")
      .def_property_readonly("trajectory",
                             [](const EvolutionResult& r) {
                               py::list out;
                               for (const auto& g : r.trajectory) out.append(record_tuple(g));
                               return out;
                             })
      .def_property_readonly("best_x", [](const EvolutionResult& r) { return r.best.x; })
      .def_property_readonly("best_fitness", [](const EvolutionResult& r) { return r.best.fitness; })
      .def_readonly("evaluations", &EvolutionResult::evaluations)
      .def_readonly("non_finite_evaluations", &EvolutionResult::non_finite_evaluations)
      .def_property_readonly("generations", &EvolutionResult::generations);

  m.def(
      "evolve",
      [](const std::function<double(std::vector<double>)>& objective, const EvolutionConfig& config,
         const SchemeConfig& scheme) {
        return evolve(
            [&objective](std::span<const double> x) {
              return objective(std::vector<double>(x.begin(), x.end()));
            },
            config, scheme);
      },
      py::arg("objective"), py::arg("config"), py::arg("scheme"));

  // Harness. Configs and results cross the boundary as JSON text; the Python
  // package wraps these in dict-based helpers.
  m.def(
      "run_experiment_json",
      [](const std::string& config_json, std::size_t workers, const std::string& out_dir) {
        const auto config = nlohmann::json::parse(config_json).get<ExperimentConfig>();
        ExperimentResult result;
        {
          py::gil_scoped_release release;
          result = run_experiment(config, workers);
          if (!out_dir.empty()) emit_results(result, out_dir, result.config.format);
        }
        nlohmann::json aggregate = nlohmann::json::array();
        for (const auto& a : result.aggregate) {
          aggregate.push_back({a.generation, a.evaluations, a.overall_best, a.mean_best, a.std_best});
        }
        nlohmann::json trajectories = nlohmann::json::array();
        for (const auto& t : result.trials) {
          nlohmann::json rows = nlohmann::json::array();
          for (const auto& g : t.trajectory) {
            rows.push_back({g.generation, g.evaluations, g.best_of_generation, g.best_so_far});
          }
          trajectories.push_back(rows);
        }
        return nlohmann::json{{"manifest", manifest_json(result)},
                              {"aggregate", aggregate},
                              {"trajectories", trajectories}}
            .dump();
      },
      py::arg("config_json"), py::arg("workers") = 0, py::arg("out_dir") = "");

  m.def(
      "grid_search_oracle",
      [](const dragonian::Givens& g, const dragonian::FitnessConfig& fc,
         std::pair<double, double> theta0_range, std::pair<double, double> f12_range, double step) {
        const OracleResult r = grid_search_oracle(g, fc, {theta0_range.first, theta0_range.second},
                                                  {f12_range.first, f12_range.second}, step);
        return py::make_tuple(r.vars.theta_0, r.vars.f12, r.fitness);
      },
      py::arg("givens"), py::arg("fc"), py::arg("theta0_range"), py::arg("f12_range"),
      py::arg("step"));

  m.def(
      "cli_main",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"tukey-ep"};
        for (const auto& a : args) argv.push_back(a.c_str());
        py::scoped_ostream_redirect out(std::cout, py::module_::import("sys").attr("stdout"));
        py::scoped_ostream_redirect err(std::cerr, py::module_::import("sys").attr("stderr"));
        return cli_main(static_cast<int>(argv.size()), argv.data());
      },
      py::arg("args"));
}
