#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ptrans/estimate.hpp"
#include "ptrans/harness.hpp"
#include "ptrans/io.hpp"

namespace {

using namespace ptrans;

Lattice parse_grid(const std::string& text) {
  Lattice lattice;
  std::stringstream stream(text);
  std::string cell;
  std::vector<double> fields;
  while (std::getline(stream, cell, ',')) fields.push_back(std::stod(cell));
  if (fields.size() != 5 && fields.size() != 6) {
    throw CLI::ValidationError("--grid", "expected x_min,x_max,y_min,y_max,N[,Ny]");
  }
  lattice.x_min = fields[0];
  lattice.x_max = fields[1];
  lattice.y_min = fields[2];
  lattice.y_max = fields[3];
  lattice.nx = static_cast<int>(fields[4]);
  lattice.ny = fields.size() == 6 ? static_cast<int>(fields[5]) : lattice.nx;
  lattice.validate();
  return lattice;
}

// "benchmark" selects the built-in five-component model; anything else is a
// JSON file path.
ComplexMeasure resolve_measure(const std::string& path) {
  if (path == "benchmark") return benchmark_measure();
  return read_measure_json(path);
}

void print_table(std::ostream& out, const ParamStats& stats) {
  out << "parameter,true_re,true_im,bias_re,bias_im,sd,mse\n";
  const int p = static_cast<int>(stats.xi_true.size());
  char line[256];
  std::snprintf(line, sizeof(line), "p,%d,0,%.6g,0,%.6g,%.6g\n", p, stats.p_bias, stats.p_sd,
                stats.p_mse);
  out << line;
  for (int k = 0; k < p && stats.accepted > 0; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    std::snprintf(line, sizeof(line), "xi_%d,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g\n", k + 1,
                  stats.xi_true[idx].real(), stats.xi_true[idx].imag(),
                  stats.xi_bias[idx].real(), stats.xi_bias[idx].imag(), stats.xi_sd[idx],
                  stats.xi_mse[idx]);
    out << line;
    std::snprintf(line, sizeof(line), "c_%d,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g\n", k + 1,
                  stats.c_true[idx].real(), stats.c_true[idx].imag(), stats.c_bias[idx].real(),
                  stats.c_bias[idx].imag(), stats.c_sd[idx], stats.c_mse[idx]);
    out << line;
  }
  std::snprintf(line, sizeof(line), "acceptance_rate,%.6g,,,,,\n", stats.acceptance_rate);
  out << line;
  std::snprintf(line, sizeof(line), "a_res,%.6g,,,,,\n", stats.a_res);
  out << line;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"discrete complex measures from noisy moments"};
  app.require_subcommand(1);

  std::string measure_path, moments_path, out_path, poles_path, ptrans_path, modulus_path;
  std::string grid_text = "-1.5,1.5,-1.5,1.5,200";
  std::string mode = "analytic";
  int n = 80;
  double sigma = 0.0;
  double sigma_prime = -1.0;
  double sigma_prime_ratio = 1e-4;
  int R = 100;
  int M = 50;
  int trials = 10000;
  double tau = 0.5;
  double radius = -1.0;
  double min_height = 0.05;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  auto* gen = app.add_subcommand("gen", "sample noisy moments of a measure");
  gen->add_option("--measure", measure_path, "measure JSON path, or 'benchmark' for the built-in model")->required();
  gen->add_option("--n", n, "moment count (even)")->required();
  gen->add_option("--sigma", sigma, "noise level (0 = clean)");
  gen->add_option("--seed", seed, "rng seed");
  gen->add_option("--stream", stream, "rng stream");
  gen->add_option("--out", out_path, "moments CSV")->required();

  auto* pt = app.add_subcommand("ptransform", "pseudosample-averaged transform of moments");
  pt->add_option("--moments", moments_path, "moments CSV")->required();
  pt->add_option("--R", R, "pseudosample count");
  pt->add_option("--sigma", sigma, "noise level of the input moments");
  pt->add_option("--sigma-prime", sigma_prime, "absolute perturbation level");
  pt->add_option("--sigma-prime-ratio", sigma_prime_ratio,
                 "perturbation variance as a fraction of sigma^2");
  pt->add_option("--grid", grid_text, "x_min,x_max,y_min,y_max,N[,Ny]");
  pt->add_option("--seed", seed, "rng seed");
  pt->add_option("--stream", stream, "rng stream");
  pt->add_option("--out", out_path, "transform grid CSV")->required();
  pt->add_option("--poles", poles_path, "pole pool CSV");
  pt->add_option("--modulus-out", modulus_path, "modulus grid CSV");

  auto* est = app.add_subcommand("estimate", "cluster a transform grid into parameters");
  est->add_option("--ptrans", ptrans_path, "transform grid CSV")->required();
  est->add_option("--poles", poles_path, "pole pool CSV")->required();
  est->add_option("--tau", tau, "cluster cardinality threshold");
  est->add_option("--radius", radius, "cluster radius (default 5 lattice spacings)");
  est->add_option("--min-height", min_height, "peak height fraction of the global max");
  est->add_option("--out", out_path, "estimate JSON")->required();

  auto* den = app.add_subcommand("density", "condensed pole densities");
  den->add_option("--mode", mode, "mc | analytic | closed2 | purenoise")->required();
  den->add_option("--measure", measure_path, "measure JSON path, or 'benchmark' for the built-in model");
  den->add_option("--n", n, "moment count (even)");
  den->add_option("--sigma", sigma, "noise level");
  den->add_option("--trials", trials, "mc trials");
  den->add_option("--grid", grid_text, "x_min,x_max,y_min,y_max,N[,Ny]");
  den->add_option("--seed", seed, "rng seed");
  den->add_option("--stream", stream, "rng stream");
  den->add_option("--out", out_path, "density grid CSV")->required();

  auto* table = app.add_subcommand("table1", "parameter recovery benchmark");
  table->add_option("--measure", measure_path, "measure JSON path or 'benchmark' (default: built-in benchmark)");
  table->add_option("--n", n, "moment count (even)");
  table->add_option("--sigma", sigma, "data noise level");
  table->add_option("--M", M, "replications");
  table->add_option("--R", R, "pseudosamples per replication");
  table->add_option("--sigma-prime-ratio", sigma_prime_ratio,
                    "perturbation variance as a fraction of sigma^2");
  table->add_option("--grid", grid_text, "x_min,x_max,y_min,y_max,N[,Ny]");
  table->add_option("--tau", tau, "cluster cardinality threshold");
  table->add_option("--radius", radius, "cluster radius");
  table->add_option("--min-height", min_height, "peak height fraction");
  table->add_option("--seed", seed, "rng seed");
  table->add_option("--out", out_path, "summary CSV")->required();

  auto* fig = app.add_subcommand("fig2", "single-solve vs pool-averaged errors");
  fig->add_option("--measure", measure_path, "measure JSON path or 'benchmark' (default: built-in benchmark)");
  fig->add_option("--n", n, "moment count (even)");
  fig->add_option("--sigma", sigma, "data noise level");
  fig->add_option("--M", M, "replications");
  fig->add_option("--R", R, "pseudosamples per replication");
  fig->add_option("--sigma-prime-ratio", sigma_prime_ratio,
                  "perturbation variance as a fraction of sigma^2");
  fig->add_option("--seed", seed, "rng seed");
  fig->add_option("--out", out_path, "per-replication CSV")->required();

  auto* radii = app.add_subcommand("radii", "support radii from the analytic density");
  radii->add_option("--measure", measure_path, "measure JSON path or 'benchmark' (default: built-in benchmark)");
  radii->add_option("--n", n, "moment count (even)");
  radii->add_option("--sigma", sigma, "noise level");
  radii->add_option("--grid", grid_text, "lattice supplying the stencil spacing");
  radii->add_option("--out", out_path, "radii CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const ComplexMeasure measure = resolve_measure(measure_path);
      MomentSequence moments = gen_moments(measure, n);
      if (sigma > 0.0) {
        moments = add_noise(moments, NoiseSpec{sigma, seed, stream});
        std::cout << "snr " << snr(measure, sigma) << '\n';
      }
      write_moments_csv(out_path, moments);
    } else if (pt->parsed()) {
      MomentSequence data = read_moments_csv(moments_path);
      data.sigma = sigma;
      double sp = sigma_prime;
      if (sp < 0.0) {
        if (sigma <= 0.0) {
          throw std::invalid_argument(
              "need --sigma (with --sigma-prime-ratio) or an explicit --sigma-prime");
        }
        sp = sigma * std::sqrt(sigma_prime_ratio);
      }
      const Lattice lattice = parse_grid(grid_text);
      const PTransformResult result =
          ptransform(data, lattice, R, sp, NoiseSpec{0.0, seed, stream});
      write_grid_csv(out_path, result.grid);
      if (!poles_path.empty()) write_pool_csv(poles_path, result.pool);
      if (!modulus_path.empty()) write_grid_csv(modulus_path, result.grid_modulus);
      std::cout << "mass " << lattice_mass(result.grid) << " failed_draws "
                << result.pool.failed << '\n';
    } else if (est->parsed()) {
      PTransformResult transform;
      transform.grid = read_grid_csv(ptrans_path);
      transform.grid_modulus = transform.grid;
      transform.pool = read_pool_csv(poles_path);
      const EstimationResult result = estimate_params(transform, tau, radius, min_height);
      write_estimation_json(out_path, result);
      std::cout << "p_hat " << result.p_hat << " candidates " << result.n_candidates << '\n';
    } else if (den->parsed()) {
      const Lattice lattice = parse_grid(grid_text);
      if (mode == "purenoise") {
        GridField field = GridField::zeros(lattice);
        for (int iy = 0; iy < lattice.ny; ++iy) {
          for (int ix = 0; ix < lattice.nx; ++ix) {
            field.at(ix, iy) = pure_noise_density(n, lattice.point(ix, iy));
          }
        }
        write_grid_csv(out_path, field);
      } else if (mode == "closed2") {
        const ComplexMeasure measure = resolve_measure(measure_path);
        const MomentSequence s = gen_moments(measure, 2);
        GridField field = GridField::zeros(lattice);
        for (int iy = 0; iy < lattice.ny; ++iy) {
          for (int ix = 0; ix < lattice.nx; ++ix) {
            field.at(ix, iy) =
                h2_closed_form(s.values[0], s.values[1], sigma, lattice.point(ix, iy));
          }
        }
        write_grid_csv(out_path, field);
      } else if (mode == "analytic") {
        const ComplexMeasure measure = resolve_measure(measure_path);
        write_grid_csv(out_path, analytic_density(measure, n, sigma, lattice));
      } else if (mode == "mc") {
        const ComplexMeasure measure = resolve_measure(measure_path);
        const McDensity result = mc_condensed_density(measure, n, sigma, lattice, trials,
                                                      NoiseSpec{0.0, seed, stream});
        write_grid_csv(out_path, result.density);
        std::cout << "resampled " << result.resampled << '\n';
      } else {
        throw std::invalid_argument("unknown density mode: " + mode);
      }
    } else if (table->parsed() || fig->parsed()) {
      CLI::App* sub = table->parsed() ? table : fig;
      ExperimentConfig config = benchmark_config();
      if (!measure_path.empty()) config.measure = resolve_measure(measure_path);
      if (sub->count("--sigma") > 0) config.sigma = sigma;
      config.n = n;
      config.M = sub->count("--M") > 0 ? M : (table->parsed() ? config.M : 100);
      config.R = R;
      if (fig->parsed() && fig->count("--sigma-prime-ratio") == 0) {
        sigma_prime_ratio = 0.64;
      }
      config.sigma_prime = config.sigma * std::sqrt(sigma_prime_ratio);
      if (seed != 0) config.seed = seed;
      if (table->parsed()) {
        if (table->count("--grid") > 0) config.lattice = parse_grid(grid_text);
        if (table->count("--tau") > 0) config.tau = tau;
        if (table->count("--radius") > 0) config.radius = radius;
        if (table->count("--min-height") > 0) config.min_height = min_height;
        const ParamStats stats = run_table1(config);
        auto out = std::ofstream(out_path);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        print_table(out, stats);
        print_table(std::cout, stats);
        std::cout << "accepted " << stats.accepted << "/" << stats.requested << '\n';
      } else {
        const ErrorComparison cmp = run_error_comparison(config);
        auto out = std::ofstream(out_path);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        out << "m,e0,eR\n";
        for (std::size_t i = 0; i < cmp.e0.size(); ++i) {
          out << i << ',' << cmp.e0[i] << ',' << cmp.eR[i] << '\n';
        }
        std::cout << "fraction_eR_smaller " << cmp.fraction_eR_smaller << " mean_e0 "
                  << cmp.mean_e0 << " mean_eR " << cmp.mean_eR << " failed " << cmp.failed
                  << '\n';
      }
    } else if (radii->parsed()) {
      ComplexMeasure measure =
          measure_path.empty() ? benchmark_measure() : resolve_measure(measure_path);
      const Lattice lattice = parse_grid(grid_text);
      const auto result = support_radii(measure, n, sigma, lattice);
      auto out = std::ofstream(out_path);
      if (!out) throw std::runtime_error("cannot write " + out_path);
      out << "j,re_node,im_node,found,radius\n";
      for (std::size_t j = 0; j < result.size(); ++j) {
        out << (j + 1) << ',' << measure.nodes[j].real() << ',' << measure.nodes[j].imag()
            << ',' << (result[j].found ? 1 : 0) << ',' << result[j].radius << '\n';
      }
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
