#include "ptrans/io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ptrans {

namespace {

std::string fmt(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot read " + path);
  }
  return in;
}

std::vector<double> split_csv(const std::string& line) {
  std::vector<double> fields;
  std::stringstream stream(line);
  std::string cell;
  while (std::getline(stream, cell, ',')) {
    fields.push_back(std::stod(cell));
  }
  return fields;
}

bool numeric_start(const std::string& line) {
  for (char c : line) {
    if (c == ' ' || c == '\t') continue;
    return (c >= '0' && c <= '9') || c == '-' || c == '+' || c == '.';
  }
  return false;
}

nlohmann::json complex_json(Complex z) {
  return nlohmann::json{{"re", z.real()}, {"im", z.imag()}};
}

Complex json_complex(const nlohmann::json& j) {
  return {j.at("re").get<double>(), j.at("im").get<double>()};
}

}  // namespace

void write_moments_csv(const std::string& path, const MomentSequence& moments) {
  auto out = open_out(path);
  out << "k,re,im\n";
  for (int k = 0; k < moments.n(); ++k) {
    const auto& v = moments.values[static_cast<std::size_t>(k)];
    out << k << ',' << fmt(v.real()) << ',' << fmt(v.imag()) << '\n';
  }
}

MomentSequence read_moments_csv(const std::string& path) {
  auto in = open_in(path);
  MomentSequence moments;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || !numeric_start(line)) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 3) {
      throw std::runtime_error("moments row needs k,re,im: " + line);
    }
    const auto k = static_cast<std::size_t>(fields[0]);
    if (moments.values.size() <= k) moments.values.resize(k + 1);
    moments.values[k] = {fields[1], fields[2]};
  }
  if (moments.values.empty()) {
    throw std::runtime_error("no moments in " + path);
  }
  return moments;
}

void write_measure_json(const std::string& path, const ComplexMeasure& measure) {
  nlohmann::json j;
  j["nodes"] = nlohmann::json::array();
  j["weights"] = nlohmann::json::array();
  for (const auto& xi : measure.nodes) j["nodes"].push_back(complex_json(xi));
  for (const auto& c : measure.weights) j["weights"].push_back(complex_json(c));
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

ComplexMeasure read_measure_json(const std::string& path) {
  auto in = open_in(path);
  nlohmann::json j;
  in >> j;
  ComplexMeasure measure;
  for (const auto& item : j.at("nodes")) measure.nodes.push_back(json_complex(item));
  for (const auto& item : j.at("weights")) measure.weights.push_back(json_complex(item));
  measure.validate();
  return measure;
}

void write_grid_csv(const std::string& path, const GridField& field) {
  auto out = open_out(path);
  const Lattice& lattice = field.lattice;
  out << "# " << fmt(lattice.x_min) << ' ' << fmt(lattice.x_max) << ' ' << fmt(lattice.y_min)
      << ' ' << fmt(lattice.y_max) << ' ' << lattice.nx << ' ' << lattice.ny << '\n';
  for (int iy = 0; iy < lattice.ny; ++iy) {
    for (int ix = 0; ix < lattice.nx; ++ix) {
      if (ix > 0) out << ',';
      out << fmt(field.valid(ix, iy) ? field.at(ix, iy) : 0.0);
    }
    out << '\n';
  }
}

GridField read_grid_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line.empty() || line[0] != '#') {
    throw std::runtime_error("grid file must start with its extent header");
  }
  Lattice lattice;
  {
    std::stringstream stream(line.substr(1));
    if (!(stream >> lattice.x_min >> lattice.x_max >> lattice.y_min >> lattice.y_max >>
          lattice.nx >> lattice.ny)) {
      throw std::runtime_error("bad grid header: " + line);
    }
  }
  lattice.validate();
  GridField field = GridField::zeros(lattice);
  for (int iy = 0; iy < lattice.ny; ++iy) {
    if (!std::getline(in, line)) {
      throw std::runtime_error("grid file ended early");
    }
    const auto fields = split_csv(line);
    if (fields.size() != static_cast<std::size_t>(lattice.nx)) {
      throw std::runtime_error("grid row has wrong width");
    }
    for (int ix = 0; ix < lattice.nx; ++ix) {
      field.at(ix, iy) = fields[static_cast<std::size_t>(ix)];
    }
  }
  return field;
}

void write_pool_csv(const std::string& path, const PseudosamplePool& pool) {
  auto out = open_out(path);
  out << "r,re_pole,im_pole,re_res,im_res\n";
  for (std::size_t s = 0; s < pool.solutions.size(); ++s) {
    const auto& sol = pool.solutions[s];
    for (std::size_t j = 0; j < sol.poles.size(); ++j) {
      out << (s + 1) << ',' << fmt(sol.poles[j].real()) << ',' << fmt(sol.poles[j].imag())
          << ',' << fmt(sol.residues[j].real()) << ',' << fmt(sol.residues[j].imag()) << '\n';
    }
  }
}

PseudosamplePool read_pool_csv(const std::string& path) {
  auto in = open_in(path);
  std::map<int, PencilSolution> by_sample;
  std::string line;
  int max_r = 0;
  while (std::getline(in, line)) {
    if (line.empty() || !numeric_start(line)) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 5) {
      throw std::runtime_error("pool row needs r,re_pole,im_pole,re_res,im_res: " + line);
    }
    const int r = static_cast<int>(fields[0]);
    if (r < 1) {
      throw std::runtime_error("pseudosample indices are 1-based");
    }
    auto& sol = by_sample[r];
    sol.poles.emplace_back(fields[1], fields[2]);
    sol.residues.emplace_back(fields[3], fields[4]);
    max_r = std::max(max_r, r);
  }
  if (max_r == 0) {
    throw std::runtime_error("no pool rows in " + path);
  }
  PseudosamplePool pool;
  pool.R = max_r;
  pool.solutions.resize(static_cast<std::size_t>(max_r));
  for (auto& [r, sol] : by_sample) {
    pool.solutions[static_cast<std::size_t>(r - 1)] = std::move(sol);
  }
  return pool;
}

void write_solution_csv(const std::string& path, const PencilSolution& solution) {
  auto out = open_out(path);
  out << "re_pole,im_pole,re_res,im_res\n";
  for (std::size_t j = 0; j < solution.poles.size(); ++j) {
    out << fmt(solution.poles[j].real()) << ',' << fmt(solution.poles[j].imag()) << ','
        << fmt(solution.residues[j].real()) << ',' << fmt(solution.residues[j].imag()) << '\n';
  }
}

PencilSolution read_solution_csv(const std::string& path) {
  auto in = open_in(path);
  PencilSolution solution;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || !numeric_start(line)) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 4) {
      throw std::runtime_error("solution row needs re_pole,im_pole,re_res,im_res: " + line);
    }
    solution.poles.emplace_back(fields[0], fields[1]);
    solution.residues.emplace_back(fields[2], fields[3]);
  }
  if (solution.poles.empty()) {
    throw std::runtime_error("no solution rows in " + path);
  }
  return solution;
}

void write_estimation_json(const std::string& path, const EstimationResult& result) {
  nlohmann::json j;
  j["p_hat"] = result.p_hat;
  j["nodes"] = nlohmann::json::array();
  j["weights"] = nlohmann::json::array();
  j["clusters"] = nlohmann::json::array();
  for (const auto& xi : result.nodes_hat) j["nodes"].push_back(complex_json(xi));
  for (const auto& c : result.weights_hat) j["weights"].push_back(complex_json(c));
  for (const auto& cluster : result.clusters) {
    j["clusters"].push_back(nlohmann::json{{"candidate", complex_json(cluster.candidate)},
                                           {"fraction", cluster.cardinality_fraction},
                                           {"size", cluster.members.size()}});
  }
  if (result.residual_amplitude.has_value()) {
    j["residual_amplitude"] = *result.residual_amplitude;
  }
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace ptrans
