#include "balload/json_io.hpp"

#include <cstdio>
#include <ostream>

namespace balload {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

nlohmann::json loads_to_json(const Graph& g, const LoadVector& loads, const Allocation& a) {
  nlohmann::json theta = nlohmann::json::array();
  for (int o = 0; o < g.num_oriented(); ++o) {
    theta.push_back({g.tail(o), g.head(o), a.num_edges() == 0 ? 0.0 : a.theta(o)});
  }
  return {{"loads", loads}, {"theta", theta}};
}

nlohmann::json density_to_json(const DensityResult& densest, const DensityDecomposition* blocks) {
  nlohmann::json out = {{"rho_num", densest.rho.num()},
                        {"rho_den", densest.rho.den()},
                        {"rho", densest.rho.to_double()},
                        {"H", densest.vertices}};
  nlohmann::json list = nlohmann::json::array();
  if (blocks != nullptr) {
    for (const auto& b : blocks->blocks) {
      list.push_back({{"density_num", b.density.num()},
                      {"density_den", b.density.den()},
                      {"vertices", b.vertices}});
    }
  }
  out["blocks"] = list;
  return out;
}

nlohmann::json phi_to_json(const PhiEstimate& est) {
  return {{"t", est.t},
          {"phi", est.phi},
          {"stderr", est.stderr_},
          {"branch", to_string(est.branch)},
          {"sweeps", est.sweeps},
          {"residual", est.residual},
          {"converged", est.converged},
          {"tail", est.tail},
          {"tail_stderr", est.tail_stderr}};
}

void write_loads_csv(std::ostream& out, std::span<const double> loads) {
  out << "vertex,load\n";
  for (std::size_t v = 0; v < loads.size(); ++v) out << v << ',' << format_double(loads[v]) << '\n';
}

}  // namespace balload
