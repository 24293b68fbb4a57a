#include "srsp/text_io.hpp"

#include <charconv>
#include <stdexcept>
#include <system_error>

#include "srsp/stability.hpp"

namespace srsp {
namespace {

std::string to_chars_string(double v, std::to_chars_result (*emit)(char*, char*, double)) {
  char buf[64];
  const auto res = emit(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc()) throw std::runtime_error("text_io: number formatting failed");
  return std::string(buf, res.ptr);
}

}  // namespace

std::string format_shortest(double v) {
  return to_chars_string(
      v, [](char* first, char* last, double x) { return std::to_chars(first, last, x); });
}

std::string format_sig17(double v) {
  return to_chars_string(v, [](char* first, char* last, double x) {
    return std::to_chars(first, last, x, std::chars_format::general, 17);
  });
}

std::string convergence_csv(const std::vector<ScfIterationRecord>& history) {
  std::string out = "iteration,phi,residual_poisson,residual_constraint,sigma,damping\n";
  for (const auto& rec : history) {
    out += std::to_string(rec.iteration);
    out += ',';
    out += format_shortest(rec.phi);
    out += ',';
    out += format_shortest(rec.residual_poisson);
    out += ',';
    out += format_shortest(rec.residual_constraint);
    out += ',';
    out += format_shortest(rec.sigma);
    out += ',';
    out += format_shortest(rec.damping);
    out += '\n';
  }
  return out;
}

std::string trajectory_csv(const TrajectoryRecord& record) {
  std::string out = "t,energy,casimir,ortho_defect,hminus1_dist,mass\n";
  for (std::size_t i = 0; i < record.rows(); ++i) {
    out += format_shortest(record.times[i]);
    out += ',';
    out += format_shortest(record.energy[i]);
    out += ',';
    out += format_shortest(record.casimir[i]);
    out += ',';
    out += format_shortest(record.ortho_defect[i]);
    out += ',';
    out += format_shortest(record.hminus1_dist[i]);
    out += ',';
    out += format_shortest(record.mass[i]);
    out += '\n';
  }
  return out;
}

std::string stability_csv(const StabilityReport& report) {
  std::string out = "epsilon,seed,casimir_gap,max_lhs,violation_margin,pass\n";
  for (const auto& cell : report.cells) {
    out += format_shortest(cell.epsilon);
    out += ',';
    out += std::to_string(cell.seed);
    out += ',';
    out += format_shortest(cell.casimir_gap);
    out += ',';
    out += format_shortest(cell.max_lhs);
    out += ',';
    out += format_shortest(cell.violation_margin);
    out += ',';
    out += cell.pass ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string profiles_csv(const DomainSpec& domain, const ModeField& v0, const ModeField& n0) {
  domain.validate();
  if (v0.mode_counts() != domain.grid_counts() || n0.mode_counts() != domain.grid_counts()) {
    throw std::invalid_argument("profiles_csv: fields must carry the full grid mode set");
  }
  std::string out;
  if (domain.dim == 1) {
    out = "x,V0,n0\n";
  } else {
    for (int a = 0; a < domain.dim; ++a) {
      out += 'x';
      out += std::to_string(a + 1);
      out += ',';
    }
    out += "V0,n0\n";
  }
  const Eigen::VectorXd v_grid = to_grid(v0);
  const Eigen::VectorXd n_grid = to_grid(n0);
  const std::vector<int> grid = domain.grid_counts();
  for (int j = 0; j < domain.grid_total(); ++j) {
    const MultiIndex node = unflatten_index(grid, j);
    for (int a = 0; a < domain.dim; ++a) {
      out += format_sig17(node[a] * domain.lengths[a] / (grid[a] + 1));
      out += ',';
    }
    out += format_sig17(v_grid[j]);
    out += ',';
    out += format_sig17(n_grid[j]);
    out += '\n';
  }
  return out;
}

}  // namespace srsp
