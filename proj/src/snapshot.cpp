#include "srsp/snapshot.hpp"

#include <stdexcept>
#include <string>

namespace srsp {
namespace {

using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& what) {
  throw std::runtime_error("snapshot: " + what);
}

const ordered_json& require(const Snapshot& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key)) {
    fail(std::string("missing key \"") + key + "\" in " + where);
  }
  return j.at(key);
}

double require_number(const Snapshot& j, const char* key, const char* where) {
  const auto& v = require(j, key, where);
  if (!v.is_number()) fail(std::string("key \"") + key + "\" in " + where + " must be a number");
  return v.get<double>();
}

std::vector<int> require_int_list(const Snapshot& j, const char* key, const char* where) {
  const auto& v = require(j, key, where);
  if (!v.is_array()) fail(std::string("key \"") + key + "\" in " + where + " must be an array");
  std::vector<int> out;
  for (const auto& e : v) {
    if (!e.is_number_integer()) {
      fail(std::string("key \"") + key + "\" in " + where + " must hold integers");
    }
    out.push_back(e.get<int>());
  }
  return out;
}

Eigen::VectorXd require_real_list(const Snapshot& j, const char* key, const char* where) {
  const auto& v = require(j, key, where);
  if (!v.is_array()) fail(std::string("key \"") + key + "\" in " + where + " must be an array");
  Eigen::VectorXd out(v.size());
  Eigen::Index i = 0;
  for (const auto& e : v) {
    if (!e.is_number()) fail(std::string("key \"") + key + "\" in " + where + " must hold numbers");
    out[i++] = e.get<double>();
  }
  return out;
}

ordered_json domain_to_json(const DomainSpec& d) {
  return ordered_json{{"lengths", d.lengths},
                      {"modes", d.modes},
                      {"mass", d.mass},
                      {"grid_oversample", d.grid_oversample}};
}

DomainSpec domain_from_json(const Snapshot& j) {
  DomainSpec d;
  const auto& lengths = require(j, "lengths", "domain");
  if (!lengths.is_array()) fail("domain lengths must be an array");
  d.lengths = lengths.get<std::vector<double>>();
  d.dim = static_cast<int>(d.lengths.size());
  d.modes = require_int_list(j, "modes", "domain");
  d.mass = require_number(j, "mass", "domain");
  const auto& over = require(j, "grid_oversample", "domain");
  if (!over.is_number_integer()) fail("domain grid_oversample must be an integer");
  d.grid_oversample = over.get<int>();
  d.validate();
  return d;
}

ordered_json field_to_json(const ModeField& f) {
  return ordered_json{{"mode_counts", f.mode_counts()},
                      {"coefficients", std::vector<double>(f.coeffs().begin(), f.coeffs().end())}};
}

ModeField field_from_json(const DomainSpec& d, const Snapshot& j, const char* where) {
  const std::vector<int> counts = require_int_list(j, "mode_counts", where);
  Eigen::VectorXd coeffs = require_real_list(j, "coefficients", where);
  ModeField out(d, counts);
  if (coeffs.size() != out.coeffs().size()) fail(std::string(where) + " coefficient count mismatch");
  out.coeffs() = std::move(coeffs);
  return out;
}

}  // namespace

Snapshot state_to_json(const MixedState& state) {
  ordered_json orbitals = ordered_json::array();
  const auto& psi = state.orbitals();
  for (Eigen::Index k = 0; k < psi.cols(); ++k) {
    ordered_json column = ordered_json::array();
    for (Eigen::Index a = 0; a < psi.rows(); ++a) {
      column.push_back(ordered_json::array({psi(a, k).real(), psi(a, k).imag()}));
    }
    orbitals.push_back(std::move(column));
  }
  return ordered_json{
      {"format", "srsp-state"},
      {"version", 1},
      {"domain", domain_to_json(state.domain())},
      {"mode_counts", state.mode_counts()},
      {"occupations",
       std::vector<double>(state.occupations().begin(), state.occupations().end())},
      {"orbitals", std::move(orbitals)}};
}

MixedState state_from_json(const Snapshot& j) {
  if (require(j, "format", "state") != "srsp-state") fail("format must be \"srsp-state\"");
  if (require(j, "version", "state") != 1) fail("unsupported state version");
  const DomainSpec domain = domain_from_json(require(j, "domain", "state"));
  const std::vector<int> counts = require_int_list(j, "mode_counts", "state");
  const Eigen::VectorXd occupations = require_real_list(j, "occupations", "state");

  const auto& orbitals = require(j, "orbitals", "state");
  if (!orbitals.is_array() || orbitals.size() != static_cast<std::size_t>(occupations.size())) {
    fail("orbitals must hold one column per occupation");
  }
  long rows = 1;
  for (int c : counts) rows *= c;
  Eigen::MatrixXcd psi(rows, occupations.size());
  Eigen::Index k = 0;
  for (const auto& column : orbitals) {
    if (!column.is_array() || column.size() != static_cast<std::size_t>(rows)) {
      fail("orbital " + std::to_string(k) + " has the wrong coefficient count");
    }
    Eigen::Index a = 0;
    for (const auto& pair : column) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
        fail("orbital coefficients must be [re, im] pairs");
      }
      psi(a++, k) = {pair[0].get<double>(), pair[1].get<double>()};
    }
    ++k;
  }
  return MixedState(domain, counts, std::move(psi), occupations);
}

Snapshot solution_to_json(const StationarySolution& sol) {
  return ordered_json{
      {"format", "srsp-solution"},
      {"version", 1},
      {"sigma0", sol.sigma0},
      {"phi_value", sol.phi_value},
      {"residual_poisson", sol.residual_poisson},
      {"residual_constraint", sol.residual_constraint},
      {"occupation_tail", sol.occupation_tail},
      {"mu", std::vector<double>(sol.mu.begin(), sol.mu.end())},
      {"v0", field_to_json(sol.v0)},
      {"state", state_to_json(sol.state)}};
}

StationarySolution solution_from_json(const Snapshot& j) {
  if (require(j, "format", "solution") != "srsp-solution") {
    fail("format must be \"srsp-solution\"");
  }
  if (require(j, "version", "solution") != 1) fail("unsupported solution version");
  MixedState state = state_from_json(require(j, "state", "solution"));
  ModeField v0 = field_from_json(state.domain(), require(j, "v0", "solution"), "v0");
  return StationarySolution{.v0 = std::move(v0),
                            .sigma0 = require_number(j, "sigma0", "solution"),
                            .mu = require_real_list(j, "mu", "solution"),
                            .state = std::move(state),
                            .phi_value = require_number(j, "phi_value", "solution"),
                            .residual_poisson = require_number(j, "residual_poisson", "solution"),
                            .residual_constraint =
                                require_number(j, "residual_constraint", "solution"),
                            .occupation_tail = require_number(j, "occupation_tail", "solution")};
}

Snapshot parse_snapshot(const std::string& text) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(e.what());
  }
}

}  // namespace srsp
