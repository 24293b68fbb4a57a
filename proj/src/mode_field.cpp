#include "srsp/mode_field.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace srsp {
namespace {

int product(const std::vector<int>& v) {
  return std::accumulate(v.begin(), v.end(), 1, std::multiplies<int>());
}

void check_counts(const DomainSpec& d, const std::vector<int>& counts) {
  if (static_cast<int>(counts.size()) != d.dim) {
    throw std::invalid_argument("mode counts: dimension mismatch");
  }
  const auto grid = d.grid_counts();
  for (int i = 0; i < d.dim; ++i) {
    if (counts[i] < 1 || counts[i] > grid[i]) {
      std::ostringstream msg;
      msg << "mode counts: axis " << i << " must lie in [1, " << grid[i] << "], got " << counts[i];
      throw std::invalid_argument(msg.str());
    }
  }
}

// Synthesis matrix for one axis: entry (j, k) = sqrt(2/L) sin((k+1) pi (j+1) / (G+1)).
// Its columns are the basis functions sampled on the interior grid; with the
// node weight L/(G+1) they are exactly orthonormal, so analysis is the
// weighted transpose.
const Eigen::MatrixXd& axis_synthesis(double length, int grid_pts) {
  static std::mutex mtx;
  static std::map<std::pair<double, int>, std::unique_ptr<Eigen::MatrixXd>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto& slot = cache[{length, grid_pts}];
  if (!slot) {
    auto mat = std::make_unique<Eigen::MatrixXd>(grid_pts, grid_pts);
    const double scale = std::sqrt(2.0 / length);
    for (int j = 0; j < grid_pts; ++j) {
      for (int k = 0; k < grid_pts; ++k) {
        (*mat)(j, k) = scale * std::sin((k + 1) * M_PI * (j + 1) / (grid_pts + 1));
      }
    }
    slot = std::move(mat);
  }
  return *slot;
}

// Applies one matrix per axis to a row-major tensor with an extra slowest
// batch axis; shape is consumed in place.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> apply_separable(
    const DomainSpec& d, std::vector<int> shape, int batch,
    const std::vector<Eigen::MatrixXd>& ops, Eigen::Matrix<Scalar, Eigen::Dynamic, 1> buf) {
  using RM = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  for (int a = 0; a < d.dim; ++a) {
    const Eigen::MatrixXd& T = ops[a];
    const int n_in = shape[a];
    const int n_out = static_cast<int>(T.rows());
    int pre = batch;
    for (int i = 0; i < a; ++i) pre *= shape[i];
    int post = 1;
    for (int i = a + 1; i < d.dim; ++i) post *= shape[i];
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> next(
        static_cast<Eigen::Index>(pre) * n_out * post);
    for (int p = 0; p < pre; ++p) {
      Eigen::Map<const RM> in_blk(buf.data() + static_cast<std::ptrdiff_t>(p) * n_in * post,
                                  n_in, post);
      Eigen::Map<RM> out_blk(next.data() + static_cast<std::ptrdiff_t>(p) * n_out * post,
                             n_out, post);
      out_blk = T * in_blk;
    }
    buf = std::move(next);
    shape[a] = n_out;
  }
  return buf;
}

std::vector<Eigen::MatrixXd> synthesis_ops(const DomainSpec& d, const std::vector<int>& counts) {
  const auto grid = d.grid_counts();
  std::vector<Eigen::MatrixXd> ops;
  ops.reserve(d.dim);
  for (int a = 0; a < d.dim; ++a) {
    ops.push_back(axis_synthesis(d.lengths[a], grid[a]).leftCols(counts[a]));
  }
  return ops;
}

std::vector<Eigen::MatrixXd> analysis_ops(const DomainSpec& d, const std::vector<int>& counts) {
  const auto grid = d.grid_counts();
  std::vector<Eigen::MatrixXd> ops;
  ops.reserve(d.dim);
  for (int a = 0; a < d.dim; ++a) {
    const double w = d.lengths[a] / (grid[a] + 1);
    ops.push_back(w * axis_synthesis(d.lengths[a], grid[a]).leftCols(counts[a]).transpose());
  }
  return ops;
}

}  // namespace

ModeField::ModeField(DomainSpec domain, std::vector<int> counts)
    : domain_(std::move(domain)), counts_(std::move(counts)) {
  domain_.validate();
  check_counts(domain_, counts_);
  coeffs_ = Eigen::VectorXd::Zero(product(counts_));
}

ModeField::ModeField(DomainSpec domain) : ModeField(domain, domain.modes) {}

ModeField::ModeField(DomainSpec domain, std::vector<int> counts, Eigen::VectorXd coeffs)
    : domain_(std::move(domain)), counts_(std::move(counts)), coeffs_(std::move(coeffs)) {
  domain_.validate();
  check_counts(domain_, counts_);
  if (coeffs_.size() != product(counts_)) {
    throw std::invalid_argument("ModeField: coefficient count does not match mode box");
  }
}

ModeField ModeField::embedded(const std::vector<int>& counts) const {
  check_counts(domain_, counts);
  for (int i = 0; i < domain_.dim; ++i) {
    if (counts[i] < counts_[i]) {
      throw std::invalid_argument("ModeField::embedded: target mode box is smaller");
    }
  }
  ModeField out(domain_, counts);
  for (int flat = 0; flat < mode_total(); ++flat) {
    out[flat_index(counts, unflatten_index(counts_, flat))] = coeffs_[flat];
  }
  return out;
}

ModeField ModeField::truncated(const std::vector<int>& counts) const {
  check_counts(domain_, counts);
  for (int i = 0; i < domain_.dim; ++i) {
    if (counts[i] > counts_[i]) {
      throw std::invalid_argument("ModeField::truncated: target mode box is larger");
    }
  }
  ModeField out(domain_, counts);
  for (int flat = 0; flat < out.mode_total(); ++flat) {
    out[flat] = coeffs_[flat_index(counts_, unflatten_index(counts, flat))];
  }
  return out;
}

namespace {
void require_same_layout(const ModeField& a, const ModeField& b, const char* op) {
  if (!(a.domain() == b.domain()) || a.mode_counts() != b.mode_counts()) {
    throw std::invalid_argument(std::string(op) + ": fields live on different mode boxes");
  }
}
}  // namespace

ModeField operator+(const ModeField& a, const ModeField& b) {
  require_same_layout(a, b, "operator+");
  return ModeField(a.domain(), a.mode_counts(), a.coeffs() + b.coeffs());
}

ModeField operator-(const ModeField& a, const ModeField& b) {
  require_same_layout(a, b, "operator-");
  return ModeField(a.domain(), a.mode_counts(), a.coeffs() - b.coeffs());
}

ModeField operator*(double s, const ModeField& a) {
  return ModeField(a.domain(), a.mode_counts(), s * a.coeffs());
}

Eigen::VectorXd to_grid(const ModeField& f) {
  return apply_separable<double>(f.domain(), f.mode_counts(), 1,
                                 synthesis_ops(f.domain(), f.mode_counts()), f.coeffs());
}

ModeField from_grid(const DomainSpec& d, const Eigen::VectorXd& grid_values) {
  const auto grid = d.grid_counts();
  if (grid_values.size() != product(grid)) {
    throw std::invalid_argument("from_grid: sample count does not match grid");
  }
  Eigen::VectorXd coeffs =
      apply_separable<double>(d, grid, 1, analysis_ops(d, grid), grid_values);
  return ModeField(d, grid, std::move(coeffs));
}

Eigen::VectorXcd orbital_to_grid(const DomainSpec& d, const std::vector<int>& counts,
                                 const Eigen::VectorXcd& coeffs) {
  check_counts(d, counts);
  if (coeffs.size() != product(counts)) {
    throw std::invalid_argument("orbital_to_grid: coefficient count mismatch");
  }
  return apply_separable<std::complex<double>>(d, counts, 1, synthesis_ops(d, counts), coeffs);
}

Eigen::VectorXcd orbital_from_grid(const DomainSpec& d, const std::vector<int>& counts,
                                   const Eigen::VectorXcd& grid_values) {
  check_counts(d, counts);
  const auto grid = d.grid_counts();
  if (grid_values.size() != product(grid)) {
    throw std::invalid_argument("orbital_from_grid: sample count does not match grid");
  }
  return apply_separable<std::complex<double>>(d, grid, 1, analysis_ops(d, counts), grid_values);
}

Eigen::MatrixXcd orbital_matrix_to_grid(const DomainSpec& d, const std::vector<int>& counts,
                                        const Eigen::MatrixXcd& coeffs) {
  check_counts(d, counts);
  if (coeffs.rows() != product(counts)) {
    throw std::invalid_argument("orbital_matrix_to_grid: row count mismatch");
  }
  // Column-major storage makes the column index the slowest axis, so the whole
  // matrix transforms as one batched tensor.
  const int k = static_cast<int>(coeffs.cols());
  Eigen::VectorXcd buf = Eigen::Map<const Eigen::VectorXcd>(coeffs.data(), coeffs.size());
  buf = apply_separable<std::complex<double>>(d, counts, k, synthesis_ops(d, counts),
                                              std::move(buf));
  return Eigen::Map<const Eigen::MatrixXcd>(buf.data(), d.grid_total(), k);
}

Eigen::MatrixXcd orbital_matrix_from_grid(const DomainSpec& d, const std::vector<int>& counts,
                                          const Eigen::MatrixXcd& grid_values) {
  check_counts(d, counts);
  if (grid_values.rows() != d.grid_total()) {
    throw std::invalid_argument("orbital_matrix_from_grid: row count mismatch");
  }
  const int k = static_cast<int>(grid_values.cols());
  Eigen::VectorXcd buf =
      Eigen::Map<const Eigen::VectorXcd>(grid_values.data(), grid_values.size());
  buf = apply_separable<std::complex<double>>(d, d.grid_counts(), k, analysis_ops(d, counts),
                                              std::move(buf));
  return Eigen::Map<const Eigen::MatrixXcd>(buf.data(), product(counts), k);
}

double inner_product_grid(const ModeField& a, const ModeField& b) {
  if (!(a.domain() == b.domain())) {
    throw std::invalid_argument("inner_product_grid: fields live on different domains");
  }
  return grid_weight(a.domain()) * to_grid(a).dot(to_grid(b));
}

}  // namespace srsp
