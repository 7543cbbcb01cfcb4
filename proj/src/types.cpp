#include "ddm/types.hpp"

#include <sstream>

namespace ddm {

namespace {

std::string describe_pivot(Index pivot, double value) {
  std::ostringstream os;
  os << "matrix is not positive definite: pivot " << pivot << " = " << value;
  return os.str();
}

std::string describe_curvature(int iteration, double curvature, bool in_preconditioner) {
  std::ostringstream os;
  os << (in_preconditioner ? "preconditioner" : "operator") << " is not positive definite: "
     << (in_preconditioner ? "r.Mr" : "p.Ap") << " = " << curvature << " at iteration "
     << iteration;
  return os.str();
}

std::string describe_cap(Index dim, Index cap) {
  std::ostringstream os;
  os << "dense materialization of dimension " << dim << " exceeds the cap " << cap
     << "; use the iterative (Lanczos) eigen mode instead";
  return os.str();
}

} // namespace

NotPositiveDefinite::NotPositiveDefinite(Index pivot, double value)
    : std::runtime_error(describe_pivot(pivot, value)), pivot_(pivot), value_(value) {}

IndefiniteOperator::IndefiniteOperator(int iteration, double curvature, bool in_preconditioner)
    : std::runtime_error(describe_curvature(iteration, curvature, in_preconditioner)),
      iteration_(iteration),
      curvature_(curvature) {}

DefinitenessFailure::DefinitenessFailure(const std::string& what, double smallest_ritz)
    : std::runtime_error(what), smallest_ritz_(smallest_ritz) {}

DimensionCapExceeded::DimensionCapExceeded(Index dim, Index cap)
    : std::length_error(describe_cap(dim, cap)) {}

Vector gather(const Eigen::Ref<const Vector>& x, const IndexSet& idx) {
  Vector out(static_cast<Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out[Index(k)] = x[idx[k]];
  return out;
}

void scatter_add(const Eigen::Ref<const Vector>& v, const IndexSet& idx, Eigen::Ref<Vector> y) {
  for (std::size_t k = 0; k < idx.size(); ++k) y[idx[k]] += v[Index(k)];
}

void scatter(const Eigen::Ref<const Vector>& v, const IndexSet& idx, Eigen::Ref<Vector> y) {
  for (std::size_t k = 0; k < idx.size(); ++k) y[idx[k]] = v[Index(k)];
}

IndexSet concat(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

SparseMatrix extract_block(const SparseMatrix& a, const IndexSet& rows, const IndexSet& cols) {
  std::vector<Index> row_map(std::size_t(a.rows()), -1);
  for (std::size_t k = 0; k < rows.size(); ++k) row_map[std::size_t(rows[k])] = Index(k);

  std::vector<Eigen::Triplet<double>> entries;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (SparseMatrix::InnerIterator it(a, cols[c]); it; ++it) {
      const Index r = row_map[std::size_t(it.row())];
      if (r >= 0) entries.emplace_back(r, Index(c), it.value());
    }
  }
  SparseMatrix out(Index(rows.size()), Index(cols.size()));
  out.setFromTriplets(entries.begin(), entries.end());
  return out;
}

} // namespace ddm
