#include "qpv/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace qpv {

Eigen::Index dimension_cap() {
  if (const char* env = std::getenv("QPVLAB_DIM_CAP")) {
    char* end = nullptr;
    long value = std::strtol(env, &end, 10);
    if (end && *end == '\0' && value > 0) return static_cast<Eigen::Index>(value);
    throw std::invalid_argument("QPVLAB_DIM_CAP must be a positive integer, got '" +
                                std::string(env) + "'");
  }
  return 64;
}

Eigen::Index RegisterShape::total() const {
  Eigen::Index t = 1;
  for (Eigen::Index d : dims) t *= d;
  return t;
}

void RegisterShape::validate_against(Eigen::Index dim) const {
  if (dims.empty()) throw std::invalid_argument("register shape has no factors");
  for (Eigen::Index d : dims) {
    if (d <= 0) throw std::invalid_argument("register factor dimension must be positive");
  }
  if (total() != dim) {
    throw std::invalid_argument("register shape product " + std::to_string(total()) +
                                " does not match dimension " + std::to_string(dim));
  }
}

Matrix tensor(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix mat_of_vec(const Vector& c, Eigen::Index rows, Eigen::Index cols) {
  if (rows <= 0 || cols <= 0 || c.size() != rows * cols) {
    throw std::invalid_argument("mat_of_vec: vector of length " +
                                std::to_string(c.size()) + " cannot fill " +
                                std::to_string(rows) + "x" + std::to_string(cols));
  }
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = c(i * cols + j);
  return m;
}

Vector vec_of_mat(const Matrix& m) {
  Vector c(m.rows() * m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) c(i * m.cols() + j) = m(i, j);
  return c;
}

namespace {

// Splits a composite big-endian index into per-factor digits.
void unpack_index(Eigen::Index idx, const std::vector<Eigen::Index>& dims,
                  std::vector<Eigen::Index>& digits) {
  for (std::size_t k = dims.size(); k-- > 0;) {
    digits[k] = idx % dims[k];
    idx /= dims[k];
  }
}

Eigen::Index pack_index(const std::vector<Eigen::Index>& digits,
                        const std::vector<Eigen::Index>& dims) {
  Eigen::Index idx = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) idx = idx * dims[k] + digits[k];
  return idx;
}

}  // namespace

Matrix partial_trace(const Matrix& m, const RegisterShape& shape,
                     const std::vector<int>& keep) {
  if (m.rows() != m.cols()) throw std::invalid_argument("partial_trace: matrix not square");
  shape.validate_against(m.rows());
  const std::size_t n = shape.dims.size();
  std::vector<bool> kept(n, false);
  for (std::size_t idx = 0; idx < keep.size(); ++idx) {
    int f = keep[idx];
    if (f < 0 || static_cast<std::size_t>(f) >= n)
      throw std::invalid_argument("partial_trace: keep index out of range");
    if (kept[f]) throw std::invalid_argument("partial_trace: duplicate keep index");
    if (idx > 0 && keep[idx] <= keep[idx - 1])
      throw std::invalid_argument("partial_trace: keep indices must be increasing");
    kept[f] = true;
  }

  std::vector<Eigen::Index> keep_dims, trace_dims;
  std::vector<std::size_t> keep_pos, trace_pos;
  for (std::size_t k = 0; k < n; ++k) {
    if (kept[k]) {
      keep_dims.push_back(shape.dims[k]);
      keep_pos.push_back(k);
    } else {
      trace_dims.push_back(shape.dims[k]);
      trace_pos.push_back(k);
    }
  }
  Eigen::Index out_dim = 1;
  for (Eigen::Index d : keep_dims) out_dim *= d;
  Eigen::Index trace_total = 1;
  for (Eigen::Index d : trace_dims) trace_total *= d;

  Matrix out = Matrix::Zero(out_dim, out_dim);
  std::vector<Eigen::Index> row_digits(n), col_digits(n), kd(keep_pos.size()),
      kd2(keep_pos.size()), td(trace_pos.size());
  for (Eigen::Index a = 0; a < out_dim; ++a) {
    unpack_index(a, keep_dims, kd);
    for (Eigen::Index b = 0; b < out_dim; ++b) {
      unpack_index(b, keep_dims, kd2);
      Complex sum{0.0, 0.0};
      for (Eigen::Index t = 0; t < trace_total; ++t) {
        unpack_index(t, trace_dims, td);
        for (std::size_t k = 0; k < keep_pos.size(); ++k) {
          row_digits[keep_pos[k]] = kd[k];
          col_digits[keep_pos[k]] = kd2[k];
        }
        for (std::size_t k = 0; k < trace_pos.size(); ++k) {
          row_digits[trace_pos[k]] = td[k];
          col_digits[trace_pos[k]] = td[k];
        }
        sum += m(pack_index(row_digits, shape.dims), pack_index(col_digits, shape.dims));
      }
      out(a, b) = sum;
    }
  }
  return out;
}

namespace {

std::vector<Eigen::Index> permuted_dims(const RegisterShape& shape,
                                        const std::vector<int>& perm) {
  const std::size_t n = shape.dims.size();
  if (perm.size() != n) throw std::invalid_argument("permute_systems: permutation size mismatch");
  std::vector<bool> seen(n, false);
  std::vector<Eigen::Index> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    int f = perm[k];
    if (f < 0 || static_cast<std::size_t>(f) >= n || seen[f])
      throw std::invalid_argument("permute_systems: not a permutation");
    seen[f] = true;
    out[k] = shape.dims[f];
  }
  return out;
}

}  // namespace

Vector permute_systems(const Vector& v, const RegisterShape& shape,
                       const std::vector<int>& perm) {
  shape.validate_against(v.size());
  const std::size_t n = shape.dims.size();
  std::vector<Eigen::Index> new_dims = permuted_dims(shape, perm);
  Vector out(v.size());
  std::vector<Eigen::Index> nd(n), od(n);
  for (Eigen::Index idx = 0; idx < v.size(); ++idx) {
    unpack_index(idx, new_dims, nd);
    for (std::size_t k = 0; k < n; ++k) od[perm[k]] = nd[k];
    out(idx) = v(pack_index(od, shape.dims));
  }
  return out;
}

Matrix permute_systems(const Matrix& m, const RegisterShape& shape,
                       const std::vector<int>& perm) {
  if (m.rows() != m.cols()) throw std::invalid_argument("permute_systems: matrix not square");
  shape.validate_against(m.rows());
  const std::size_t n = shape.dims.size();
  std::vector<Eigen::Index> new_dims = permuted_dims(shape, perm);
  std::vector<Eigen::Index> row_map(m.rows());
  std::vector<Eigen::Index> nd(n), od(n);
  for (Eigen::Index idx = 0; idx < m.rows(); ++idx) {
    unpack_index(idx, new_dims, nd);
    for (std::size_t k = 0; k < n; ++k) od[perm[k]] = nd[k];
    row_map[idx] = pack_index(od, shape.dims);
  }
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(row_map[i], row_map[j]);
  return out;
}

double trace_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

Matrix hermitize(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("hermitize: matrix not square");
  double asym = (m - m.adjoint()).norm();
  if (asym > tol) {
    throw std::invalid_argument("matrix is not Hermitian within tolerance (asymmetry " +
                                std::to_string(asym) + ")");
  }
  return 0.5 * (m + m.adjoint());
}

Matrix support_projector(const Matrix& rho, double tol) {
  Matrix h = hermitize(rho);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Matrix proj = Matrix::Zero(h.rows(), h.cols());
  for (Eigen::Index k = 0; k < h.rows(); ++k) {
    if (es.eigenvalues()(k) > tol) {
      proj += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
    }
  }
  return proj;
}

IsometryCheck check_isometry(const Matrix& u, double tol) {
  Matrix gram = u.adjoint() * u;
  double residual = (gram - Matrix::Identity(u.cols(), u.cols())).norm();
  return {residual, residual <= tol};
}

Vector apply_to_leading(const Matrix& op, const Vector& v, Eigen::Index trail_dim) {
  Eigen::Index lead_dim = op.cols();
  if (trail_dim <= 0 || v.size() != lead_dim * trail_dim)
    throw std::invalid_argument("apply_to_leading: dimension mismatch");
  using RowMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> in(v.data(), lead_dim, trail_dim);
  RowMat out = op * in;
  Vector result(op.rows() * trail_dim);
  Eigen::Map<RowMat>(result.data(), op.rows(), trail_dim) = out;
  return result;
}

Vector apply_to_trailing(const Matrix& op, const Vector& v, Eigen::Index lead_dim) {
  Eigen::Index trail_dim = op.cols();
  if (lead_dim <= 0 || v.size() != lead_dim * trail_dim)
    throw std::invalid_argument("apply_to_trailing: dimension mismatch");
  using RowMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> in(v.data(), lead_dim, trail_dim);
  RowMat out = in * op.transpose();
  Vector result(lead_dim * op.rows());
  Eigen::Map<RowMat>(result.data(), lead_dim, op.rows()) = out;
  return result;
}

}  // namespace qpv
