#include "wpmec/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace wpmec {

namespace {
constexpr int kMaxDim = 64;

void check_dim(int n) {
  if (n < 1 || n > kMaxDim) throw std::invalid_argument("HermitianMatrix: dimension out of range");
}
}  // namespace

HermitianMatrix::HermitianMatrix(int n) : n_(n) {
  check_dim(n);
  lo_.assign(static_cast<size_t>(n) * (n + 1) / 2, cdouble{0.0, 0.0});
}

HermitianMatrix HermitianMatrix::identity(int n) {
  HermitianMatrix m(n);
  for (int i = 0; i < n; ++i) m.lo_[m.idx(i, i)] = 1.0;
  return m;
}

HermitianMatrix HermitianMatrix::outer(std::span<const cdouble> v) {
  HermitianMatrix m(static_cast<int>(v.size()));
  for (int r = 0; r < m.n_; ++r)
    for (int c = 0; c <= r; ++c) m.lo_[m.idx(r, c)] = v[r] * std::conj(v[c]);
  for (int i = 0; i < m.n_; ++i) m.lo_[m.idx(i, i)].imag(0.0);
  return m;
}

HermitianMatrix HermitianMatrix::from_row_major(int n, std::span<const cdouble> entries,
                                                double tol) {
  check_dim(n);
  if (entries.size() != static_cast<size_t>(n) * n)
    throw std::invalid_argument("from_row_major: wrong entry count");
  double scale = 0.0;
  for (const cdouble& e : entries) {
    if (!std::isfinite(e.real()) || !std::isfinite(e.imag()))
      throw std::invalid_argument("from_row_major: non-finite entry");
    scale = std::max(scale, std::abs(e));
  }
  HermitianMatrix m(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c <= r; ++c) {
      cdouble a = entries[static_cast<size_t>(r) * n + c];
      cdouble b = entries[static_cast<size_t>(c) * n + r];
      if (std::abs(a - std::conj(b)) > tol * std::max(1.0, scale))
        throw std::invalid_argument("from_row_major: matrix is not Hermitian");
      m.lo_[m.idx(r, c)] = (a + std::conj(b)) * 0.5;
    }
  for (int i = 0; i < n; ++i) m.lo_[m.idx(i, i)].imag(0.0);
  return m;
}

cdouble HermitianMatrix::operator()(int r, int c) const {
  return r >= c ? lo_[idx(r, c)] : std::conj(lo_[idx(c, r)]);
}

void HermitianMatrix::set(int r, int c, cdouble v) {
  if (r == c) {
    lo_[idx(r, r)] = cdouble{v.real(), 0.0};
  } else if (r > c) {
    lo_[idx(r, c)] = v;
  } else {
    lo_[idx(c, r)] = std::conj(v);
  }
}

double HermitianMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < n_; ++i) t += lo_[idx(i, i)].real();
  return t;
}

double HermitianMatrix::frobenius_norm() const {
  double s = 0.0;
  for (int r = 0; r < n_; ++r) {
    s += std::norm(lo_[idx(r, r)]);
    for (int c = 0; c < r; ++c) s += 2.0 * std::norm(lo_[idx(r, c)]);
  }
  return std::sqrt(s);
}

std::vector<cdouble> HermitianMatrix::to_row_major() const {
  std::vector<cdouble> out(static_cast<size_t>(n_) * n_);
  for (int r = 0; r < n_; ++r)
    for (int c = 0; c < n_; ++c) out[static_cast<size_t>(r) * n_ + c] = (*this)(r, c);
  return out;
}

void HermitianMatrix::matvec(std::span<const cdouble> x, std::span<cdouble> y) const {
  if (x.size() != static_cast<size_t>(n_) || y.size() != static_cast<size_t>(n_))
    throw std::invalid_argument("matvec: size mismatch");
  for (int r = 0; r < n_; ++r) {
    cdouble acc{0.0, 0.0};
    for (int c = 0; c < n_; ++c) acc += (*this)(r, c) * x[c];
    y[r] = acc;
  }
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& other) {
  if (other.n_ != n_) throw std::invalid_argument("operator+=: dimension mismatch");
  for (size_t i = 0; i < lo_.size(); ++i) lo_[i] += other.lo_[i];
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) {
  for (cdouble& e : lo_) e *= s;
  return *this;
}

HermitianMatrix& HermitianMatrix::axpy(double alpha, const HermitianMatrix& other) {
  if (other.n_ != n_) throw std::invalid_argument("axpy: dimension mismatch");
  for (size_t i = 0; i < lo_.size(); ++i) lo_[i] += alpha * other.lo_[i];
  return *this;
}

namespace {

double offdiag_norm(const std::vector<cdouble>& a, int n) {
  double s = 0.0;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (r != c) s += std::norm(a[static_cast<size_t>(r) * n + c]);
  return std::sqrt(s);
}

}  // namespace

EigDecomposition eig(const HermitianMatrix& m) {
  const int n = m.dim();
  if (n == 0) throw std::invalid_argument("eig: empty matrix");
  std::vector<cdouble> a = m.to_row_major();
  for (const cdouble& e : a)
    if (!std::isfinite(e.real()) || !std::isfinite(e.imag()))
      throw std::invalid_argument("eig: non-finite entry");

  std::vector<cdouble> v(static_cast<size_t>(n) * n, cdouble{0.0, 0.0});
  for (int i = 0; i < n; ++i) v[static_cast<size_t>(i) * n + i] = 1.0;

  const double total = std::max(m.frobenius_norm(), 0.0);
  const double stop = 1e-14 * total;
  auto at = [&](std::vector<cdouble>& w, int r, int c) -> cdouble& {
    return w[static_cast<size_t>(r) * n + c];
  };

  // Cyclic sweeps of two-sided unitary rotations. Each rotation zeroes one
  // off-diagonal pair: a phase fold makes the 2x2 pivot real symmetric, then
  // a classic Jacobi angle annihilates it.
  for (int sweep = 0; sweep < 100 && n > 1; ++sweep) {
    if (offdiag_norm(a, n) <= stop) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        cdouble apq = at(a, p, q);
        double r = std::abs(apq);
        if (r <= 1e-300) continue;
        cdouble phase = apq / r;
        double app = at(a, p, p).real();
        double aqq = at(a, q, q).real();
        double tau = (aqq - app) / (2.0 * r);
        double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;
        // U = [[c*phase, s*phase], [-s, c]] acting on columns (p, q).
        cdouble upp = c * phase, upq = s * phase;
        for (int k = 0; k < n; ++k) {
          cdouble akp = at(a, k, p), akq = at(a, k, q);
          at(a, k, p) = akp * upp - akq * s;
          at(a, k, q) = akp * upq + akq * c;
        }
        for (int k = 0; k < n; ++k) {
          cdouble apk = at(a, p, k), aqk = at(a, q, k);
          at(a, p, k) = std::conj(upp) * apk - s * aqk;
          at(a, q, k) = std::conj(upq) * apk + c * aqk;
        }
        at(a, p, q) = 0.0;
        at(a, q, p) = 0.0;
        at(a, p, p).imag(0.0);
        at(a, q, q).imag(0.0);
        for (int k = 0; k < n; ++k) {
          cdouble vkp = at(v, k, p), vkq = at(v, k, q);
          at(v, k, p) = vkp * upp - vkq * s;
          at(v, k, q) = vkp * upq + vkq * c;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = at(a, i, i).real();
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return diag[x] < diag[y]; });

  EigDecomposition out;
  out.values.resize(n);
  out.vectors.resize(static_cast<size_t>(n) * n);
  for (int k = 0; k < n; ++k) {
    out.values[k] = diag[order[k]];
    for (int r = 0; r < n; ++r)
      out.vectors[static_cast<size_t>(r) * n + k] = at(v, r, order[k]);
  }
  return out;
}

HermitianMatrix psd_project(const HermitianMatrix& a) {
  EigDecomposition ed = eig(a);
  const int n = a.dim();
  HermitianMatrix out(n);
  std::vector<cdouble> col(n);
  for (int k = 0; k < n; ++k) {
    if (ed.values[k] <= 0.0) continue;
    for (int r = 0; r < n; ++r) col[r] = ed.vectors[static_cast<size_t>(r) * n + k];
    out.axpy(ed.values[k], HermitianMatrix::outer(col));
  }
  return out;
}

double trace_product(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("trace_product: dimension mismatch");
  double s = 0.0;
  for (int r = 0; r < a.dim(); ++r) {
    s += a(r, r).real() * b(r, r).real();
    for (int c = 0; c < r; ++c) {
      cdouble x = a(r, c), y = b(r, c);
      s += 2.0 * (x.real() * y.real() + x.imag() * y.imag());
    }
  }
  return s;
}

MaxEigPair max_eigpair(const HermitianMatrix& a) {
  EigDecomposition ed = eig(a);
  const int n = a.dim();
  MaxEigPair out;
  out.value = ed.values[n - 1];
  out.vector.resize(n);
  for (int r = 0; r < n; ++r) out.vector[r] = ed.vectors[static_cast<size_t>(r) * n + (n - 1)];
  return out;
}

}  // namespace wpmec
