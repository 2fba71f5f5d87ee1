#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "wpmec/hermitian.hpp"

using wpmec::cdouble;
using wpmec::HermitianMatrix;

namespace {

HermitianMatrix random_hermitian(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  HermitianMatrix m(n);
  for (int r = 0; r < n; ++r) {
    m.set(r, r, cdouble{nd(rng), 0.0});
    for (int c = 0; c < r; ++c) m.set(r, c, cdouble{nd(rng), nd(rng)});
  }
  return m;
}

std::vector<cdouble> random_vector(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<cdouble> v(n);
  for (auto& e : v) e = cdouble{nd(rng), nd(rng)};
  return v;
}

// Dense reference for tr(A B) built from full row-major products.
double naive_trace_product(const HermitianMatrix& a, const HermitianMatrix& b) {
  const int n = a.dim();
  auto ra = a.to_row_major();
  auto rb = b.to_row_major();
  cdouble s{0.0, 0.0};
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      s += ra[static_cast<size_t>(i) * n + k] * rb[static_cast<size_t>(k) * n + i];
  return s.real();
}

}  // namespace

TEST_CASE("storage round trip and hermitian symmetry") {
  HermitianMatrix m(3);
  m.set(0, 0, 2.0);
  m.set(1, 0, cdouble{1.0, -0.5});
  m.set(2, 1, cdouble{0.25, 0.75});
  CHECK(m(0, 1) == std::conj(m(1, 0)));
  CHECK(m(1, 2) == std::conj(m(2, 1)));
  // Setting the upper triangle stores the conjugate below the diagonal.
  m.set(0, 2, cdouble{3.0, 4.0});
  CHECK(m(2, 0) == cdouble{3.0, -4.0});
  auto rm = m.to_row_major();
  auto back = HermitianMatrix::from_row_major(3, rm);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) CHECK(std::abs(back(r, c) - m(r, c)) < 1e-15);
}

TEST_CASE("from_row_major rejects non hermitian input") {
  std::vector<cdouble> bad{cdouble{1.0, 0.0}, cdouble{2.0, 0.0}, cdouble{3.0, 0.0},
                           cdouble{4.0, 0.0}};
  CHECK_THROWS_AS(HermitianMatrix::from_row_major(2, bad), std::invalid_argument);
  std::vector<cdouble> imag_diag{cdouble{1.0, 0.5}, cdouble{0.0, 0.0}, cdouble{0.0, 0.0},
                                 cdouble{1.0, 0.0}};
  CHECK_THROWS_AS(HermitianMatrix::from_row_major(2, imag_diag), std::invalid_argument);
}

TEST_CASE("trace frobenius and arithmetic") {
  auto a = random_hermitian(5, 11);
  auto b = random_hermitian(5, 12);
  double ta = a.trace(), tb = b.trace();
  HermitianMatrix c = a;
  c += b;
  CHECK(c.trace() == doctest::Approx(ta + tb).epsilon(1e-12));
  c *= 2.0;
  CHECK(c.trace() == doctest::Approx(2.0 * (ta + tb)).epsilon(1e-12));
  HermitianMatrix d = a;
  d.axpy(-1.0, a);
  CHECK(d.frobenius_norm() == doctest::Approx(0.0));
  double fn2 = 0.0;
  for (const auto& e : a.to_row_major()) fn2 += std::norm(e);
  CHECK(a.frobenius_norm() == doctest::Approx(std::sqrt(fn2)).epsilon(1e-12));
}

TEST_CASE("matvec matches dense multiply") {
  auto a = random_hermitian(4, 21);
  auto x = random_vector(4, 22);
  std::vector<cdouble> y(4);
  a.matvec(x, y);
  auto rm = a.to_row_major();
  for (int r = 0; r < 4; ++r) {
    cdouble acc{0.0, 0.0};
    for (int c = 0; c < 4; ++c) acc += rm[static_cast<size_t>(r) * 4 + c] * x[c];
    CHECK(std::abs(y[r] - acc) < 1e-12);
  }
}

TEST_CASE("eig of identity") {
  auto ed = wpmec::eig(HermitianMatrix::identity(6));
  for (double w : ed.values) CHECK(w == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("eig of rank one outer product") {
  auto v = random_vector(5, 31);
  double nrm2 = 0.0;
  for (const auto& e : v) nrm2 += std::norm(e);
  auto ed = wpmec::eig(HermitianMatrix::outer(v));
  for (int k = 0; k + 1 < 5; ++k) CHECK(std::abs(ed.values[k]) < 1e-12 * nrm2);
  CHECK(ed.values[4] == doctest::Approx(nrm2).epsilon(1e-12));
  // Top eigenvector is v up to a unit phase.
  cdouble inner{0.0, 0.0};
  for (int r = 0; r < 5; ++r) inner += std::conj(ed.vectors[static_cast<size_t>(r) * 5 + 4]) * v[r];
  CHECK(std::abs(inner) == doctest::Approx(std::sqrt(nrm2)).epsilon(1e-10));
}

TEST_CASE("eig 2x2 closed form") {
  // Eigenvalues of [[a, b], [conj(b), c]] are (a+c)/2 +- sqrt(((a-c)/2)^2 + |b|^2).
  double a = 1.5, c = -0.75;
  cdouble b{0.6, -1.1};
  HermitianMatrix m(2);
  m.set(0, 0, a);
  m.set(1, 1, c);
  m.set(1, 0, std::conj(b));
  double mid = 0.5 * (a + c);
  double rad = std::sqrt(0.25 * (a - c) * (a - c) + std::norm(b));
  auto ed = wpmec::eig(m);
  CHECK(ed.values[0] == doctest::Approx(mid - rad).epsilon(1e-13));
  CHECK(ed.values[1] == doctest::Approx(mid + rad).epsilon(1e-13));
}

TEST_CASE("eig reconstruction and unitary vectors") {
  for (int n : {2, 3, 6, 12}) {
    auto m = random_hermitian(n, 100u + n);
    auto ed = wpmec::eig(m);
    double scale = m.frobenius_norm();
    double tr = 0.0;
    for (double w : ed.values) tr += w;
    CHECK(tr == doctest::Approx(m.trace()).epsilon(1e-11));
    for (int k = 0; k + 1 < n; ++k) CHECK(ed.values[k] <= ed.values[k + 1] + 1e-13 * scale);
    // V^H V = I.
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        cdouble dot{0.0, 0.0};
        for (int r = 0; r < n; ++r)
          dot += std::conj(ed.vectors[static_cast<size_t>(r) * n + i]) *
                 ed.vectors[static_cast<size_t>(r) * n + j];
        CHECK(std::abs(dot - (i == j ? 1.0 : 0.0)) < 1e-11);
      }
    // V diag(w) V^H = A.
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        cdouble acc{0.0, 0.0};
        for (int k = 0; k < n; ++k)
          acc += ed.values[k] * ed.vectors[static_cast<size_t>(r) * n + k] *
                 std::conj(ed.vectors[static_cast<size_t>(c) * n + k]);
        CHECK(std::abs(acc - m(r, c)) < 1e-11 * std::max(1.0, scale));
      }
  }
}

TEST_CASE("psd_project clamps negative eigenvalues") {
  auto m = random_hermitian(5, 77);
  auto p = wpmec::psd_project(m);
  auto edp = wpmec::eig(p);
  for (double w : edp.values) CHECK(w >= -1e-11 * std::max(1.0, m.frobenius_norm()));
  // Projection keeps the positive part: eigenvalues match clamped originals.
  auto edm = wpmec::eig(m);
  std::vector<double> clamped;
  for (double w : edm.values) clamped.push_back(std::max(0.0, w));
  for (int k = 0; k < 5; ++k)
    CHECK(edp.values[k] == doctest::Approx(clamped[k]).epsilon(1e-9).scale(1.0));
  // Already-PSD input is a fixed point.
  auto v = random_vector(4, 78);
  auto psd = HermitianMatrix::outer(v);
  auto q = wpmec::psd_project(psd);
  HermitianMatrix diff = q;
  diff.axpy(-1.0, psd);
  CHECK(diff.frobenius_norm() < 1e-11 * psd.frobenius_norm());
}

TEST_CASE("trace_product matches dense reference") {
  for (int n : {1, 2, 4, 7}) {
    auto a = random_hermitian(n, 200u + n);
    auto b = random_hermitian(n, 300u + n);
    CHECK(wpmec::trace_product(a, b) ==
          doctest::Approx(naive_trace_product(a, b)).epsilon(1e-11));
  }
  // tr(A I) = tr(A).
  auto a = random_hermitian(3, 55);
  CHECK(wpmec::trace_product(a, HermitianMatrix::identity(3)) ==
        doctest::Approx(a.trace()).epsilon(1e-12));
}

TEST_CASE("max_eigpair on shifted rank one matrix") {
  // eta*lambda*h h^H - rho*I has top eigenvalue eta*lambda*||h||^2 - rho along h.
  auto h = random_vector(4, 91);
  double nrm2 = 0.0;
  for (const auto& e : h) nrm2 += std::norm(e);
  double scale = 0.8 * 3.0e4;
  HermitianMatrix m = HermitianMatrix::outer(h);
  m *= scale;
  m.axpy(-2.0, HermitianMatrix::identity(4));
  auto top = wpmec::max_eigpair(m);
  CHECK(top.value == doctest::Approx(scale * nrm2 - 2.0).epsilon(1e-11));
  // Rayleigh quotient of the returned vector reproduces the eigenvalue.
  std::vector<cdouble> y(4);
  m.matvec(top.vector, y);
  cdouble quad{0.0, 0.0};
  double vnorm2 = 0.0;
  for (int r = 0; r < 4; ++r) {
    quad += std::conj(top.vector[r]) * y[r];
    vnorm2 += std::norm(top.vector[r]);
  }
  CHECK(quad.real() / vnorm2 == doctest::Approx(top.value).epsilon(1e-11));
  CHECK(vnorm2 == doctest::Approx(1.0).epsilon(1e-11));
}
