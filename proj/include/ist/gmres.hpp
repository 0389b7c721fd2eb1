#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace ist {

struct GmresResult {
  bool converged = false;
  int matvecs = 0;
  double residual = 0.0;  // relative to ||b||
};

namespace detail {
inline double conj_scalar(double v) { return v; }
inline std::complex<double> conj_scalar(std::complex<double> v) { return std::conj(v); }
}  // namespace detail

// Restarted GMRES(m) with modified Gram-Schmidt and Givens rotations.
// Scalar is double or std::complex<double>; the operator A only needs to be
// linear over that scalar field.
template <class Scalar>
GmresResult gmres(const std::function<void(const std::vector<Scalar>&, std::vector<Scalar>&)>& A,
                  const std::vector<Scalar>& b, std::vector<Scalar>& x, int m, int max_matvecs,
                  double tol) {
  using std::abs;
  using std::sqrt;
  using detail::conj_scalar;
  const std::size_t n = b.size();
  auto dot = [n](const std::vector<Scalar>& u, const std::vector<Scalar>& v) {
    Scalar s{};
    for (std::size_t i = 0; i < n; ++i) s += conj_scalar(u[i]) * v[i];
    return s;
  };
  auto nrm = [&](const std::vector<Scalar>& u) { return sqrt(abs(dot(u, u))); };

  GmresResult out;
  double bnorm = nrm(b);
  if (bnorm == 0.0) {
    x.assign(n, Scalar{});
    out.converged = true;
    return out;
  }
  if (x.size() != n) x.assign(n, Scalar{});

  std::vector<Scalar> w(n), r(n);
  while (out.matvecs < max_matvecs) {
    A(x, r);
    ++out.matvecs;
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    double beta = nrm(r);
    out.residual = beta / bnorm;
    if (out.residual <= tol) {
      out.converged = true;
      return out;
    }

    std::vector<std::vector<Scalar>> V;
    V.reserve(m + 1);
    V.push_back(r);
    for (auto& c : V[0]) c /= beta;
    std::vector<std::vector<Scalar>> H(m + 1, std::vector<Scalar>(m, Scalar{}));
    std::vector<Scalar> cs(m), sn(m), g(m + 1, Scalar{});
    g[0] = beta;
    int k = 0;
    for (; k < m && out.matvecs < max_matvecs; ++k) {
      A(V[k], w);
      ++out.matvecs;
      for (int i = 0; i <= k; ++i) {
        H[i][k] = dot(V[i], w);
        for (std::size_t j = 0; j < n; ++j) w[j] -= H[i][k] * V[i][j];
      }
      const double hk = nrm(w);
      H[k + 1][k] = hk;
      // apply accumulated rotations
      for (int i = 0; i < k; ++i) {
        const Scalar t = conj_scalar(cs[i]) * H[i][k] + conj_scalar(sn[i]) * H[i + 1][k];
        H[i + 1][k] = -sn[i] * H[i][k] + cs[i] * H[i + 1][k];
        H[i][k] = t;
      }
      const double denom = std::sqrt(std::norm(H[k][k]) + hk * hk);
      if (denom == 0.0) {
        ++k;
        break;
      }
      cs[k] = H[k][k] / denom;
      sn[k] = H[k + 1][k] / denom;
      H[k][k] = conj_scalar(cs[k]) * H[k][k] + conj_scalar(sn[k]) * H[k + 1][k];
      H[k + 1][k] = Scalar{};
      g[k + 1] = -sn[k] * g[k];
      g[k] = conj_scalar(cs[k]) * g[k];
      out.residual = abs(g[k + 1]) / bnorm;
      if (hk == 0.0 || out.residual <= tol) {
        ++k;
        break;
      }
      V.push_back(w);
      for (auto& c : V.back()) c /= hk;
    }
    // back substitution on the k x k triangular system
    std::vector<Scalar> y(k, Scalar{});
    for (int i = k - 1; i >= 0; --i) {
      Scalar s = g[i];
      for (int j = i + 1; j < k; ++j) s -= H[i][j] * y[j];
      y[i] = s / H[i][i];
    }
    for (int i = 0; i < k; ++i)
      for (std::size_t j = 0; j < n; ++j) x[j] += y[i] * V[i][j];
    if (out.residual <= tol) {
      out.converged = true;
      return out;
    }
  }
  return out;
}

}  // namespace ist
