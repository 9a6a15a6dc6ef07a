#include "cavmag/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cavmag/errors.hpp"

namespace cavmag::linalg {

namespace {

double sign(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

void balance(Eigen::MatrixXd& a) {
  const double radix = std::numeric_limits<double>::radix;
  const double sqrdx = radix * radix;
  const Eigen::Index n = a.rows();
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

// Gaussian elimination with pivoting to upper Hessenberg form.
void reduce_hessenberg(Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index m = 1; m < n - 1; ++m) {
    double x = 0.0;
    Eigen::Index piv = m;
    for (Eigen::Index j = m; j < n; ++j) {
      if (std::abs(a(j, m - 1)) > std::abs(x)) {
        x = a(j, m - 1);
        piv = j;
      }
    }
    if (piv != m) {
      for (Eigen::Index j = m - 1; j < n; ++j) std::swap(a(piv, j), a(m, j));
      for (Eigen::Index j = 0; j < n; ++j) std::swap(a(j, piv), a(j, m));
    }
    if (x == 0.0) continue;
    for (Eigen::Index i = m + 1; i < n; ++i) {
      double y = a(i, m - 1);
      if (y == 0.0) continue;
      y /= x;
      a(i, m - 1) = y;
      for (Eigen::Index j = m; j < n; ++j) a(i, j) -= y * a(m, j);
      for (Eigen::Index j = 0; j < n; ++j) a(j, m) += y * a(j, i);
    }
  }
  for (Eigen::Index i = 2; i < n; ++i) {
    for (Eigen::Index j = 0; j < i - 1; ++j) a(i, j) = 0.0;
  }
}

// Francis double-shift QR on an upper Hessenberg matrix (destroys `a`).
std::vector<std::complex<double>> hessenberg_qr(Eigen::MatrixXd& a) {
  constexpr int kMaxIterations = 60;
  const double eps = std::numeric_limits<double>::epsilon();
  const int n = static_cast<int>(a.rows());
  std::vector<std::complex<double>> w(static_cast<std::size_t>(n));

  double anorm = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a(i, j));
  }

  int nn = n - 1;
  double t = 0.0;
  double p = 0.0, q = 0.0, r = 0.0, s = 0.0, x = 0.0, y = 0.0, z = 0.0;
  while (nn >= 0) {
    int its = 0;
    int l = 0;
    do {
      for (l = nn; l > 0; --l) {
        s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(a(l, l - 1)) <= eps * s) {
          a(l, l - 1) = 0.0;
          break;
        }
      }
      x = a(nn, nn);
      if (l == nn) {
        w[static_cast<std::size_t>(nn--)] = x + t;
      } else {
        y = a(nn - 1, nn - 1);
        double wprod = a(nn, nn - 1) * a(nn - 1, nn);
        if (l == nn - 1) {
          p = 0.5 * (y - x);
          q = p * p + wprod;
          z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + sign(z, p);
            w[static_cast<std::size_t>(nn - 1)] = w[static_cast<std::size_t>(nn)] = x + z;
            if (z != 0.0) w[static_cast<std::size_t>(nn)] = x - wprod / z;
          } else {
            w[static_cast<std::size_t>(nn)] = {x + p, -z};
            w[static_cast<std::size_t>(nn - 1)] = std::conj(w[static_cast<std::size_t>(nn)]);
          }
          nn -= 2;
        } else {
          if (its == kMaxIterations) throw NumericalError("eigenvalues: QR iteration did not converge");
          if (its % 10 == 0 && its > 0) {
            // exceptional shift
            t += x;
            for (int i = 0; i <= nn; ++i) a(i, i) -= x;
            s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
            y = x = 0.75 * s;
            wprod = -0.4375 * s * s;
          }
          ++its;
          int m = nn - 2;
          for (; m >= l; --m) {
            z = a(m, m);
            r = x - z;
            s = y - z;
            p = (r * s - wprod) / a(m + 1, m) + a(m, m + 1);
            q = a(m + 1, m + 1) - z - r - s;
            r = a(m + 2, m + 1);
            s = std::abs(p) + std::abs(q) + std::abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            const double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
            const double v = std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) + std::abs(a(m + 1, m + 1)));
            if (u <= eps * v) break;
          }
          for (int i = m; i < nn - 1; ++i) {
            a(i + 2, i) = 0.0;
            if (i != m) a(i + 2, i - 1) = 0.0;
          }
          for (int k = m; k < nn; ++k) {
            if (k != m) {
              p = a(k, k - 1);
              q = a(k + 1, k - 1);
              r = 0.0;
              if (k + 1 != nn) r = a(k + 2, k - 1);
              if ((x = std::abs(p) + std::abs(q) + std::abs(r)) != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            if ((s = sign(std::sqrt(p * p + q * q + r * r), p)) != 0.0) {
              if (k == m) {
                if (l != m) a(k, k - 1) = -a(k, k - 1);
              } else {
                a(k, k - 1) = -s * x;
              }
              p += s;
              x = p / s;
              y = q / s;
              z = r / s;
              q /= p;
              r /= p;
              for (int j = k; j <= nn; ++j) {
                p = a(k, j) + q * a(k + 1, j);
                if (k + 1 != nn) {
                  p += r * a(k + 2, j);
                  a(k + 2, j) -= p * z;
                }
                a(k + 1, j) -= p * y;
                a(k, j) -= p * x;
              }
              const int mmin = nn < k + 3 ? nn : k + 3;
              for (int i = l; i <= mmin; ++i) {
                p = x * a(i, k) + y * a(i, k + 1);
                if (k + 1 != nn) {
                  p += z * a(i, k + 2);
                  a(i, k + 2) -= p * r;
                }
                a(i, k + 1) -= p * q;
                a(i, k) -= p;
              }
            }
          }
        }
      }
    } while (l + 1 < nn);
  }
  return w;
}

}  // namespace

std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("eigenvalues: matrix must be square");
  if (!m.allFinite()) throw NumericalError("eigenvalues: matrix has non-finite entries");
  if (m.rows() == 0) return {};
  Eigen::MatrixXd a = m;
  balance(a);
  reduce_hessenberg(a);
  return hessenberg_qr(a);
}

std::vector<double> characteristic_polynomial(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("characteristic_polynomial: matrix must be square");
  const Eigen::Index n = m.rows();
  std::vector<double> coeffs(static_cast<std::size_t>(n) + 1, 0.0);
  coeffs[0] = 1.0;
  Eigen::MatrixXd mk = Eigen::MatrixXd::Zero(n, n);
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    mk = m * mk + coeffs[static_cast<std::size_t>(k - 1)] * eye;
    coeffs[static_cast<std::size_t>(k)] = -(m * mk).trace() / static_cast<double>(k);
  }
  return coeffs;
}

RouthResult routh_hurwitz(std::span<const double> coeffs) {
  if (coeffs.empty() || !(coeffs[0] > 0.0)) {
    throw InvalidArgument("routh_hurwitz: leading coefficient must be positive");
  }
  const std::size_t degree = coeffs.size() - 1;
  const std::size_t width = degree / 2 + 1;
  std::vector<double> prev(width + 1, 0.0), cur(width + 1, 0.0);
  for (std::size_t j = 0; j < width; ++j) {
    if (2 * j < coeffs.size()) prev[j] = coeffs[2 * j];
    if (2 * j + 1 < coeffs.size()) cur[j] = coeffs[2 * j + 1];
  }

  RouthResult result;
  double last = prev[0];
  auto row_scale = [](const std::vector<double>& row) {
    double s = 0.0;
    for (double v : row) s = std::max(s, std::abs(v));
    return s;
  };
  constexpr double kZero = 1e-13;

  for (std::size_t row = 1; row <= degree; ++row) {
    const double scale = std::max(row_scale(prev), row_scale(cur));
    if (std::abs(cur[0]) <= kZero * scale) {
      result.degenerate = true;
      return result;
    }
    if ((cur[0] > 0.0) != (last > 0.0)) ++result.sign_changes;
    last = cur[0];
    std::vector<double> next(width + 1, 0.0);
    for (std::size_t j = 0; j < width; ++j) {
      next[j] = (cur[0] * prev[j + 1] - prev[0] * cur[j + 1]) / cur[0];
    }
    prev = std::move(cur);
    cur = std::move(next);
  }
  result.all_in_left_half_plane = result.sign_changes == 0;
  return result;
}

}  // namespace cavmag::linalg
