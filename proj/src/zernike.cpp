#include "clir/zernike.hpp"

#include <cmath>
#include <numbers>

#include "clir/error.hpp"

namespace clir {

namespace {

double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Dense coefficient cube for polynomials of total degree <= order.
class DensePoly {
 public:
  explicit DensePoly(int order) : n_(order + 1), c_(static_cast<std::size_t>(n_ * n_ * n_)) {}

  Complex& at(int r, int s, int t) { return c_[static_cast<std::size_t>((r * n_ + s) * n_ + t)]; }

  std::vector<Monomial> terms() const {
    std::vector<Monomial> out;
    for (int r = 0; r < n_; ++r) {
      for (int s = 0; r + s < n_; ++s) {
        for (int t = 0; r + s + t < n_; ++t) {
          const Complex v = c_[static_cast<std::size_t>((r * n_ + s) * n_ + t)];
          if (v != Complex(0.0, 0.0)) out.push_back({r, s, t, v});
        }
      }
    }
    return out;
  }

 private:
  int n_;
  std::vector<Complex> c_;
};

// Harmonic polynomial e_l^m for m >= 0:
//   c_lm ((i x - y) / 2)^m z^(l-m) sum_mu C(l,mu) C(l-mu,m+mu) (-(x^2+y^2) / (4 z^2))^mu
std::vector<Monomial> harmonic(int l, int m) {
  const double c_lm = std::exp(0.5 * (std::log(2.0 * l + 1) + std::lgamma(l + m + 1.0) + std::lgamma(l - m + 1.0)) -
                               std::lgamma(l + 1.0));
  std::vector<Monomial> out;
  for (int mu = 0; 2 * mu <= l - m; ++mu) {
    const double w = c_lm * binom(l, mu) * binom(l - mu, m + mu) * std::pow(-0.25, mu);
    const int zpow = l - m - 2 * mu;
    // ((i x - y) / 2)^m = sum_a C(m,a) (i/2)^a x^a (-1/2)^(m-a) y^(m-a)
    for (int a = 0; a <= m; ++a) {
      const Complex xy = binom(m, a) * std::pow(Complex(0.0, 0.5), a) * std::pow(-0.5, m - a);
      // (x^2 + y^2)^mu = sum_b C(mu,b) x^(2b) y^(2(mu-b))
      for (int b = 0; b <= mu; ++b) {
        out.push_back({a + 2 * b, (m - a) + 2 * (mu - b), zpow, w * xy * binom(mu, b)});
      }
    }
  }
  return out;
}

}  // namespace

ZernikeBasis build_zernike_basis(int max_order) {
  if (max_order < 0) throw Error(ErrorCode::ConfigError, "negative Zernike order");
  if (max_order > kMaxZernikeOrder) {
    throw Error(ErrorCode::OrderTooLarge, "Zernike order " + std::to_string(max_order) + " exceeds " +
                                              std::to_string(kMaxZernikeOrder));
  }
  ZernikeBasis basis;
  basis.max_order_ = max_order;

  const int kmax = max_order / 2;
  basis.q_.assign(static_cast<std::size_t>(kmax + 1), {});
  for (int k = 0; k <= kmax; ++k) {
    basis.q_[static_cast<std::size_t>(k)].assign(static_cast<std::size_t>(max_order + 1), {});
    for (int l = 0; l + 2 * k <= max_order; ++l) {
      auto& row = basis.q_[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
      for (int nu = 0; nu <= k; ++nu) {
        const double sign = ((k + nu) % 2 == 0) ? 1.0 : -1.0;
        row.push_back(sign / std::pow(2.0, 2 * k) * std::sqrt((2.0 * l + 4.0 * k + 3.0) / 3.0) * binom(2 * k, k) *
                      binom(k, nu) * binom(2 * (k + l + nu) + 1, 2 * k) / binom(k + l + nu, k));
      }
    }
  }

  for (int n = 0; n <= max_order; ++n) {
    for (int l = n % 2; l <= n; l += 2) {
      const int k = (n - l) / 2;
      std::vector<std::vector<Monomial>> positive(static_cast<std::size_t>(l + 1));
      for (int m = 0; m <= l; ++m) {
        const auto e = harmonic(l, m);
        DensePoly poly(max_order);
        for (int nu = 0; nu <= k; ++nu) {
          const double qv = basis.q(k, l, nu);
          // |x|^(2 nu) = sum over a+b+c = nu of nu!/(a! b! c!) x^2a y^2b z^2c
          for (int a = 0; a <= nu; ++a) {
            for (int b = 0; a + b <= nu; ++b) {
              const int c = nu - a - b;
              const double multi = binom(nu, a) * binom(nu - a, b);
              for (const auto& term : e) {
                poly.at(term.r + 2 * a, term.s + 2 * b, term.t + 2 * c) += qv * multi * term.coeff;
              }
            }
          }
        }
        positive[static_cast<std::size_t>(m)] = poly.terms();
      }
      for (int m = -l; m <= l; ++m) {
        basis.indices_.push_back({n, l, m});
        if (m >= 0) {
          basis.chi_.push_back(positive[static_cast<std::size_t>(m)]);
        } else {
          // Z_nl^-m = (-1)^m conj(Z_nl^m)
          auto terms = positive[static_cast<std::size_t>(-m)];
          const double sign = (-m) % 2 == 0 ? 1.0 : -1.0;
          for (auto& t : terms) t.coeff = sign * std::conj(t.coeff);
          basis.chi_.push_back(std::move(terms));
        }
      }
    }
  }
  return basis;
}

std::size_t ZernikeBasis::position(int n, int l, int m) const {
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i].n == n && indices_[i].l == l && indices_[i].m == m) return i;
  }
  throw Error(ErrorCode::NotFound, "no Zernike function (" + std::to_string(n) + "," + std::to_string(l) + "," +
                                       std::to_string(m) + ")");
}

double ZernikeBasis::q(int k, int l, int nu) const {
  return q_.at(static_cast<std::size_t>(k)).at(static_cast<std::size_t>(l)).at(static_cast<std::size_t>(nu));
}

Complex ZernikeBasis::evaluate(std::size_t i, const Vec3& x) const {
  Complex sum(0.0, 0.0);
  for (const auto& t : chi_[i]) {
    sum += t.coeff * std::pow(x.x(), t.r) * std::pow(x.y(), t.s) * std::pow(x.z(), t.t);
  }
  return sum;
}

std::vector<Complex> zernike_moments(const MomentTable& moments, const ZernikeBasis& basis) {
  if (moments.order() < basis.max_order()) {
    throw Error(ErrorCode::ConfigError, "geometric moments computed to a lower order than the basis");
  }
  const double prefactor = 3.0 / (4.0 * std::numbers::pi);
  std::vector<Complex> out(basis.indices().size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    Complex sum(0.0, 0.0);
    for (const auto& t : basis.chi(i)) sum += std::conj(t.coeff) * moments.at(t.r, t.s, t.t);
    out[i] = prefactor * sum;
  }
  return out;
}

std::vector<Complex> zernike_moments(const VoxelGrid& grid, const ZernikeBasis& basis) {
  return zernike_moments(geometric_moments(grid, basis.max_order()), basis);
}

ZernikeDescriptor zernike_descriptor(const std::vector<Complex>& moments, const ZernikeBasis& basis) {
  ZernikeDescriptor out;
  const auto& idx = basis.indices();
  for (std::size_t i = 0; i < idx.size();) {
    const int n = idx[i].n, l = idx[i].l;
    double sum = 0.0;
    for (; i < idx.size() && idx[i].n == n && idx[i].l == l; ++i) sum += std::norm(moments[i]);
    out.nl.emplace_back(n, l);
    out.f_nl.push_back(std::sqrt(sum));
  }
  return out;
}

ZernikeDescriptor zernike_descriptor(const VoxelGrid& grid, int max_order) {
  const ZernikeBasis basis = build_zernike_basis(max_order);
  return zernike_descriptor(zernike_moments(grid, basis), basis);
}

}  // namespace clir
