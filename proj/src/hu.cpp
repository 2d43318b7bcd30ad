#include "clir/hu.hpp"

#include <cmath>

#include "clir/error.hpp"

namespace clir {

namespace {

using i128 = __int128;

struct IntegerMoments {
  // m[p][q] for p + q <= 3, coordinates are pixel indices.
  std::int64_t m[4][4] = {};
};

IntegerMoments integer_moments(const BinaryImage& img) {
  IntegerMoments out;
  for (int row = 0; row < img.height(); ++row) {
    std::int64_t n = 0, sx = 0, sxx = 0, sxxx = 0;
    for (int col = 0; col < img.width(); ++col) {
      if (!img.at(col, row)) continue;
      const std::int64_t c = col;
      n += 1;
      sx += c;
      sxx += c * c;
      sxxx += c * c * c;
    }
    if (n == 0) continue;
    const std::int64_t r = row;
    const std::int64_t per_p[4] = {n, sx, sxx, sxxx};
    for (int p = 0; p <= 3; ++p) {
      std::int64_t rq = 1;
      for (int q = 0; p + q <= 3; ++q) {
        out.m[p][q] += per_p[p] * rq;
        rq *= r;
      }
    }
  }
  return out;
}

i128 binom(int n, int k) {
  static const int table[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
  return table[n][k];
}

i128 ipow(i128 base, int e) {
  i128 r = 1;
  while (e-- > 0) r *= base;
  return r;
}

}  // namespace

std::string_view to_string(ScalingMode mode) {
  return mode == ScalingMode::raw ? "raw" : "signed_log";
}

ScalingMode parse_scaling_mode(std::string_view text) {
  if (text == "raw") return ScalingMode::raw;
  if (text == "signed_log") return ScalingMode::signed_log;
  throw Error(ErrorCode::ConfigError, "unknown scaling mode '" + std::string(text) + "'");
}

double raw_moment(const BinaryImage& img, int p, int q) {
  double sum = 0.0;
  for (int row = 0; row < img.height(); ++row) {
    for (int col = 0; col < img.width(); ++col) {
      if (img.at(col, row)) sum += std::pow(col, p) * std::pow(row, q);
    }
  }
  return sum;
}

std::array<std::array<double, 4>, 4> normalized_central_moments(const BinaryImage& img) {
  const IntegerMoments im = integer_moments(img);
  const i128 n = im.m[0][0];
  if (n == 0) throw Error(ErrorCode::EmptySet, "image has no set pixels");
  const i128 m10 = im.m[1][0], m01 = im.m[0][1];

  // n^(p+q) * mu_pq = sum (n*x - m10)^p (n*y - m01)^q, expanded over raw moments.
  std::array<std::array<double, 4>, 4> eta{};
  for (int p = 0; p <= 3; ++p) {
    for (int q = 0; p + q <= 3; ++q) {
      i128 s = 0;
      for (int i = 0; i <= p; ++i) {
        for (int j = 0; j <= q; ++j) {
          s += binom(p, i) * binom(q, j) * ipow(n, i + j) * ipow(-m10, p - i) * ipow(-m01, q - j) *
               static_cast<i128>(im.m[i][j]);
        }
      }
      const double nd = static_cast<double>(n);
      const double mu = static_cast<double>(s) / std::pow(nd, p + q);
      eta[p][q] = mu / std::pow(nd, 1.0 + (p + q) / 2.0);
    }
  }
  return eta;
}

Feature signed_log(const Feature& raw) {
  Feature out{};
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const double v = raw[i];
    const double sign = (v > 0) - (v < 0);
    out[i] = sign * std::log10(std::abs(v) + 1e-30);
  }
  return out;
}

HuVector hu_invariants(const BinaryImage& img, ScalingMode mode) {
  const auto e = normalized_central_moments(img);
  const double n20 = e[2][0], n02 = e[0][2], n11 = e[1][1];
  const double n30 = e[3][0], n03 = e[0][3], n21 = e[2][1], n12 = e[1][2];

  const double a = n30 + n12;  // recurring sums
  const double b = n21 + n03;
  const double c = n30 - 3 * n12;
  const double d = 3 * n21 - n03;

  Feature phi{};
  phi[0] = n20 + n02;
  phi[1] = (n20 - n02) * (n20 - n02) + 4 * n11 * n11;
  phi[2] = c * c + d * d;
  phi[3] = a * a + b * b;
  phi[4] = c * a * (a * a - 3 * b * b) + d * b * (3 * a * a - b * b);
  phi[5] = (n20 - n02) * (a * a - b * b) + 4 * n11 * a * b;
  phi[6] = d * a * (a * a - 3 * b * b) - c * b * (3 * a * a - b * b);

  HuVector out;
  out.mode = mode;
  out.phi = mode == ScalingMode::signed_log ? signed_log(phi) : phi;
  return out;
}

double hu_distance(const HuVector& a, const HuVector& b) {
  if (a.mode != b.mode) throw Error(ErrorCode::ModeMismatch, "HuVector scaling modes differ");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.phi.size(); ++i) {
    const double d = a.phi[i] - b.phi[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

}  // namespace clir
