#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "clir/slicer.hpp"

namespace clir {

enum class ScalingMode : std::uint8_t { raw = 0, signed_log = 1 };

std::string_view to_string(ScalingMode mode);
ScalingMode parse_scaling_mode(std::string_view text);

using Feature = std::array<double, 7>;

struct HuVector {
  Feature phi{};
  ScalingMode mode = ScalingMode::signed_log;

  friend bool operator==(const HuVector&, const HuVector&) = default;
};

/// Sum over set pixels of col^p * row^q, pixel centres at integer coordinates.
double raw_moment(const BinaryImage& img, int p, int q);

/// eta[p][q] for p + q <= 3. Central moments are formed in exact integer
/// arithmetic, so pixel translations leave them bit-identical.
std::array<std::array<double, 4>, 4> normalized_central_moments(const BinaryImage& img);

/// Hu's seven invariants. In signed_log mode each raw value v becomes
/// sign(v) * log10(|v| + 1e-30).
HuVector hu_invariants(const BinaryImage& img, ScalingMode mode = ScalingMode::signed_log);

Feature signed_log(const Feature& raw);

double hu_distance(const HuVector& a, const HuVector& b);

}  // namespace clir
