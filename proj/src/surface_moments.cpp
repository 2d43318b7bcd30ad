#include "clir/surface_moments.hpp"

#include <cctype>
#include <cmath>

#include "clir/error.hpp"
#include "clir/quadrature.hpp"

namespace clir {

namespace {

constexpr int N = kSurfaceMomentOrder;

double binom(int n, int k) {
  static const double table[5][5] = {
      {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0}, {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}};
  return table[n][k];
}

}  // namespace

SurfaceMomentSet surface_moments(const TriangleMesh& mesh, int max_total_order, const Vec3& origin) {
  if (max_total_order < 0 || max_total_order > N) {
    throw Error(ErrorCode::ConfigError, "surface moments are exact up to total order 4");
  }
  const auto& rule = triangle_rule_deg5();
  SurfaceMomentSet out;
  out.origin = origin;
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const double area = triangle_area(mesh, t);
    if (area == 0.0) continue;
    const Vec3 a = mesh.corner(t, 0) - origin;
    const Vec3 b = mesh.corner(t, 1) - origin;
    const Vec3 c = mesh.corner(t, 2) - origin;
    double local[N + 1][N + 1][N + 1] = {};
    for (const auto& pt : rule) {
      const Vec3 p = pt.bary[0] * a + pt.bary[1] * b + pt.bary[2] * c;
      double px[N + 1], py[N + 1], pz[N + 1];
      px[0] = py[0] = pz[0] = 1.0;
      for (int e = 1; e <= N; ++e) {
        px[e] = px[e - 1] * p.x();
        py[e] = py[e - 1] * p.y();
        pz[e] = pz[e - 1] * p.z();
      }
      for (int k = 0; k <= max_total_order; ++k) {
        for (int l = 0; k + l <= max_total_order; ++l) {
          for (int m = 0; k + l + m <= max_total_order; ++m) local[k][l][m] += pt.weight * px[k] * py[l] * pz[m];
        }
      }
    }
    // The Jacobian sqrt(EG - F^2) of the linear map is twice the area and the
    // reference triangle has area 1/2.
    local[0][0][0] = 1.0;
    for (int k = 0; k <= max_total_order; ++k) {
      for (int l = 0; k + l <= max_total_order; ++l) {
        for (int m = 0; k + l + m <= max_total_order; ++m) out.values[k][l][m] += area * local[k][l][m];
      }
    }
  }
  return out;
}

SurfaceMomentSet normalize_surface_moments(const SurfaceMomentSet& raw) {
  const double m000 = raw.at(0, 0, 0);
  if (!(m000 > 0.0)) throw Error(ErrorCode::ZeroMass, "zero surface mass");
  if (raw.centered) throw Error(ErrorCode::ConfigError, "moments are already normalized");

  SurfaceMomentSet out;
  const Vec3 offset = Vec3(raw.at(1, 0, 0), raw.at(0, 1, 0), raw.at(0, 0, 1)) / m000;
  out.centroid = raw.origin + offset;
  const Vec3 shift = -offset;
  double sx[N + 1], sy[N + 1], sz[N + 1];
  sx[0] = sy[0] = sz[0] = 1.0;
  for (int e = 1; e <= N; ++e) {
    sx[e] = sx[e - 1] * shift.x();
    sy[e] = sy[e - 1] * shift.y();
    sz[e] = sz[e - 1] * shift.z();
  }
  for (int k = 0; k <= N; ++k) {
    for (int l = 0; k + l <= N; ++l) {
      for (int m = 0; k + l + m <= N; ++m) {
        double central = 0.0;
        for (int a = 0; a <= k; ++a) {
          for (int b = 0; b <= l; ++b) {
            for (int c = 0; c <= m; ++c) {
              central += binom(k, a) * binom(l, b) * binom(m, c) * sx[k - a] * sy[l - b] * sz[m - c] * raw.at(a, b, c);
            }
          }
        }
        out.values[k][l][m] = central / std::pow(m000, 1.0 + (k + l + m) / 2.0);
      }
    }
  }
  // Exact by construction; avoid leaving rounding residue in the first order.
  out.values[0][0][0] = 1.0;
  out.values[1][0][0] = out.values[0][1][0] = out.values[0][0][1] = 0.0;
  out.centered = true;
  out.scale_normalized = true;
  return out;
}

// ---------------------------------------------------------------------------
// Invariant expressions

struct InvariantExpression::Node {
  enum class Kind { number, moment, add, sub, mul, neg, pow } kind;
  double number = 0.0;
  int k = 0, l = 0, m = 0;
  int exponent = 0;
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const InvariantExpression::Node>;
using Kind = InvariantExpression::Node::Kind;

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorCode::ConfigError, "invariant '" + s_ + "' at " + std::to_string(pos_) + ": " + why);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr binary(Kind kind, NodePtr a, NodePtr b) {
    auto n = std::make_shared<InvariantExpression::Node>();
    n->kind = kind;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
  }

  NodePtr expr() {
    NodePtr left = term();
    while (true) {
      if (accept('+')) left = binary(Kind::add, left, term());
      else if (accept('-')) left = binary(Kind::sub, left, term());
      else return left;
    }
  }

  NodePtr term() {
    NodePtr left = unary();
    while (accept('*')) left = binary(Kind::mul, left, unary());
    return left;
  }

  NodePtr unary() {
    if (accept('-')) {
      auto n = std::make_shared<InvariantExpression::Node>();
      n->kind = Kind::neg;
      n->lhs = unary();
      return n;
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (!accept('^')) return base;
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("exponent must be a non-negative integer");
    auto n = std::make_shared<InvariantExpression::Node>();
    n->kind = Kind::pow;
    n->lhs = std::move(base);
    n->exponent = std::stoi(s_.substr(start, pos_ - start));
    return n;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    if (accept('(')) {
      NodePtr e = expr();
      if (!accept(')')) fail("missing ')'");
      return e;
    }
    auto n = std::make_shared<InvariantExpression::Node>();
    const char c = s_[pos_];
    if (c == 'm') {
      ++pos_;
      int digits[3];
      for (int& d : digits) {
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("moment needs three digits");
        d = s_[pos_++] - '0';
      }
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("moment needs three digits");
      if (digits[0] + digits[1] + digits[2] > N) fail("moment order above 4");
      n->kind = Kind::moment;
      n->k = digits[0];
      n->l = digits[1];
      n->m = digits[2];
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      try {
        n->number = std::stod(s_.substr(pos_), &used);
      } catch (const std::exception&) {
        fail("bad number");
      }
      pos_ += used;
      n->kind = Kind::number;
      return n;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

double eval(const InvariantExpression::Node& n, const SurfaceMomentSet& mu) {
  switch (n.kind) {
    case Kind::number: return n.number;
    case Kind::moment: return mu.at(n.k, n.l, n.m);
    case Kind::add: return eval(*n.lhs, mu) + eval(*n.rhs, mu);
    case Kind::sub: return eval(*n.lhs, mu) - eval(*n.rhs, mu);
    case Kind::mul: return eval(*n.lhs, mu) * eval(*n.rhs, mu);
    case Kind::neg: return -eval(*n.lhs, mu);
    case Kind::pow: {
      const double base = eval(*n.lhs, mu);
      double r = 1.0;
      for (int i = 0; i < n.exponent; ++i) r *= base;
      return r;
    }
  }
  return 0.0;
}

}  // namespace

InvariantExpression InvariantExpression::parse(const std::string& text) {
  InvariantExpression e;
  e.text_ = text;
  e.root_ = Parser(text).parse();
  return e;
}

double InvariantExpression::evaluate(const SurfaceMomentSet& moments) const { return eval(*root_, moments); }

const std::vector<std::string>& default_surface_invariants() {
  // T2, T3, T4 are the symmetric moment tensors of order 2, 3, 4; the
  // multinomial weights count the index permutations of each entry.
  static const std::vector<std::string> set = {
      // T4_iijj
      "m400 + m040 + m004 + 2*m220 + 2*m202 + 2*m022",
      // T4_ijkl T4_ijkl
      "m400^2 + m040^2 + m004^2 + 4*(m310^2 + m301^2 + m130^2 + m031^2 + m103^2 + m013^2)"
      " + 6*(m220^2 + m202^2 + m022^2) + 12*(m211^2 + m121^2 + m112^2)",
      // A_ij A_ij with A_ij = T4_ijkk
      "(m400 + m220 + m202)^2 + (m220 + m040 + m022)^2 + (m202 + m022 + m004)^2"
      " + 2*((m310 + m130 + m112)^2 + (m301 + m121 + m103)^2 + (m211 + m031 + m013)^2)",
      // T3_iik T3_jjk
      "(m300 + m120 + m102)^2 + (m210 + m030 + m012)^2 + (m201 + m021 + m003)^2",
      // T3_ijk T3_ijk
      "m300^2 + m030^2 + m003^2 + 3*(m210^2 + m201^2 + m120^2 + m021^2 + m102^2 + m012^2) + 6*m111^2",
      // T2_ij A_ij
      "m200*(m400 + m220 + m202) + m020*(m220 + m040 + m022) + m002*(m202 + m022 + m004)"
      " + 2*(m110*(m310 + m130 + m112) + m101*(m301 + m121 + m103) + m011*(m211 + m031 + m013))",
  };
  return set;
}

SurfaceMomentSet centred_surface_moments(const TriangleMesh& mesh) {
  const SurfaceMomentSet first = surface_moments(mesh, 1);
  const double m000 = first.at(0, 0, 0);
  if (!(m000 > 0.0)) return first;
  return surface_moments(mesh, N, Vec3(first.at(1, 0, 0), first.at(0, 1, 0), first.at(0, 0, 1)) / m000);
}

std::vector<InvariantExpression> parse_invariants(const std::vector<std::string>& texts) {
  std::vector<InvariantExpression> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(InvariantExpression::parse(t));
  return out;
}

std::vector<double> surface_descriptor(const TriangleMesh& mesh, const std::vector<InvariantExpression>& invariants) {
  const SurfaceMomentSet mu = normalize_surface_moments(centred_surface_moments(mesh));
  std::vector<double> out;
  out.reserve(invariants.size());
  for (const auto& inv : invariants) out.push_back(inv.evaluate(mu));
  return out;
}

}  // namespace clir
