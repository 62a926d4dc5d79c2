#include "lrsca/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <optional>

namespace lrsca {

namespace {

constexpr double kSize = 600.0;
constexpr double kMargin = 0.08;
const double kSqrt3 = std::sqrt(3.0);

struct Pt {
  double u;
  double v;
};

std::optional<Pt> chart(std::span<const double> x) {
  const double s = x[0] + x[1] + x[2];
  const double scale = std::max({std::abs(x[0]), std::abs(x[1]), std::abs(x[2])});
  if (scale == 0.0 || std::abs(s) <= 1e-9 * scale) return std::nullopt;
  const double a = x[0] / s;
  const double b = x[1] / s;
  return Pt{a + b / 2.0, b * kSqrt3 / 2.0};
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

struct Box {
  double u0, u1, v0, v1;
};

// Liang-Barsky clip of p + t d, t in [lo, hi].
std::optional<std::array<Pt, 2>> clip(Pt p, Pt d, double lo, double hi, const Box& box) {
  const std::array<double, 4> q{p.u - box.u0, box.u1 - p.u, p.v - box.v0, box.v1 - p.v};
  const std::array<double, 4> pp{-d.u, d.u, -d.v, d.v};
  for (std::size_t i = 0; i < 4; ++i) {
    if (pp[i] == 0.0) {
      if (q[i] < 0.0) return std::nullopt;
      continue;
    }
    const double t = q[i] / pp[i];
    if (pp[i] < 0.0) {
      lo = std::max(lo, t);
    } else {
      hi = std::min(hi, t);
    }
  }
  if (lo > hi) return std::nullopt;
  return std::array<Pt, 2>{Pt{p.u + lo * d.u, p.v + lo * d.v}, Pt{p.u + hi * d.u, p.v + hi * d.v}};
}

std::array<double, 3> cross(std::span<const double> a, std::span<const double> b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// n . x restricted to the chart, as a u + b v + c.
std::array<double, 3> chart_line(const std::array<double, 3>& n) {
  auto f = [&](double u, double v) {
    const double x2 = 2.0 * v / kSqrt3;
    const double x1 = u - x2 / 2.0;
    return n[0] * x1 + n[1] * x2 + n[2] * (1.0 - x1 - x2);
  };
  const double c = f(0.0, 0.0);
  return {f(1.0, 0.0) - c, f(0.0, 1.0) - c, c};
}

}  // namespace

std::string projective_svg(const Matrix<double>& m, const std::vector<Matrix<double>>& dictionaries) {
  if (m.rows() != 3) throw Error(Errc::invalid_r, "plots need three-dimensional data");
  for (const auto& d : dictionaries)
    if (d.rows() != 3 || d.cols() != 3) throw Error(Errc::invalid_r, "plots need 3 x 3 dictionaries");

  std::vector<Pt> data;
  for (std::size_t i = 0; i < m.cols(); ++i)
    if (auto p = chart(m.col(i))) data.push_back(*p);
  std::vector<std::vector<Pt>> atoms;
  for (const auto& d : dictionaries) {
    atoms.emplace_back();
    for (std::size_t i = 0; i < 3; ++i)
      if (auto p = chart(d.col(i))) atoms.back().push_back(*p);
  }

  Box box{0.0, 1.0, 0.0, kSqrt3 / 2.0};
  auto grow = [&](const Pt& p) {
    box.u0 = std::min(box.u0, p.u);
    box.u1 = std::max(box.u1, p.u);
    box.v0 = std::min(box.v0, p.v);
    box.v1 = std::max(box.v1, p.v);
  };
  for (const auto& p : data) grow(p);
  for (const auto& list : atoms)
    for (const auto& p : list) grow(p);
  const double span = std::max(box.u1 - box.u0, box.v1 - box.v0);
  const double cu = (box.u0 + box.u1) / 2.0;
  const double cv = (box.v0 + box.v1) / 2.0;
  const double half = span * (0.5 + kMargin);
  box = Box{cu - half, cu + half, cv - half, cv + half};

  auto sx = [&](double u) { return fmt((u - box.u0) / (box.u1 - box.u0) * kSize); };
  auto sy = [&](double v) { return fmt((box.v1 - v) / (box.v1 - box.v0) * kSize); };
  const double marker = kSize / 90.0;

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"600\" viewBox=\"0 0 600 600\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"600\" height=\"600\" fill=\"white\"/>\n";

  static const std::array<const char*, 4> colors{"#1f4e9c", "#b03a2e", "#2e7d32", "#6a1b9a"};
  for (std::size_t di = 0; di < dictionaries.size(); ++di) {
    const auto& d = dictionaries[di];
    const char* color = colors[di % colors.size()];
    const std::string dash = di % 2 == 1 ? " stroke-dasharray=\"6 4\"" : "";
    for (std::size_t j = 0; j < 3; ++j) {
      const auto n = cross(d.col((j + 1) % 3), d.col((j + 2) % 3));
      const auto [a, b, c] = chart_line(n);
      const double norm2 = a * a + b * b;
      if (norm2 == 0.0) continue;
      const Pt p{-c * a / norm2, -c * b / norm2};
      const double reach = 4.0 * half + std::hypot(p.u - cu, p.v - cv);
      const double len = std::sqrt(norm2);
      if (auto seg = clip(p, Pt{-b / len, a / len}, -reach, reach, box)) {
        out += "<line x1=\"" + sx((*seg)[0].u) + "\" y1=\"" + sy((*seg)[0].v) + "\" x2=\"" + sx((*seg)[1].u) +
               "\" y2=\"" + sy((*seg)[1].v) + "\" stroke=\"" + color + "\" stroke-width=\"1.5\"" + dash + "/>\n";
      }
    }
  }
  for (const auto& p : data) {
    out += "<circle cx=\"" + sx(p.u) + "\" cy=\"" + sy(p.v) + "\" r=\"" + fmt(marker * 0.6) + "\" fill=\"black\"/>\n";
  }
  for (std::size_t di = 0; di < atoms.size(); ++di) {
    const char* color = colors[di % colors.size()];
    for (const auto& p : atoms[di]) {
      if (di % 2 == 0) {
        out += "<circle cx=\"" + sx(p.u) + "\" cy=\"" + sy(p.v) + "\" r=\"" + fmt(marker) + "\" fill=\"none\" stroke=\"" +
               color + "\" stroke-width=\"1.5\"/>\n";
      } else {
        const double px = (p.u - box.u0) / (box.u1 - box.u0) * kSize - marker;
        const double py = (box.v1 - p.v) / (box.v1 - box.v0) * kSize - marker;
        out += "<rect x=\"" + fmt(px) + "\" y=\"" + fmt(py) + "\" width=\"" + fmt(2 * marker) + "\" height=\"" +
               fmt(2 * marker) + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\"/>\n";
      }
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace lrsca
