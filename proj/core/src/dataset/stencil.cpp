#include "ddfabc/dataset/stencil.hpp"

#include <algorithm>
#include <sstream>

#include "ddfabc/errors.hpp"

namespace ddfabc::dataset {

int StencilSpec::feature_count() const {
  return inward_depth * (2 * tangential_halfwidth + 1) * static_cast<int>(components.size()) * time_levels;
}

int StencilSpec::self_index() const {
  const auto it = std::find(components.begin(), components.end(), Component::kEy);
  if (it == components.end()) return -1;
  return tangential_halfwidth * static_cast<int>(components.size()) + static_cast<int>(it - components.begin());
}

void StencilSpec::validate() const {
  if (inward_depth < 1) throw ArgumentError("stencil: inward_depth must be >= 1");
  if (tangential_halfwidth < 0) throw ArgumentError("stencil: tangential_halfwidth must be >= 0");
  if (components.empty()) throw ArgumentError("stencil: need at least one component");
  if (time_levels != 2) throw ArgumentError("stencil: time_levels must be 2");
  for (std::size_t i = 0; i < components.size(); ++i) {
    for (std::size_t j = i + 1; j < components.size(); ++j) {
      if (components[i] == components[j]) throw ArgumentError("stencil: duplicate component");
    }
  }
}

std::string StencilSpec::components_string() const {
  std::string s;
  for (Component c : components) {
    if (!s.empty()) s += ',';
    s += c == Component::kEx ? "ex" : (c == Component::kEy ? "ey" : "hz");
  }
  return s;
}

std::vector<Component> StencilSpec::parse_components(std::string_view list) {
  std::vector<Component> out;
  std::stringstream ss{std::string(list)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), [](char c) { return c == ' ' || c == '\t'; }), item.end());
    if (item == "ex") {
      out.push_back(Component::kEx);
    } else if (item == "ey") {
      out.push_back(Component::kEy);
    } else if (item == "hz") {
      out.push_back(Component::kHz);
    } else {
      throw ArgumentError("stencil: unknown component '" + item + "'");
    }
  }
  return out;
}

std::string to_string(Side side) {
  switch (side) {
    case Side::kLeft:
      return "left";
    case Side::kRight:
      return "right";
    case Side::kBottom:
      return "bottom";
    case Side::kTop:
      return "top";
  }
  return "?";
}

std::vector<RingEdge> ring_edges(int nx, int ny, const StencilSpec& stencil) {
  const int h = stencil.tangential_halfwidth;
  std::vector<RingEdge> out;
  out.reserve(static_cast<std::size_t>(2 * (nx + ny)));
  for (Side side : {Side::kLeft, Side::kRight}) {
    for (int j = 0; j < ny; ++j) out.push_back({side, j, j - h < 0 || j + h > ny - 1});
  }
  for (Side side : {Side::kBottom, Side::kTop}) {
    for (int i = 0; i < nx; ++i) out.push_back({side, i, i - h < 0 || i + h > nx - 1});
  }
  return out;
}

double ring_value(const fdtd::FieldGrid& g, const RingEdge& e) {
  switch (e.side) {
    case Side::kLeft:
      return g.ey(0, e.index);
    case Side::kRight:
      return g.ey(g.nx(), e.index);
    case Side::kBottom:
      return g.ex(e.index, 0);
    case Side::kTop:
      return g.ex(e.index, g.ny());
  }
  return 0.0;
}

double& ring_value(fdtd::FieldGrid& g, const RingEdge& e) {
  switch (e.side) {
    case Side::kLeft:
      return g.ey(0, e.index);
    case Side::kRight:
      return g.ey(g.nx(), e.index);
    case Side::kBottom:
      return g.ex(e.index, 0);
    case Side::kTop:
      break;
  }
  return g.ex(e.index, g.ny());
}

double target_sign(Side) { return 1.0; }

namespace {

double at(const fdtd::Array2D& a, int i, int j) { return a.contains(i, j) ? a(i, j) : 0.0; }

// Canonical (normal E, tangential E, Hz) at inward layer k, tangential
// position v along the side.
struct Sample {
  double normal;
  double tangential;
  double hz;
};

Sample sample(const fdtd::FieldGrid& g, Side side, int k, int v) {
  const int nx = g.nx();
  const int ny = g.ny();
  switch (side) {
    case Side::kLeft:
      return {at(g.ex, k, v), at(g.ey, k, v), at(g.hz, k, v)};
    case Side::kRight:
      return {-at(g.ex, nx - 1 - k, v), at(g.ey, nx - k, v), -at(g.hz, nx - 1 - k, v)};
    case Side::kBottom:
      return {at(g.ey, v, k), at(g.ex, v, k), -at(g.hz, v, k)};
    case Side::kTop:
      return {-at(g.ey, v, ny - 1 - k), at(g.ex, v, ny - k), at(g.hz, v, ny - 1 - k)};
  }
  return {0.0, 0.0, 0.0};
}

}  // namespace

void gather_level(const fdtd::FieldGrid& snapshot, const RingEdge& edge, const StencilSpec& stencil,
                  std::span<double> out) {
  const int h = stencil.tangential_halfwidth;
  std::size_t p = 0;
  for (int k = 0; k < stencil.inward_depth; ++k) {
    for (int t = -h; t <= h; ++t) {
      const Sample s = sample(snapshot, edge.side, k, edge.index + t);
      for (Component c : stencil.components) {
        out[p++] = c == Component::kEx ? s.normal : (c == Component::kEy ? s.tangential : s.hz);
      }
    }
  }
}

void assemble_features(const fdtd::FieldGrid& current, const fdtd::FieldGrid& previous, const RingEdge& edge,
                       const StencilSpec& stencil, std::span<double> out) {
  if (out.size() != static_cast<std::size_t>(stencil.feature_count())) {
    throw ArgumentError("assemble_features: output has the wrong length");
  }
  const std::size_t half = out.size() / 2;
  gather_level(current, edge, stencil, out.subspan(0, half));
  gather_level(previous, edge, stencil, out.subspan(half, half));
}

void copy_band(const fdtd::FieldGrid& src, fdtd::FieldGrid& dst, const StencilSpec& stencil) {
  const int nx = src.nx();
  const int ny = src.ny();
  const int d = stencil.inward_depth;
  auto copy_if = [&](const fdtd::Array2D& a, fdtd::Array2D& b, auto&& in_band) {
    for (int i = 0; i < a.ni(); ++i) {
      for (int j = 0; j < a.nj(); ++j) {
        if (in_band(i, j)) b(i, j) = a(i, j);
      }
    }
  };
  // ey layer k sits at i = k (left) or nx - k (right); ex/hz at i = k or nx-1-k.
  copy_if(src.ey, dst.ey, [&](int i, int j) { return i < d || i > nx - d || j < d || j > ny - 1 - d; });
  copy_if(src.ex, dst.ex, [&](int i, int j) { return i < d || i > nx - 1 - d || j < d || j > ny - d; });
  copy_if(src.hz, dst.hz, [&](int i, int j) { return i < d || i > nx - 1 - d || j < d || j > ny - 1 - d; });
}

}  // namespace ddfabc::dataset
