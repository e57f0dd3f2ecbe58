#include "ddfabc/forest/model_io.hpp"

#include <fstream>
#include <string>

#include "ddfabc/binary_io.hpp"
#include "ddfabc/errors.hpp"

namespace ddfabc::forest {

void write_model(std::ostream& out, const Forest& forest) {
  out.write(kModelMagic.data(), static_cast<std::streamsize>(kModelMagic.size()));
  binio::put_u32(out, static_cast<std::uint32_t>(forest.n_trees()));
  binio::put_u32(out, static_cast<std::uint32_t>(forest.depth()));
  binio::put_u32(out, static_cast<std::uint32_t>(forest.n_features()));
  binio::put_u32(out, static_cast<std::uint32_t>(forest.loss_kind()));
  for (int i = 0; i < forest.n_features(); ++i) {
    binio::put_f64(out, forest.feature_mean()[i]);
    binio::put_f64(out, forest.feature_std()[i]);
  }
  for (int k = 0; k < forest.n_trees(); ++k) {
    const TreeView t = forest.tree(k);
    for (int n = 0; n < t.internal_nodes(); ++n) {
      for (double a : t.node_weights(n)) binio::put_f64(out, a);
      binio::put_f64(out, t.thresholds[n]);
    }
    for (double q : t.leaves) binio::put_f64(out, q);
  }
  if (!out) throw FormatError("model: write failed");
}

Forest read_model(std::istream& in) {
  char magic[8];
  if (!in.read(magic, 8) || std::string_view(magic, 8) != kModelMagic) {
    throw FormatError("model: bad magic (expected DDFABC01)");
  }
  ForestShape shape;
  shape.n_trees = static_cast<int>(binio::get_u32(in));
  shape.depth = static_cast<int>(binio::get_u32(in));
  shape.n_features = static_cast<int>(binio::get_u32(in));
  const std::uint32_t loss_code = binio::get_u32(in);
  if (shape.n_trees < 1 || shape.n_trees > 1 << 16 || shape.depth < 1 || shape.depth > 20 ||
      shape.n_features < 1 || shape.n_features > 1 << 20 || loss_code > 2) {
    throw FormatError("model: implausible header");
  }
  Forest f(shape);
  f.set_loss_kind(static_cast<LossKind>(loss_code));
  for (int i = 0; i < shape.n_features; ++i) {
    f.feature_mean()[i] = binio::get_f64(in);
    f.feature_std()[i] = binio::get_f64(in);
  }
  const int m = shape.n_features;
  for (int k = 0; k < shape.n_trees; ++k) {
    auto w = f.tree_weights(k);
    auto b = f.tree_thresholds(k);
    auto q = f.tree_leaves(k);
    for (int n = 0; n < shape.internal_nodes(); ++n) {
      for (int i = 0; i < m; ++i) w[static_cast<std::size_t>(n) * m + i] = binio::get_f64(in);
      b[n] = binio::get_f64(in);
    }
    for (double& v : q) v = binio::get_f64(in);
  }
  return f;
}

void save_model(const std::filesystem::path& path, const Forest& forest) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write model file " + path.string());
  write_model(out, forest);
}

Forest load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open model file " + path.string());
  return read_model(in);
}

}  // namespace ddfabc::forest
