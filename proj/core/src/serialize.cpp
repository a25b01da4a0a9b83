#include <bit>
#include <cstring>
#include <fstream>

#include "edgeids/errors.hpp"
#include "edgeids/model.hpp"

namespace edgeids {

namespace {

constexpr std::array<std::uint8_t, 4> kMagic = {0x49, 0x49, 0x44, 0x53}; // "IIDS"
constexpr std::uint16_t kVersion = 1;

class Writer {
public:
  std::vector<std::uint8_t> bytes;

  void u8(std::uint8_t v) { bytes.push_back(v); }
  void u16(std::uint16_t v) {
    bytes.push_back(static_cast<std::uint8_t>(v & 0xff));
    bytes.push_back(static_cast<std::uint8_t>(v >> 8));
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
  }
  void i32(std::int32_t v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void f32s(std::span<const float> vs) {
    for (const float v : vs) f32(v);
  }
};

class Reader {
public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint8_t u8() {
    need(1);
    return bytes_[pos_++];
  }
  std::uint16_t u16() {
    need(2);
    const std::uint16_t v = static_cast<std::uint16_t>(bytes_[pos_]) |
                            static_cast<std::uint16_t>(bytes_[pos_ + 1]) << 8;
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::int32_t i32() { return std::bit_cast<std::int32_t>(u32()); }
  float f32() { return std::bit_cast<float>(u32()); }
  void f32s(std::span<float> out) {
    for (float& v : out) v = f32();
  }
  bool done() const { return pos_ == bytes_.size(); }

private:
  void need(std::size_t n) {
    if (pos_ + n > bytes_.size())
      throw FormatError(FormatError::Code::Truncated,
                        "model payload truncated at byte " + std::to_string(pos_));
  }
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

Target read_target(std::uint8_t raw) {
  if (raw < 1 || raw > 3)
    throw FormatError(FormatError::Code::BadTarget,
                      "unknown target tag " + std::to_string(raw));
  return static_cast<Target>(raw);
}

void write_tree_nodes(Writer& w, const TreeModel& tree) {
  w.u32(static_cast<std::uint32_t>(tree.nodes.size()));
  for (const auto& node : tree.nodes) {
    w.i32(node.feature);
    w.f32(node.threshold);
    w.u32(static_cast<std::uint32_t>(node.left));
    w.u32(static_cast<std::uint32_t>(node.right));
    w.f32s(node.dist);
  }
}

TreeModel read_tree_nodes(Reader& r, Target target, int classes) {
  TreeModel tree;
  tree.target = target;
  tree.classes = classes;
  const std::uint32_t count = r.u32();
  if (count == 0 || count > (1u << 24))
    throw FormatError(FormatError::Code::BadDimensions,
                      "implausible tree node count " + std::to_string(count));
  tree.nodes.resize(count);
  for (auto& node : tree.nodes) {
    node.feature = r.i32();
    node.threshold = r.f32();
    node.left = static_cast<std::int32_t>(r.u32());
    node.right = static_cast<std::int32_t>(r.u32());
    node.dist.resize(classes);
    r.f32s(node.dist);
  }
  try {
    tree.validate();
  } catch (const Error& e) {
    throw FormatError(FormatError::Code::BadDimensions, e.what());
  }
  return tree;
}

void check_feature_dim(std::uint16_t features) {
  if (features != kFeatureCount)
    throw FormatError(FormatError::Code::BadDimensions,
                      "feature arity " + std::to_string(features) + ", expected " +
                          std::to_string(kFeatureCount));
}

void check_class_dim(std::uint16_t classes, Target target) {
  if (classes != class_count(target))
    throw FormatError(FormatError::Code::BadDimensions,
                      "class count " + std::to_string(classes) + " does not match target " +
                          target_name(target));
}

} // namespace

std::vector<std::uint8_t> serialize(const ClassifierModel& m) {
  std::visit([](const auto& v) { v.validate(); }, m);

  Writer w;
  w.bytes.insert(w.bytes.end(), kMagic.begin(), kMagic.end());
  w.u16(kVersion);
  w.u8(static_cast<std::uint8_t>(kind_of(m)));
  w.u8(static_cast<std::uint8_t>(target_of(m)));

  std::visit(
      [&](const auto& v) {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, MlpModel>) {
          const auto& sizes = v.topology.layer_sizes;
          w.u16(static_cast<std::uint16_t>(sizes.size()));
          for (const int s : sizes) w.u16(static_cast<std::uint16_t>(s));
          for (std::size_t l = 0; l < v.weights.size(); ++l) {
            w.f32s(v.weights[l]);
            w.f32s(v.biases[l]);
          }
        } else if constexpr (std::is_same_v<V, NbModel>) {
          w.u16(static_cast<std::uint16_t>(v.classes));
          w.u16(kFeatureCount);
          w.f32s(v.priors);
          w.f32s(v.means);
          w.f32s(v.variances);
        } else if constexpr (std::is_same_v<V, TreeModel>) {
          w.u16(static_cast<std::uint16_t>(v.classes));
          w.u16(kFeatureCount);
          write_tree_nodes(w, v);
        } else if constexpr (std::is_same_v<V, ForestModel>) {
          w.u16(static_cast<std::uint16_t>(v.classes));
          w.u16(kFeatureCount);
          w.u32(static_cast<std::uint32_t>(v.trees.size()));
          for (const auto& tree : v.trees) write_tree_nodes(w, tree);
        } else {
          w.u16(static_cast<std::uint16_t>(v.classes));
          w.u16(kFeatureCount);
          w.f32s(v.weights);
          w.f32s(v.biases);
        }
      },
      m);
  return std::move(w.bytes);
}

ClassifierModel deserialize(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kMagic.size())
    throw FormatError(FormatError::Code::BadMagic, "too short to be a model file");
  Reader r(bytes);
  for (const auto expected : kMagic)
    if (r.u8() != expected)
      throw FormatError(FormatError::Code::BadMagic, "bad magic, not a model file");
  const std::uint16_t version = r.u16();
  if (version != kVersion)
    throw FormatError(FormatError::Code::BadVersion,
                      "unsupported format version " + std::to_string(version));
  const std::uint8_t kind_raw = r.u8();
  if (kind_raw < 1 || kind_raw > 5)
    throw FormatError(FormatError::Code::BadKind,
                      "unknown model kind tag " + std::to_string(kind_raw));
  const auto kind = static_cast<ModelKind>(kind_raw);
  const Target target = read_target(r.u8());

  ClassifierModel model;
  switch (kind) {
    case ModelKind::Mlp: {
      MlpModel m;
      m.target = target;
      const std::uint16_t layers = r.u16();
      if (layers < 2 || layers > 16)
        throw FormatError(FormatError::Code::BadDimensions,
                          "implausible layer count " + std::to_string(layers));
      m.topology.layer_sizes.resize(layers);
      for (auto& s : m.topology.layer_sizes) {
        s = r.u16();
        if (s < 1 || s > 4096)
          throw FormatError(FormatError::Code::BadDimensions,
                            "implausible layer size " + std::to_string(s));
      }
      for (std::size_t l = 0; l + 1 < m.topology.layer_sizes.size(); ++l) {
        const auto in = static_cast<std::size_t>(m.topology.layer_sizes[l]);
        const auto out = static_cast<std::size_t>(m.topology.layer_sizes[l + 1]);
        m.weights.emplace_back(in * out);
        r.f32s(m.weights.back());
        m.biases.emplace_back(out);
        r.f32s(m.biases.back());
      }
      model = std::move(m);
      break;
    }
    case ModelKind::NaiveBayes: {
      NbModel m;
      m.target = target;
      const std::uint16_t classes = r.u16();
      check_class_dim(classes, target);
      check_feature_dim(r.u16());
      m.classes = classes;
      m.priors.resize(classes);
      r.f32s(m.priors);
      m.means.resize(static_cast<std::size_t>(classes) * kFeatureCount);
      r.f32s(m.means);
      m.variances.resize(m.means.size());
      r.f32s(m.variances);
      model = std::move(m);
      break;
    }
    case ModelKind::DecisionTree: {
      const std::uint16_t classes = r.u16();
      check_class_dim(classes, target);
      check_feature_dim(r.u16());
      model = read_tree_nodes(r, target, classes);
      break;
    }
    case ModelKind::RandomForest: {
      ForestModel m;
      m.target = target;
      const std::uint16_t classes = r.u16();
      check_class_dim(classes, target);
      check_feature_dim(r.u16());
      m.classes = classes;
      const std::uint32_t trees = r.u32();
      if (trees == 0 || trees > (1u << 16))
        throw FormatError(FormatError::Code::BadDimensions,
                          "implausible tree count " + std::to_string(trees));
      for (std::uint32_t t = 0; t < trees; ++t)
        m.trees.push_back(read_tree_nodes(r, target, classes));
      model = std::move(m);
      break;
    }
    case ModelKind::Svm: {
      SvmModel m;
      m.target = target;
      const std::uint16_t classes = r.u16();
      check_class_dim(classes, target);
      check_feature_dim(r.u16());
      m.classes = classes;
      m.weights.resize(static_cast<std::size_t>(classes) * kFeatureCount);
      r.f32s(m.weights);
      m.biases.resize(classes);
      r.f32s(m.biases);
      model = std::move(m);
      break;
    }
  }
  if (!r.done())
    throw FormatError(FormatError::Code::BadDimensions, "trailing bytes after model payload");
  try {
    std::visit([](const auto& v) { v.validate(); }, model);
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(FormatError::Code::BadDimensions, e.what());
  }
  return model;
}

std::uint64_t model_size(const ClassifierModel& m) {
  return serialize(m).size();
}

void save_model(const ClassifierModel& m, const std::string& path) {
  const auto bytes = serialize(m);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

ClassifierModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file: " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

} // namespace edgeids
