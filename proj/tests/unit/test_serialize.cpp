#include <doctest.h>

#include "edgeids/errors.hpp"
#include "edgeids/model.hpp"
#include "edgeids/rng.hpp"
#include "support/temp_dir.hpp"

using namespace edgeids;

namespace {

Dataset tiny_train() {
  return fit_normalize(synthesize(SynthSpec::uniform(600, 3.0, 40)));
}

std::vector<ClassifierModel> one_of_each() {
  const Dataset train = tiny_train();
  TrainConfig cfg;
  cfg.seed = 9;
  cfg.epochs = 2;
  cfg.forest_size = 3;
  cfg.tree_max_depth = 6;
  std::vector<ClassifierModel> models;
  models.push_back(train_mlp(train, Target::Attack, cfg));
  models.push_back(train_nb(train, Target::Category, cfg));
  models.push_back(train_tree(train, Target::Subcategory, cfg));
  models.push_back(train_forest(train, Target::Attack, cfg));
  models.push_back(train_svm(train, Target::Category, cfg));
  return models;
}

} // namespace

TEST_CASE("round trip is byte-identical for all five kinds") {
  for (const ClassifierModel& m : one_of_each()) {
    const auto bytes = serialize(m);
    const ClassifierModel back = deserialize(bytes);
    CHECK(kind_of(back) == kind_of(m));
    CHECK(target_of(back) == target_of(m));
    CHECK(serialize(back) == bytes);
    CHECK(model_size(m) == bytes.size());
  }
}

TEST_CASE("attack MLP payload is header plus 3042 float32 parameters") {
  const Dataset train = tiny_train();
  TrainConfig cfg;
  cfg.epochs = 1;
  const MlpModel attack = train_mlp(train, Target::Attack, cfg);
  const auto bytes = serialize(ClassifierModel{attack});
  // 8 byte file header + 10 byte MLP dimension header (count + 4 sizes)
  CHECK(bytes.size() == 3042 * 4 + 18);
  CHECK(bytes.size() >= 12168);
  CHECK(bytes.size() <= 16000);

  const MlpModel subcat = train_mlp(train, Target::Subcategory, cfg);
  const auto sub_bytes = serialize(ClassifierModel{subcat});
  CHECK(sub_bytes.size() - bytes.size() == (3367 - 3042) * 4);
}

TEST_CASE("decoder reports distinct errors per defect") {
  const Dataset train = tiny_train();
  TrainConfig cfg;
  cfg.epochs = 1;
  auto bytes = serialize(ClassifierModel{train_mlp(train, Target::Attack, cfg)});

  auto code_of = [](const std::vector<std::uint8_t>& b) {
    try {
      deserialize(b);
    } catch (const FormatError& e) {
      return e.code();
    }
    FAIL("expected FormatError");
    return FormatError::Code::BadMagic;
  };

  SUBCASE("flipped magic byte") {
    auto bad = bytes;
    bad[0] ^= 0xff;
    CHECK(code_of(bad) == FormatError::Code::BadMagic);
  }
  SUBCASE("unsupported version") {
    auto bad = bytes;
    bad[4] = 9;
    CHECK(code_of(bad) == FormatError::Code::BadVersion);
  }
  SUBCASE("unknown kind tag") {
    auto bad = bytes;
    bad[6] = 42;
    CHECK(code_of(bad) == FormatError::Code::BadKind);
  }
  SUBCASE("unknown target tag") {
    auto bad = bytes;
    bad[7] = 9;
    CHECK(code_of(bad) == FormatError::Code::BadTarget);
  }
  SUBCASE("truncated payload") {
    auto bad = bytes;
    bad.resize(bad.size() / 2);
    CHECK(code_of(bad) == FormatError::Code::Truncated);
  }
  SUBCASE("trailing garbage") {
    auto bad = bytes;
    bad.push_back(0);
    CHECK(code_of(bad) == FormatError::Code::BadDimensions);
  }
  SUBCASE("empty input") {
    CHECK(code_of({}) == FormatError::Code::BadMagic);
  }
}

TEST_CASE("save/load through the filesystem") {
  testutil::TempDir tmp;
  const Dataset train = tiny_train();
  TrainConfig cfg;
  cfg.seed = 3;
  const ClassifierModel m = train_tree(train, Target::Attack, cfg);
  save_model(m, tmp.file("dt.iids"));
  const ClassifierModel back = load_model(tmp.file("dt.iids"));
  CHECK(serialize(back) == serialize(m));
  CHECK_THROWS_AS(load_model(tmp.file("missing.iids")), DataError);
}

TEST_CASE("content hash is stable and input-sensitive") {
  const std::vector<std::uint8_t> a = {1, 2, 3};
  const std::vector<std::uint8_t> b = {1, 2, 4};
  CHECK(content_hash(a) == content_hash(a));
  CHECK(content_hash(a) != content_hash(b));
  CHECK(content_hash(a).size() == 16);
}
