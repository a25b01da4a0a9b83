#include <doctest.h>

#include <cmath>
#include <set>

#include "edgeids/errors.hpp"
#include "edgeids/eval.hpp"
#include "edgeids/rng.hpp"
#include "support/oracles.hpp"

using namespace edgeids;

TEST_CASE("confusion tallies directly") {
  const int truth[] = {0, 0, 1, 1};
  const int preds[] = {0, 1, 1, 1};
  const ConfusionMatrix cm = confusion(preds, truth, 2);
  CHECK(cm.at(0, 0) == 1);
  CHECK(cm.at(0, 1) == 1);
  CHECK(cm.at(1, 0) == 0);
  CHECK(cm.at(1, 1) == 2);
  CHECK(cm.total() == 4);
}

TEST_CASE("confusion: perfect predictions give a diagonal matrix") {
  std::vector<int> truth(50);
  for (std::size_t i = 0; i < truth.size(); ++i) truth[i] = static_cast<int>(i % 5);
  const ConfusionMatrix cm = confusion(truth, truth, 5);
  for (int t = 0; t < 5; ++t)
    for (int p = 0; p < 5; ++p) CHECK(cm.at(t, p) == (t == p ? 10u : 0u));
}

TEST_CASE("confusion: total equals sample count on random pairs") {
  Rng rng(2024);
  std::vector<int> truth(1000), preds(1000);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    truth[i] = static_cast<int>(rng.bounded(6));
    preds[i] = static_cast<int>(rng.bounded(6));
  }
  const ConfusionMatrix cm = confusion(preds, truth, 6);
  CHECK(cm.total() == 1000);
  // against the independent recount
  const auto want = oracle::from_pairs(preds, truth, 6);
  const EvalReport got = metrics(cm);
  CHECK(got.macro.f1 == doctest::Approx(want.macro_f1).epsilon(1e-12));
}

TEST_CASE("confusion input validation") {
  const int truth[] = {0, 1};
  const int preds[] = {0};
  CHECK_THROWS_AS(confusion(preds, truth, 2), DataError);
  const int bad[] = {0, 5};
  CHECK_THROWS_AS(confusion(bad, truth, 2), DataError);
}

TEST_CASE("metrics: perfect diagonal yields all ones") {
  ConfusionMatrix cm(3);
  cm.at(0, 0) = 10;
  cm.at(1, 1) = 20;
  cm.at(2, 2) = 5;
  const EvalReport rep = metrics(cm);
  for (const auto& m : rep.per_class) {
    CHECK(m.precision == 1.0);
    CHECK(m.recall == 1.0);
    CHECK(m.f1 == 1.0);
  }
  CHECK(rep.macro.f1 == 1.0);
  CHECK(rep.accuracy == 1.0);
}

TEST_CASE("metrics match the hand-computed 2x2 tally") {
  ConfusionMatrix cm(2);
  cm.at(0, 0) = 9;
  cm.at(0, 1) = 1;
  cm.at(1, 0) = 3;
  cm.at(1, 1) = 7;
  const EvalReport rep = metrics(cm);
  // class 0: TP 9, FP 3, FN 1; class 1: TP 7, FP 1, FN 3
  CHECK(rep.per_class[0].precision == doctest::Approx(9.0 / 12.0).epsilon(1e-12));
  CHECK(rep.per_class[0].recall == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(rep.per_class[1].precision == doctest::Approx(7.0 / 8.0).epsilon(1e-12));
  CHECK(rep.per_class[1].recall == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(rep.accuracy == doctest::Approx(0.8).epsilon(1e-12));

  const std::vector<std::vector<std::uint64_t>> counts = {{9, 1}, {3, 7}};
  const auto want = oracle::from_counts(counts);
  CHECK(rep.macro.precision == doctest::Approx(want.macro_precision).epsilon(1e-12));
  CHECK(rep.macro.recall == doctest::Approx(want.macro_recall).epsilon(1e-12));
  CHECK(rep.macro.f1 == doctest::Approx(want.macro_f1).epsilon(1e-12));
}

TEST_CASE("metrics: absent class scores zero, macro stays defined") {
  ConfusionMatrix cm(3);
  cm.at(0, 0) = 4;
  cm.at(1, 1) = 4;
  const EvalReport rep = metrics(cm);
  CHECK(rep.per_class[2].precision == 0.0);
  CHECK(rep.per_class[2].recall == 0.0);
  CHECK(rep.per_class[2].f1 == 0.0);
  CHECK(rep.macro.f1 == doctest::Approx(2.0 / 3.0));
  // per class min(P,R) <= F1 <= max(P,R)
  for (const auto& m : rep.per_class) {
    CHECK(m.f1 >= std::min(m.precision, m.recall) - 1e-15);
    CHECK(m.f1 <= std::max(m.precision, m.recall) + 1e-15);
  }
}

TEST_CASE("metrics equal the oracle on random matrices") {
  Rng rng(555);
  for (int iter = 0; iter < 200; ++iter) {
    const int k = 2 + static_cast<int>(rng.bounded(6));
    ConfusionMatrix cm(k);
    std::vector<std::vector<std::uint64_t>> counts(k, std::vector<std::uint64_t>(k));
    for (int t = 0; t < k; ++t)
      for (int p = 0; p < k; ++p) {
        const auto v = rng.bounded(50);
        cm.at(t, p) = v;
        counts[t][p] = v;
      }
    const EvalReport got = metrics(cm);
    const auto want = oracle::from_counts(counts);
    for (int c = 0; c < k; ++c) {
      CHECK(got.per_class[c].precision ==
            doctest::Approx(want.per_class[c].precision).epsilon(1e-12));
      CHECK(got.per_class[c].recall ==
            doctest::Approx(want.per_class[c].recall).epsilon(1e-12));
      CHECK(got.per_class[c].f1 == doctest::Approx(want.per_class[c].f1).epsilon(1e-12));
    }
    CHECK(got.macro.f1 == doctest::Approx(want.macro_f1).epsilon(1e-12));
    CHECK(got.accuracy == doctest::Approx(want.accuracy).epsilon(1e-12));
  }
}

TEST_CASE("metrics: consistent label permutation permutes per-class, fixes macro") {
  Rng rng(99);
  const int k = 5;
  std::vector<int> truth(4000), preds(4000);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    truth[i] = static_cast<int>(rng.bounded(k));
    preds[i] = static_cast<int>(rng.bounded(k));
  }
  std::vector<int> perm = {3, 0, 4, 1, 2};
  std::vector<int> truth_p(truth.size()), preds_p(preds.size());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    truth_p[i] = perm[truth[i]];
    preds_p[i] = perm[preds[i]];
  }
  const EvalReport base = metrics(confusion(preds, truth, k));
  const EvalReport permuted = metrics(confusion(preds_p, truth_p, k));
  for (int c = 0; c < k; ++c) {
    CHECK(permuted.per_class[perm[c]].precision ==
          doctest::Approx(base.per_class[c].precision).epsilon(1e-12));
    CHECK(permuted.per_class[perm[c]].f1 ==
          doctest::Approx(base.per_class[c].f1).epsilon(1e-12));
  }
  CHECK(permuted.macro.f1 == doctest::Approx(base.macro.f1).epsilon(1e-12));
  CHECK(permuted.macro.precision == doctest::Approx(base.macro.precision).epsilon(1e-12));
}

TEST_CASE("metrics: duplicating the evaluation set leaves macro F1 unchanged") {
  Rng rng(123);
  const int k = 4;
  ConfusionMatrix cm(k), doubled(k);
  for (int t = 0; t < k; ++t)
    for (int p = 0; p < k; ++p) {
      const auto v = rng.bounded(30) + 1;
      cm.at(t, p) = v;
      doubled.at(t, p) = 2 * v;
    }
  CHECK(metrics(doubled).macro.f1 == doctest::Approx(metrics(cm).macro.f1).epsilon(1e-12));
}

namespace {

EvalReport report_named(std::string name, double f1, std::uint64_t size,
                        Target target = Target::Attack) {
  EvalReport r;
  r.model_name = std::move(name);
  r.macro.f1 = f1;
  r.macro.precision = f1;
  r.macro.recall = f1;
  r.model_size_bytes = size;
  r.target = target;
  return r;
}

} // namespace

TEST_CASE("select eliminates below-floor models and ranks by (F1, size)") {
  // Table 2 attack column: XGB 1.00/0.38MB, SVM 0.99/164KB, NB 0.62/1.35KB,
  // RFC 0.98/123KB, DT 0.99/2.23KB, MLP 1.00/15.2KB
  std::vector<EvalReport> reports = {
      report_named("xgb", 1.00, 398459),
      report_named("svm", 0.99, 167936),
      report_named("nb", 0.62, 1382),
      report_named("rfc", 0.98, 125952),
      report_named("dt", 0.99, 2284),
      report_named("mlp", 1.00, 15565),
  };
  const Selection sel = select(reports, SelectionRule{});
  REQUIRE(sel.eliminated.size() == 1);
  CHECK(sel.eliminated[0] == "nb");
  REQUIRE(sel.ranked.size() == 5);
  CHECK(sel.ranked[0] == "mlp"); // F1 ties with xgb, smaller size wins
  CHECK(sel.ranked[1] == "xgb");
  CHECK(sel.ranked[2] == "dt"); // 0.99 tie with svm, smaller
  CHECK(sel.ranked[3] == "svm");
  CHECK(sel.ranked[4] == "rfc");
}

TEST_CASE("select: all below floor empties the ranking") {
  std::vector<EvalReport> reports = {report_named("a", 0.5, 10), report_named("b", 0.2, 5)};
  const Selection sel = select(reports, SelectionRule{});
  CHECK(sel.ranked.empty());
  CHECK(sel.eliminated == std::vector<std::string>{"a", "b"});
}

TEST_CASE("select: identical reports rank by name") {
  std::vector<EvalReport> reports = {report_named("zeta", 0.95, 100),
                                     report_named("alpha", 0.95, 100)};
  const Selection sel = select(reports, SelectionRule{});
  CHECK(sel.ranked == std::vector<std::string>{"alpha", "zeta"});
}

TEST_CASE("select output partitions the input names") {
  Rng rng(6);
  std::vector<EvalReport> reports;
  for (int i = 0; i < 20; ++i)
    reports.push_back(report_named("m" + std::to_string(i), rng.uniform(), rng.bounded(1000)));
  const Selection sel = select(reports, SelectionRule{0.5});
  CHECK(sel.ranked.size() + sel.eliminated.size() == reports.size());
  std::set<std::string> seen;
  for (const auto& n : sel.ranked) CHECK(seen.insert(n).second);
  for (const auto& n : sel.eliminated) CHECK(seen.insert(n).second);
}

TEST_CASE("select rejects mixed targets and empty input") {
  std::vector<EvalReport> empty;
  CHECK_THROWS_AS(select(empty, SelectionRule{}), DataError);
  std::vector<EvalReport> mixed = {report_named("a", 0.9, 1, Target::Attack),
                                   report_named("b", 0.9, 1, Target::Category)};
  CHECK_THROWS_AS(select(mixed, SelectionRule{}), DataError);
}
