#include "doctest.h"

#include <stdexcept>
#include <vector>

#include "mtal/metrics.hpp"
#include "mtal/random.hpp"

using namespace mtal;

namespace {

// Brute-force F1 of one class straight from the definition.
double class_f1_oracle(const std::vector<bool>& pred, const std::vector<bool>& gold, bool cls) {
  double tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] == cls && gold[i] == cls) tp += 1;
    if (pred[i] == cls && gold[i] != cls) fp += 1;
    if (pred[i] != cls && gold[i] == cls) fn += 1;
  }
  if (tp + fp + fn == 0) return 1.0;
  if (tp == 0) return 0.0;
  const double p = tp / (tp + fp);
  const double r = tp / (tp + fn);
  return 2 * p * r / (p + r);
}

std::vector<bool> flip(std::vector<bool> v) {
  v.flip();
  return v;
}

}  // namespace

TEST_CASE("hand-computed confusion case") {
  // tp=2 fp=1 fn=1 tn=6
  const std::vector<bool> pred{true, true, true, false, false, false, false, false, false, false};
  const std::vector<bool> gold{true, true, false, true, false, false, false, false, false, false};
  const auto c = confusion(pred, gold);
  CHECK(c == ConfusionCounts{2, 1, 1, 6});
  CHECK(f1_score(c) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(macro_f1(pred, gold) == doctest::Approx(16.0 / 21.0).epsilon(1e-15));
}

TEST_CASE("edge conventions") {
  const std::vector<bool> gold{true, false, true, false};
  CHECK(macro_f1(gold, gold) == 1.0);
  // constant predictor on balanced labels
  CHECK(macro_f1({true, true, true, true}, gold) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  // a class that is absent and never predicted scores 1
  CHECK(macro_f1({false, false}, {false, false}) == 1.0);
  CHECK(f1_score(ConfusionCounts{0, 0, 0, 5}) == 1.0);
  CHECK(f1_score(ConfusionCounts{0, 3, 2, 5}) == 0.0);
  CHECK_THROWS_AS(macro_f1({}, {}), std::invalid_argument);
  CHECK_THROWS_AS(macro_f1({true}, {true, false}), std::invalid_argument);
}

TEST_CASE("threshold rule") {
  CHECK(predict_positive(0.5000001));
  CHECK_FALSE(predict_positive(0.5));
  CHECK_FALSE(predict_positive(0.1));
}

TEST_CASE("macro F1 matches the brute-force oracle exactly") {
  Rng rng(21);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 1 + rng.below(60);
    const double rate = rng.uniform();
    std::vector<bool> pred(n), gold(n);
    for (std::size_t j = 0; j < n; ++j) {
      pred[j] = rng.uniform() < rate;
      gold[j] = rng.uniform() < rate;
    }
    const double expected =
        (class_f1_oracle(pred, gold, true) + class_f1_oracle(pred, gold, false)) / 2.0;
    CHECK(macro_f1(pred, gold) == expected);
    CHECK(macro_f1(flip(pred), flip(gold)) == doctest::Approx(macro_f1(pred, gold)).epsilon(1e-15));
    const auto c = confusion(pred, gold);
    CHECK(c.total() == n);
  }
}
