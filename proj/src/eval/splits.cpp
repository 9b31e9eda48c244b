#include "eval/splits.hpp"

#include <stdexcept>
#include <string>

#include "core/rng.hpp"

namespace lpfusion::eval {

const char* to_string(Scenario scenario) {
  return scenario == Scenario::kPure ? "pure" : "nonpure";
}

namespace {

void shuffle(std::vector<int>& values, core::Rng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(values[i - 1], values[j]);
  }
}

std::vector<int> take(const std::vector<int>& pool, std::size_t begin,
                      std::size_t count) {
  return {pool.begin() + static_cast<std::ptrdiff_t>(begin),
          pool.begin() + static_cast<std::ptrdiff_t>(begin + count)};
}

}  // namespace

std::vector<SplitPlan> make_splits(const core::LabelVector& labels,
                                   Scenario scenario, int n_repeats,
                                   std::uint64_t seed) {
  if (n_repeats < 1) {
    throw std::invalid_argument("make_splits: n_repeats must be >= 1");
  }
  std::vector<int> targets;
  std::vector<int> negatives;
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    (labels.labels()[i] == 1 ? targets : negatives)
        .push_back(static_cast<int>(i));
  }
  if (targets.size() < 10) {
    throw std::invalid_argument("make_splits: need at least 10 targets, got " +
                                std::to_string(targets.size()));
  }
  if (negatives.size() < 2) {
    throw std::invalid_argument(
        "make_splits: need at least 2 negatives, got " +
        std::to_string(negatives.size()));
  }

  std::vector<SplitPlan> plans;
  plans.reserve(static_cast<std::size_t>(n_repeats));
  for (int repeat = 0; repeat < n_repeats; ++repeat) {
    const std::uint64_t repeat_seed =
        core::splitmix64(core::splitmix64(seed) ^
                         static_cast<std::uint64_t>(repeat + 1));
    core::Rng rng(repeat_seed);

    std::vector<int> t = targets;
    std::vector<int> n = negatives;
    shuffle(t, rng);
    shuffle(n, rng);

    // Integer proportions, leftovers to train, then validation, then test.
    const std::size_t nt = t.size();
    std::size_t t_train = nt * 7 / 10;
    std::size_t t_val = nt * 2 / 10;
    std::size_t t_test = nt / 10;
    std::size_t leftover = nt - t_train - t_val - t_test;
    if (leftover > 0) { ++t_train; --leftover; }
    if (leftover > 0) { ++t_val; --leftover; }
    if (leftover > 0) { ++t_test; --leftover; }

    // Negatives 50/50 between validation and test, leftover to validation.
    const std::size_t nn = n.size();
    const std::size_t n_test = nn / 2;
    const std::size_t n_val = nn - n_test;

    SplitPlan plan;
    plan.seed = repeat_seed;
    plan.scenario = scenario;
    plan.train_targets = take(t, 0, t_train);
    plan.val_targets = take(t, t_train, t_val);
    plan.test_targets = take(t, t_train + t_val, t_test);
    plan.val_negatives = take(n, 0, n_val);
    plan.test_negatives = take(n, n_val, n_test);

    if (scenario == Scenario::kNonPure) {
      const std::size_t moved = plan.val_negatives.size() / 2;
      plan.train_negatives =
          take(plan.val_negatives, 0, moved);
      plan.val_negatives.erase(plan.val_negatives.begin(),
                               plan.val_negatives.begin() +
                                   static_cast<std::ptrdiff_t>(moved));
    }
    plans.push_back(std::move(plan));
  }
  return plans;
}

}  // namespace lpfusion::eval
