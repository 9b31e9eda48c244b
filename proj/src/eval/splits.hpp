#pragma once

#include <cstdint>
#include <vector>

#include "core/types.hpp"

namespace lpfusion::eval {

enum class Scenario { kPure, kNonPure };

const char* to_string(Scenario scenario);

// One repeat of the split protocol. Targets go 70/20/10 to
// train/validation/test; negatives go 50/50 to validation/test. In the
// non-pure scenario half (floor) of the negative validation samples move
// to the training set. Index sets are disjoint and together cover the
// dataset; train_negatives is empty in the pure scenario.
struct SplitPlan {
  std::uint64_t seed = 0;
  Scenario scenario = Scenario::kPure;
  std::vector<int> train_targets;
  std::vector<int> train_negatives;
  std::vector<int> val_targets;
  std::vector<int> val_negatives;
  std::vector<int> test_targets;
  std::vector<int> test_negatives;
};

// Deterministic given the seed; each repeat gets an independent derived
// stream. Requires at least 10 targets and 2 negatives.
std::vector<SplitPlan> make_splits(const core::LabelVector& labels,
                                   Scenario scenario, int n_repeats,
                                   std::uint64_t seed);

}  // namespace lpfusion::eval
