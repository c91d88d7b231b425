// Copyright 2026 The steinlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef STEINLAB_REPRO_H
#define STEINLAB_REPRO_H

#include <span>
#include <string>
#include <vector>

#include "steinlab/entropy.h"
#include "steinlab/io.h"
#include "steinlab/protocol.h"

namespace steinlab {

struct ReproItem {
  std::string name;
  ExtendedReal expected;
  ExtendedReal got;
  double tol = 0.0;
  bool passed = false;
  /// Set when the item threw instead of producing a value.
  std::string error;
};

struct ReproReport {
  std::vector<ReproItem> items;
  bool all_passed() const;
};

/// Correlated binary null and a skewed alternative used for the one-bit convergence check.
struct ClassicalInstance {
  JointPmf p;
  JointPmf q;
  TypicalityRule rule;
};
ClassicalInstance convergence_instance();

/// Names of the reproduction groups, in run order.
std::vector<std::string> repro_groups();

/// Runs the selected groups (all when `only` is empty). `mean` replaces the geometric mean
/// used by the kappa item. Failures in one item do not affect the others.
ReproReport repro_suite(std::span<const std::string> only = {}, GeometricMeanFn mean = {});

Json to_json(const ReproReport& r);
/// Columns name,expected,got,tol.
std::string to_csv(const ReproReport& r);

}  // namespace steinlab

#endif  // STEINLAB_REPRO_H
