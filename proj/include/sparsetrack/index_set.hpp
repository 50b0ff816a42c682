// Copyright 2026 the sparsetrack authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPARSETRACK_INDEX_SET_HPP
#define SPARSETRACK_INDEX_SET_HPP

#include <algorithm>
#include <set>
#include <vector>

namespace sparsetrack {

// Ordered set of 0-based column/coefficient indices.
using IndexSet = std::set<int>;

inline IndexSet set_union(const IndexSet& a, const IndexSet& b) {
  IndexSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

inline IndexSet set_minus(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::inserter(out, out.end()));
  return out;
}

inline IndexSet set_intersect(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(out, out.end()));
  return out;
}

inline bool disjoint(const IndexSet& a, const IndexSet& b) {
  return set_intersect(a, b).empty();
}

inline bool is_subset(const IndexSet& a, const IndexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline std::vector<int> to_vector(const IndexSet& s) {
  return std::vector<int>(s.begin(), s.end());
}

}  // namespace sparsetrack

#endif  // SPARSETRACK_INDEX_SET_HPP
