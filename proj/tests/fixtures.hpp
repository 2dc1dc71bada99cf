#pragma once

#include <string>
#include <vector>

#include "netmon/instance.hpp"

namespace netmon::testing {

// Three locations, seven components; the running example of the docs.
inline Instance ex1(int budget = 1) {
  return Instance::from_ids(
      {"x1", "x2", "x3"},
      {{"u1", 0.5}, {"u2", 0.8}, {"u3", 0.2}, {"u4", 0.2},
       {"u5", 0.5}, {"u6", 0.8}, {"u7", 0.5}},
      {{"x1", {"u1", "u2", "u3"}}, {"x2", {"u3", "u4", "u5"}}, {"x3", {"u4", "u6", "u7"}}},
      budget);
}

// Same topology with every level set to `level`.
inline Instance ex1_homogeneous(double level, int budget = 1) {
  return Instance::from_ids(
      {"x1", "x2", "x3"},
      {{"u1", level}, {"u2", level}, {"u3", level}, {"u4", level},
       {"u5", level}, {"u6", level}, {"u7", level}},
      {{"x1", {"u1", "u2", "u3"}}, {"x2", {"u3", "u4", "u5"}}, {"x3", {"u4", "u6", "u7"}}},
      budget);
}

// Two locations with disjoint monitoring sets, criticalities 0.2 and 0.6.
inline Instance disjoint_pair(int budget = 1) {
  return Instance::from_ids({"a", "b"}, {{"p", 0.2}, {"q", 0.9}, {"s", 0.6}},
                            {{"a", {"p", "q"}}, {"b", {"s"}}}, budget);
}

}  // namespace netmon::testing
