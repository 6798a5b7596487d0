#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "basic_lp.hpp"
#include "subinstance.hpp"

namespace cspstream {

// Incidence lists: per local copy, the (constraint copy, position) pairs
// wired to it, always-false dummies excluded, sorted by ((i,l), position).
using Adjacency = std::vector<std::vector<std::pair<int32_t, int>>>;
Adjacency build_adjacency(const SubInstance& sub);

// Breadth-first closure around a center constraint copy: radius 0 is the
// center and its own variable copies; radius t+1 adds every live constraint
// copy sharing a variable copy with the radius-t ball, plus their copies.
struct NeighborhoodBall {
  int32_t center = -1;  // local ccopy id
  int radius = 0;
  std::vector<int32_t> copies;      // BFS order
  std::vector<int32_t> copy_depth;  // hop level each copy was reached at
  std::vector<int32_t> ccopies;     // BFS order, center first
};

NeighborhoodBall extract_ball(const SubInstance& sub, const Adjacency& adj, int32_t center,
                              int radius);

// True iff the center is present and every variable copy within radius r-1
// of it (inside the stored sub-instance) has live degree equal to its
// recorded degree. When that holds, the stored r-ball is the true r-ball.
bool ball_is_fully_sampled(const SubInstance& sub, const Adjacency& adj, int32_t center,
                           int radius);

// Dependency count T: high-tier copies in the ball plus distinct parents of
// low-tier copies. Pr[ball fully sampled] = n^{-cT}.
int64_t count_dependencies(const SubInstance& sub, const NeighborhoodBall& ball);

// The ball as a standalone instance over its variable copies, constraint
// copies in BFS order with the center first. Returns the instance and the
// center's constraint index (always 0).
std::pair<Instance, int64_t> ball_to_instance(const SubInstance& sub,
                                              const NeighborhoodBall& ball);

// A deterministic map from r-balls to [0,1]; must depend only on the
// isomorphism class of the ball.
using ALocMap = std::function<double(const Instance& ball, int64_t center)>;

// Default map: exact relaxation of the ball, reporting the center
// constraint's satisfied z mass maximized over the optimal face (so the
// value is pivot-order independent). Always-false centers give 0.
ALocMap aloc_lp_default(int64_t dimension_cap = default_lp_dimension_cap());

// Oracle map for end-to-end sanity runs: the exact optimum value of the
// ball sub-instance, by (multiplicity-grouped) brute force.
ALocMap aloc_exact_val_oracle();

// Text dump of the ball (instance format, copy ids rendered
// v<parent>.<copy>, one tier line per copy) for goldens and debugging.
std::string serialize_ball(const SubInstance& sub, const NeighborhoodBall& ball);

}  // namespace cspstream
