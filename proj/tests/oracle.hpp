#pragma once

#include <functional>
#include <limits>

#include "hubnet/instance.hpp"
#include "hubnet/model.hpp"
#include "hubnet/subproblem.hpp"

namespace hubnet::oracle {

// Reference answers by exhaustive enumeration, for checking the tree search.
// Kept independent of the LP machinery on purpose: designs are listed
// directly and routed with the combinatorial subroutines.

struct BestDesign {
  bool found = false;
  double value = std::numeric_limits<double>::infinity();
  Design s;
  Flows f;
};

// Every design in the policy's domain (nonempty hub set, any backbone over
// the hub set, allocations maximal under MA and one-hub-per-spoke under SA),
// routable or not.
void enumerate_designs(const Instance& inst, const std::function<void(const Design&)>& f);

// The optimal design by enumeration.  Routing uses the shortest-path oracle,
// except under edge flow floors where the flow LP prices each design; there
// the shortest-path value doubles as a lower bound, so designs are priced in
// bound order and the scan stops once no candidate can improve.  A visitor,
// when given, sees every routable design with its flow and value; that
// disables the bound shortcut since skipped designs would stay unpriced.
BestDesign brute_force(const Instance& inst,
                       const std::function<void(const Design&, const Flows&, double)>& visit = {});

}  // namespace hubnet::oracle
