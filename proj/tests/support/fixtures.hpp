#pragma once

#include "tstar/translate.hpp"
#include "tstar/workspace.hpp"

// Small shared instances used across the planner tests.
namespace fixtures {

// 4x4, 4-connectivity, empty, start (0,0), p1@(3,3), p2@(0,3).
inline tstar::GridWorkspace d1() {
  tstar::GridWorkspace ws(4, 4, 1, tstar::Connectivity::Four, {0, 0, 0});
  ws.add_label({3, 3, 0}, "p1");
  ws.add_label({0, 3, 0}, "p2");
  ws.validate();
  return ws;
}

// 7x7 with the p1 cell fully enclosed by obstacles.
inline tstar::GridWorkspace walled_p1() {
  tstar::GridWorkspace ws(7, 7, 1, tstar::Connectivity::Four, {0, 0, 0});
  for (int dx = -1; dx <= 1; ++dx)
    for (int dy = -1; dy <= 1; ++dy)
      if (dx || dy) ws.add_obstacle({4 + dx, 4 + dy, 0});
  ws.add_label({4, 4, 0}, "p1");
  ws.add_label({0, 3, 0}, "p2");
  ws.validate();
  return ws;
}

// 7x4 where the straight route from p2@(0,0)-side to p1@(6,0) is blocked
// by a wall with a southern gap, forcing a detour.
inline tstar::GridWorkspace detour() {
  tstar::GridWorkspace ws(7, 4, 1, tstar::Connectivity::Four, {0, 0, 0});
  ws.add_obstacle({3, 0, 0});
  ws.add_obstacle({3, 1, 0});
  ws.add_obstacle({3, 2, 0});
  ws.add_label({6, 0, 0}, "p1");
  ws.add_label({0, 1, 0}, "p2");
  ws.validate();
  return ws;
}

inline tstar::BuchiAutomaton patrol2() {
  return tstar::translate_to_buchi(tstar::ltl::parse_ltl("[](<>p1 && <>p2)"));
}

}  // namespace fixtures
