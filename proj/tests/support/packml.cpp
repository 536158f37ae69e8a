#include "support/packml.hpp"

#include <set>

namespace css::testing {

using S = State;
using C = Command;

std::map<std::pair<S, C>, S> oracle_command_table() {
  std::map<std::pair<S, C>, S> t = {
      {{S::Idle, C::Start}, S::Starting},         {{S::Complete, C::Reset}, S::Resetting},
      {{S::Stopped, C::Reset}, S::Resetting},     {{S::Execute, C::Hold}, S::Holding},
      {{S::Held, C::Unhold}, S::Unholding},       {{S::Execute, C::Suspend}, S::Suspending},
      {{S::Suspended, C::Unsuspend}, S::Unsuspending}, {{S::Aborted, C::Clear}, S::Clearing},
  };
  const std::set<S> no_stop = {S::Stopped, S::Stopping, S::Aborting, S::Aborted, S::Clearing};
  for (S s : kAllStates) {
    if (!no_stop.count(s)) t[{s, C::Stop}] = S::Stopping;
    if (s != S::Aborting && s != S::Aborted) t[{s, C::Abort}] = S::Aborting;
  }
  return t;
}

const std::map<S, S>& oracle_completion() {
  static const std::map<S, S> m = {
      {S::Starting, S::Execute},     {S::Execute, S::Completing},    {S::Completing, S::Complete},
      {S::Resetting, S::Idle},       {S::Holding, S::Held},          {S::Unholding, S::Execute},
      {S::Suspending, S::Suspended}, {S::Unsuspending, S::Execute},  {S::Stopping, S::Stopped},
      {S::Aborting, S::Aborted},     {S::Clearing, S::Stopped},
  };
  return m;
}

void drive_to(SkillHost& h, const std::string& id, S target) {
  auto fire = [&](C c) { h.fire_command(id, c); };
  auto settle = [&] { h.run_until_quiescent(); };
  auto to_execute = [&] {
    fire(C::Reset);
    settle();
    fire(C::Start);
    h.pump_once();
  };
  switch (target) {
    case S::Stopped: return;
    case S::Resetting: fire(C::Reset); return;
    case S::Idle: fire(C::Reset); settle(); return;
    case S::Starting: fire(C::Reset); settle(); fire(C::Start); return;
    case S::Execute: to_execute(); return;
    case S::Completing:
      to_execute();
      while (h.read_skill(id).state != S::Completing) h.pump_once();
      return;
    case S::Complete: fire(C::Reset); settle(); fire(C::Start); settle(); return;
    case S::Holding: to_execute(); fire(C::Hold); return;
    case S::Held: to_execute(); fire(C::Hold); h.pump_once(); return;
    case S::Unholding: to_execute(); fire(C::Hold); h.pump_once(); fire(C::Unhold); return;
    case S::Suspending: to_execute(); fire(C::Suspend); return;
    case S::Suspended: to_execute(); fire(C::Suspend); h.pump_once(); return;
    case S::Unsuspending: to_execute(); fire(C::Suspend); h.pump_once(); fire(C::Unsuspend); return;
    // Stop is invalid from Stopped, so go through Idle.
    case S::Stopping: fire(C::Reset); settle(); fire(C::Stop); return;
    case S::Aborting: fire(C::Abort); return;
    case S::Aborted: fire(C::Abort); settle(); return;
    case S::Clearing: fire(C::Abort); settle(); fire(C::Clear); return;
  }
}

}  // namespace css::testing
